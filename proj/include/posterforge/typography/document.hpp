#pragma once

#include "posterforge/core/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace posterforge::typography {

/// Axis-aligned rectangle in document pixels, origin at the poster's top-left.
struct Rect {
    Rational left;
    Rational top;
    Rational width;
    Rational height;

    Rational right() const { return left + width; }
    Rational bottom() const { return top + height; }

    bool operator==(const Rect&) const = default;
};

enum class TextAlign { Left, Center, Right };

std::string_view to_string(TextAlign align);

struct Font {
    std::string family = "sans-serif";
    Rational size = 16;
    int weight = 400;  // 400 or 700
    std::string color = "#000000";
    Rational letter_spacing = 0;
    Rational line_height = Rational(6, 5);  // multiplier of size, >= 1
    TextAlign align = TextAlign::Left;

    bool operator==(const Font&) const = default;
};

struct TextRun {
    std::string text;
    Font font;

    bool operator==(const TextRun&) const = default;
};

struct BoxStyle {
    std::optional<std::string> background_color;  // "#RRGGBB"
    std::optional<std::string> background_image;  // image id
    Rational border_radius = 0;

    bool operator==(const BoxStyle&) const = default;
};

enum class NodeKind { Div, Img };

/// A positioned element. Holds child nodes or text runs, never both.
/// An Img node draws `style.background_image` stretched over its rect.
struct Node {
    std::string id;
    NodeKind kind = NodeKind::Div;
    Rect rect;
    std::int64_t z_index = 0;
    BoxStyle style;
    std::vector<Node> children;
    std::vector<TextRun> runs;

    bool has_text() const { return !runs.empty(); }
    bool is_leaf() const { return children.empty(); }

    bool operator==(const Node&) const = default;
};

struct SolidBackground {
    std::string color = "#FFFFFF";
    bool operator==(const SolidBackground&) const = default;
};

struct ImageBackground {
    std::string image_id;
    bool operator==(const ImageBackground&) const = default;
};

using PageBackground = std::variant<SolidBackground, ImageBackground>;

struct PosterDocument {
    Rational width = 1;
    Rational height = 1;
    PageBackground background = SolidBackground{};
    std::vector<Node> nodes;

    bool operator==(const PosterDocument&) const = default;
};

inline constexpr std::int64_t kMaxDocumentDimension = 8192;

/// Pre-order walk over every node in the tree.
template <typename Fn>
void for_each_node(const std::vector<Node>& nodes, Fn&& fn) {
    for (const auto& n : nodes) {
        fn(n);
        for_each_node(n.children, fn);
    }
}

template <typename Fn>
void for_each_node(std::vector<Node>& nodes, Fn&& fn) {
    for (auto& n : nodes) {
        fn(n);
        for_each_node(n.children, fn);
    }
}

const Node* find_node(const PosterDocument& doc, std::string_view id);
Node* find_node(PosterDocument& doc, std::string_view id);

/// Each node's runs concatenated, in document pre-order; nodes without text
/// are skipped.
std::vector<std::string> extract_text(const PosterDocument& doc);

/// Multiplies every length by k exactly. Throws ScaleOutOfRange when the
/// resulting page dimensions leave [1, 8192].
PosterDocument scale_document(const PosterDocument& doc, const Rational& k);

/// Structural checks: positive dims, unique non-empty ids, non-negative box
/// sizes, children xor runs, non-empty runs with positive font size. Returns
/// human-readable problems, empty when valid.
std::vector<std::string> validate_document(const PosterDocument& doc);

}  // namespace posterforge::typography
