#pragma once

#include "posterforge/core/error.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace posterforge {

enum class DetailLevel { Basic, Medium, Detailed };

std::string_view to_string(DetailLevel level);
std::optional<DetailLevel> detail_level_from_string(std::string_view text);

/// A natural-language poster request.
///
/// `canonical_key` ties basic/medium/detailed rewritings of one request
/// together; generators that honor detail insensitivity key on it instead of
/// the wording.
struct UserRequirement {
    std::string text;
    std::optional<DetailLevel> detail_level;
    std::string locale = "zh";
    std::optional<std::string> canonical_key;

    bool operator==(const UserRequirement&) const = default;
};

/// Throws Error(InvalidRequirement) when the text is blank or the locale is
/// not a syntactically valid BCP-47 tag.
void validate_requirement(const UserRequirement& req);
bool is_valid_locale(std::string_view tag);

struct TextualContent {
    std::string title;
    std::optional<std::string> subtitle;
    std::vector<std::string> body;
    std::vector<std::string> contact;

    /// Title, subtitle, body items, contact items, in that order, skipping
    /// absent or empty entries.
    std::vector<std::string> strings() const;

    bool operator==(const TextualContent&) const = default;
};

enum class StyleId { Illustrative, DesignOriented, Minimalistic, Photorealistic };

inline constexpr StyleId kAllStyles[] = {StyleId::Illustrative, StyleId::DesignOriented, StyleId::Minimalistic,
                                         StyleId::Photorealistic};

/// Wire names: "Illustrative", "Design-Oriented", "Minimalistic", "Photorealistic".
std::string_view to_string(StyleId style);
std::optional<StyleId> style_from_string(std::string_view text);

struct BackgroundAttributes {
    StyleId style = StyleId::Minimalistic;
    std::string caption;

    bool operator==(const BackgroundAttributes&) const = default;
};

struct Resolution {
    std::int64_t width = 0;
    std::int64_t height = 0;

    bool operator==(const Resolution&) const = default;
};

inline constexpr std::int64_t kMinResolution = 64;
inline constexpr std::int64_t kMaxResolution = 8192;

struct KeyParameters {
    Resolution resolution;
    std::string theme;
    std::vector<std::string> elements;
    std::vector<std::string> colors;  // "#RRGGBB", uppercase once parsed
    std::string purpose;

    bool operator==(const KeyParameters&) const = default;
};

struct DesignBlueprint {
    TextualContent textual;
    BackgroundAttributes background;
    KeyParameters params;

    bool operator==(const DesignBlueprint&) const = default;
};

struct Violation {
    std::string path;
    std::string reason;

    bool operator==(const Violation&) const = default;
};

/// True for "#RRGGBB" with case-insensitive hex digits.
bool is_hex_color(std::string_view text);
/// Uppercases a valid hex color; throws Error(InvalidColor) otherwise.
std::string normalize_hex_color(std::string_view text);

std::vector<Violation> validate_blueprint(const DesignBlueprint& bp);

template <typename T>
struct Parsed {
    T value;
    std::vector<Warning> warnings;
};

/// Parses the canonical blueprint JSON document. Unknown keys throw
/// SchemaViolation in strict mode and become warnings in lenient mode.
Parsed<DesignBlueprint> parse_blueprint_with_warnings(std::string_view text, ParseMode mode = ParseMode::Strict);
DesignBlueprint parse_blueprint(std::string_view text, ParseMode mode = ParseMode::Strict);

/// Canonical form: sorted keys, uppercase colors, no insignificant whitespace.
std::string serialize_blueprint(const DesignBlueprint& bp);

}  // namespace posterforge
