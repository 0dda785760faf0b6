#pragma once

#include "posterforge/core/rational.hpp"
#include "posterforge/typography/document.hpp"
#include "posterforge/typography/glyphs.hpp"

#include <string>
#include <vector>

namespace posterforge::typography {

struct PositionedGlyph {
    char32_t codepoint = 0;
    std::size_t run = 0;  // index into the node's runs
    Rational x;           // absolute pen position
    Rational advance;     // glyph advance plus letter spacing

    bool operator==(const PositionedGlyph&) const = default;
};

struct LayoutLine {
    Rational top;     // absolute
    Rational height;  // max of size * line_height over the line's glyphs
    Rational width;   // sum of glyph advances
    std::vector<PositionedGlyph> glyphs;

    bool operator==(const LayoutLine&) const = default;
};

struct LayoutBox {
    std::string node_id;
    Rect rect;
    std::vector<LayoutLine> lines;
    bool overflow = false;

    bool operator==(const LayoutBox&) const = default;
};

/// Greedy line breaking for every text node, in document pre-order.
///
/// Breaks are allowed after spaces and between two CJK code points. A word
/// wider than its box is split between glyphs; a single glyph wider than the
/// box gets its own line and sets `overflow`. Spaces that end a wrapped line
/// are dropped. Lines taller than the box are kept (the rasterizer clips
/// them) and set `overflow`. Boxes with zero width or height get no lines.
std::vector<LayoutBox> compute_layout(const PosterDocument& doc, const GlyphProvider& glyphs);

LayoutBox layout_node(const Node& node, const GlyphProvider& glyphs);

}  // namespace posterforge::typography
