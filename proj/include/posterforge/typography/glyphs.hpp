#pragma once

#include "posterforge/core/rational.hpp"
#include "posterforge/typography/document.hpp"

#include <cstdint>
#include <vector>

namespace posterforge::typography {

struct AlphaBitmap {
    std::int64_t width = 0;
    std::int64_t height = 0;
    std::vector<std::uint8_t> alpha;  // row-major, width * height
};

/// Font metrics and glyph coverage. advance() must be deterministic and
/// linear in font size: advance at size k*s equals k * advance at size s.
class GlyphProvider {
public:
    virtual ~GlyphProvider() = default;

    virtual Rational advance(char32_t codepoint, const Font& font) const = 0;

    /// Coverage bitmap for the glyph drawn at `scale` device pixels per
    /// document pixel. The bitmap's top-left sits at the glyph's pen position
    /// and the top of its em box.
    virtual AlphaBitmap raster(char32_t codepoint, const Font& font, const Rational& scale) const = 0;
};

/// Fixed-metric stand-in font: CJK code points advance by the font size,
/// everything else by half of it. Glyph shapes are block patterns derived
/// from the code point, so distinct characters render distinctly.
class SyntheticGlyphs final : public GlyphProvider {
public:
    Rational advance(char32_t codepoint, const Font& font) const override;
    AlphaBitmap raster(char32_t codepoint, const Font& font, const Rational& scale) const override;
};

}  // namespace posterforge::typography
