#include "posterforge/typography/glyphs.hpp"

#include "posterforge/core/unicode.hpp"

#include <algorithm>

namespace posterforge::typography {

Rational SyntheticGlyphs::advance(char32_t codepoint, const Font& font) const {
    if (unicode::is_cjk(codepoint)) return font.size;
    return font.size * Rational(1, 2);
}

AlphaBitmap SyntheticGlyphs::raster(char32_t codepoint, const Font& font, const Rational& scale) const {
    AlphaBitmap bmp;
    bmp.width = std::max<std::int64_t>(0, (advance(codepoint, font) * scale).round_half_up());
    bmp.height = std::max<std::int64_t>(0, (font.size * scale).round_half_up());
    bmp.alpha.assign(static_cast<std::size_t>(bmp.width * bmp.height), 0);
    if (unicode::is_space(codepoint) || bmp.width == 0 || bmp.height == 0) return bmp;

    // A 4-column (Latin) or 6-column (CJK) by 6-row cell grid inside a 1/8 em
    // margin; cells are switched on by bits of a mixed code point hash.
    const int cols = unicode::is_cjk(codepoint) ? 6 : 4;
    const int rows = 6;
    std::uint64_t bits = static_cast<std::uint64_t>(codepoint) * 0x9E3779B97F4A7C15ull;
    bits ^= bits >> 29;
    bits *= 0xBF58476D1CE4E5B9ull;
    bits ^= bits >> 32;
    // Keep a visible stem so no printable glyph is blank.
    bits |= (1ull << 0) | (1ull << cols) | (1ull << (2 * cols)) | (1ull << (3 * cols)) | (1ull << (4 * cols)) |
            (1ull << (5 * cols));
    const std::uint8_t ink = font.weight >= 700 ? 255 : 200;

    const std::int64_t mx = bmp.width / 8;
    const std::int64_t my = bmp.height / 8;
    const std::int64_t inner_w = std::max<std::int64_t>(1, bmp.width - 2 * mx);
    const std::int64_t inner_h = std::max<std::int64_t>(1, bmp.height - 2 * my);
    for (std::int64_t y = my; y < my + inner_h && y < bmp.height; ++y) {
        const std::int64_t row = (y - my) * rows / inner_h;
        for (std::int64_t x = mx; x < mx + inner_w && x < bmp.width; ++x) {
            const std::int64_t col = (x - mx) * cols / inner_w;
            if ((bits >> (row * cols + col)) & 1u) bmp.alpha[static_cast<std::size_t>(y * bmp.width + x)] = ink;
        }
    }
    return bmp;
}

}  // namespace posterforge::typography
