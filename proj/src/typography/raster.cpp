#include "posterforge/typography/raster.hpp"

#include "posterforge/core/error.hpp"
#include "posterforge/typography/layout.hpp"

#include <algorithm>
#include <map>

namespace posterforge::typography {
namespace {

struct PixelRect {
    std::int64_t x0, y0, x1, y1;  // half-open

    bool empty() const { return x1 <= x0 || y1 <= y0; }

    PixelRect clipped(const PixelRect& other) const {
        return {std::max(x0, other.x0), std::max(y0, other.y0), std::min(x1, other.x1), std::min(y1, other.y1)};
    }
};

PixelRect to_pixels(const Rect& r, const Rational& scale) {
    return {(r.left * scale).round_half_up(), (r.top * scale).round_half_up(), (r.right() * scale).round_half_up(),
            (r.bottom() * scale).round_half_up()};
}

std::uint8_t blend_channel(std::uint32_t src, std::uint32_t dst, std::uint32_t alpha) {
    return static_cast<std::uint8_t>((src * alpha + dst * (255 - alpha) + 127) / 255);
}

void blend(std::uint8_t* dst, const std::uint8_t* src, std::uint32_t alpha) {
    if (alpha == 0) return;
    if (alpha == 255) {
        dst[0] = src[0];
        dst[1] = src[1];
        dst[2] = src[2];
        dst[3] = 255;
        return;
    }
    dst[0] = blend_channel(src[0], dst[0], alpha);
    dst[1] = blend_channel(src[1], dst[1], alpha);
    dst[2] = blend_channel(src[2], dst[2], alpha);
    dst[3] = static_cast<std::uint8_t>(alpha + (dst[3] * (255 - alpha) + 127) / 255);
}

// Pixel-center test against the rounded corners, in doubled integer
// coordinates so the whole test stays exact.
bool inside_rounded(const PixelRect& box, std::int64_t radius, std::int64_t x, std::int64_t y) {
    if (radius <= 0) return true;
    const std::int64_t cx2 = 2 * x + 1;
    const std::int64_t cy2 = 2 * y + 1;
    const std::int64_t left2 = 2 * (box.x0 + radius);
    const std::int64_t right2 = 2 * (box.x1 - radius);
    const std::int64_t top2 = 2 * (box.y0 + radius);
    const std::int64_t bottom2 = 2 * (box.y1 - radius);
    std::int64_t dx = 0, dy = 0;
    if (cx2 < left2) dx = left2 - cx2;
    else if (cx2 > right2) dx = cx2 - right2;
    if (cy2 < top2) dy = top2 - cy2;
    else if (cy2 > bottom2) dy = cy2 - bottom2;
    if (dx == 0 || dy == 0) return true;
    return dx * dx + dy * dy <= 4 * radius * radius;
}

void fill_box(Raster& canvas, const PixelRect& box, std::int64_t radius, const std::array<std::uint8_t, 4>& color) {
    const PixelRect area = box.clipped({0, 0, canvas.width, canvas.height});
    for (std::int64_t y = area.y0; y < area.y1; ++y) {
        for (std::int64_t x = area.x0; x < area.x1; ++x) {
            if (inside_rounded(box, radius, x, y)) blend(canvas.pixel(x, y), color.data(), color[3]);
        }
    }
}

void draw_image(Raster& canvas, const PixelRect& box, std::int64_t radius, const Raster& image) {
    if (box.empty() || image.width <= 0 || image.height <= 0) return;
    const Raster scaled = resample_bilinear(image, box.x1 - box.x0, box.y1 - box.y0);
    const PixelRect area = box.clipped({0, 0, canvas.width, canvas.height});
    for (std::int64_t y = area.y0; y < area.y1; ++y) {
        for (std::int64_t x = area.x0; x < area.x1; ++x) {
            if (!inside_rounded(box, radius, x, y)) continue;
            const std::uint8_t* src = scaled.pixel(x - box.x0, y - box.y0);
            blend(canvas.pixel(x, y), src, src[3]);
        }
    }
}

const Raster& require_image(const ImageSource& images, const std::string& id) {
    const Raster* image = images.find(id);
    if (!image) throw Error(ErrorCode::MissingImageAsset, "missing image asset '" + id + "'", {id});
    return *image;
}

struct EmptyImages final : ImageSource {
    const Raster* find(std::string_view) const override { return nullptr; }
};

}  // namespace

Raster::Raster(std::int64_t w, std::int64_t h, std::array<std::uint8_t, 4> fill) : width(w), height(h) {
    rgba.resize(static_cast<std::size_t>(w * h * 4));
    for (std::size_t i = 0; i < rgba.size(); i += 4) std::copy(fill.begin(), fill.end(), rgba.begin() + static_cast<std::ptrdiff_t>(i));
}

const Raster* ImageMap::find(std::string_view id) const {
    auto it = images_.find(id);
    return it == images_.end() ? nullptr : &it->second;
}

std::array<std::uint8_t, 4> parse_color(std::string_view hex) {
    auto nibble = [](char c) -> std::uint8_t {
        if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
        if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
        if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
        throw Error(ErrorCode::InvalidColor, "invalid color '" + std::string(1, c) + "'");
    };
    if (hex.size() != 7 || hex[0] != '#') throw Error(ErrorCode::InvalidColor, "invalid color '" + std::string(hex) + "'");
    return {static_cast<std::uint8_t>(nibble(hex[1]) * 16 + nibble(hex[2])),
            static_cast<std::uint8_t>(nibble(hex[3]) * 16 + nibble(hex[4])),
            static_cast<std::uint8_t>(nibble(hex[5]) * 16 + nibble(hex[6])), 255};
}

Raster resample_bilinear(const Raster& source, std::int64_t width, std::int64_t height) {
    Raster out(width, height);
    if (width <= 0 || height <= 0 || source.width <= 0 || source.height <= 0) return out;
    if (width == source.width && height == source.height) return source;

    // Source sample position of a destination pixel center, 8 fractional bits.
    auto sample = [](std::int64_t dst, std::int64_t dst_size, std::int64_t src_size, std::int64_t& i0, std::int64_t& i1,
                     std::int64_t& frac) {
        std::int64_t pos = ((2 * dst + 1) * src_size * 256) / (2 * dst_size) - 128;
        if (pos < 0) pos = 0;
        i0 = pos >> 8;
        frac = pos & 255;
        if (i0 >= src_size - 1) {
            i0 = src_size - 1;
            frac = 0;
        }
        i1 = std::min(i0 + 1, src_size - 1);
    };

    std::vector<std::int64_t> xs0(width), xs1(width), fxs(width);
    for (std::int64_t x = 0; x < width; ++x) sample(x, width, source.width, xs0[x], xs1[x], fxs[x]);
    for (std::int64_t y = 0; y < height; ++y) {
        std::int64_t y0, y1, fy;
        sample(y, height, source.height, y0, y1, fy);
        for (std::int64_t x = 0; x < width; ++x) {
            const std::uint8_t* p00 = source.pixel(xs0[x], y0);
            const std::uint8_t* p01 = source.pixel(xs1[x], y0);
            const std::uint8_t* p10 = source.pixel(xs0[x], y1);
            const std::uint8_t* p11 = source.pixel(xs1[x], y1);
            const std::int64_t fx = fxs[x];
            std::uint8_t* dst = out.pixel(x, y);
            for (int c = 0; c < 4; ++c) {
                std::int64_t top = p00[c] * (256 - fx) + p01[c] * fx;
                std::int64_t bottom = p10[c] * (256 - fx) + p11[c] * fx;
                dst[c] = static_cast<std::uint8_t>((top * (256 - fy) + bottom * fy + 32768) >> 16);
            }
        }
    }
    return out;
}

Raster rasterize(const PosterDocument& doc, const GlyphProvider& glyphs, const Rational& scale) {
    return rasterize(doc, glyphs, scale, EmptyImages{});
}

Raster rasterize(const PosterDocument& doc, const GlyphProvider& glyphs, const Rational& scale,
                 const ImageSource& images) {
    if (!scale.is_positive()) throw Error(ErrorCode::ScaleOutOfRange, "scale must be positive");
    const std::int64_t width = (doc.width * scale).ceil();
    const std::int64_t height = (doc.height * scale).ceil();
    if (width < 1 || height < 1 || width > kMaxDocumentDimension || height > kMaxDocumentDimension) {
        throw Error(ErrorCode::ScaleOutOfRange,
                    "raster " + std::to_string(width) + "x" + std::to_string(height) + " outside [1, 8192]");
    }

    Raster canvas(width, height, {255, 255, 255, 255});
    if (const auto* solid = std::get_if<SolidBackground>(&doc.background)) {
        fill_box(canvas, {0, 0, width, height}, 0, parse_color(solid->color));
    } else {
        draw_image(canvas, {0, 0, width, height}, 0, require_image(images, std::get<ImageBackground>(doc.background).image_id));
    }

    std::vector<const Node*> order;
    for_each_node(doc.nodes, [&](const Node& n) { order.push_back(&n); });
    std::stable_sort(order.begin(), order.end(), [](const Node* a, const Node* b) { return a->z_index < b->z_index; });

    std::map<const Node*, LayoutBox> layouts;
    for (const Node* n : order) {
        if (n->has_text()) layouts.emplace(n, layout_node(*n, glyphs));
    }

    const PixelRect bounds{0, 0, width, height};
    for (const Node* n : order) {
        const PixelRect box = to_pixels(n->rect, scale);
        const std::int64_t radius =
            std::min({(n->style.border_radius * scale).round_half_up(), (box.x1 - box.x0) / 2, (box.y1 - box.y0) / 2});
        if (n->style.background_color) fill_box(canvas, box, radius, parse_color(*n->style.background_color));
        if (n->style.background_image) draw_image(canvas, box, radius, require_image(images, *n->style.background_image));

        auto it = layouts.find(n);
        if (it == layouts.end()) continue;
        const PixelRect clip = box.clipped(bounds);
        if (clip.empty()) continue;
        for (const auto& line : it->second.lines) {
            for (const auto& g : line.glyphs) {
                const Font& font = n->runs[g.run].font;
                const AlphaBitmap bmp = glyphs.raster(g.codepoint, font, scale);
                const auto color = parse_color(font.color);
                const Rational glyph_top = line.top + (line.height - font.size) * Rational(1, 2);
                const std::int64_t gx = (g.x * scale).round_half_up();
                const std::int64_t gy = (glyph_top * scale).round_half_up();
                const PixelRect area = PixelRect{gx, gy, gx + bmp.width, gy + bmp.height}.clipped(clip);
                for (std::int64_t y = area.y0; y < area.y1; ++y) {
                    for (std::int64_t x = area.x0; x < area.x1; ++x) {
                        const std::uint8_t a = bmp.alpha[static_cast<std::size_t>((y - gy) * bmp.width + (x - gx))];
                        blend(canvas.pixel(x, y), color.data(), a);
                    }
                }
            }
        }
    }
    return canvas;
}

}  // namespace posterforge::typography
