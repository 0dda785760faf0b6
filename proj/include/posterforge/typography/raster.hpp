#pragma once

#include "posterforge/core/rational.hpp"
#include "posterforge/typography/document.hpp"
#include "posterforge/typography/glyphs.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace posterforge::typography {

/// 8-bit RGBA pixels, row-major, no padding.
struct Raster {
    std::int64_t width = 0;
    std::int64_t height = 0;
    std::vector<std::uint8_t> rgba;

    Raster() = default;
    Raster(std::int64_t w, std::int64_t h, std::array<std::uint8_t, 4> fill = {0, 0, 0, 0});

    std::uint8_t* pixel(std::int64_t x, std::int64_t y) { return rgba.data() + 4 * (y * width + x); }
    const std::uint8_t* pixel(std::int64_t x, std::int64_t y) const { return rgba.data() + 4 * (y * width + x); }

    bool operator==(const Raster&) const = default;
};

/// Lookup of decoded images referenced by id from a document.
class ImageSource {
public:
    virtual ~ImageSource() = default;
    virtual const Raster* find(std::string_view id) const = 0;
};

class ImageMap final : public ImageSource {
public:
    void insert(std::string id, Raster image) { images_.insert_or_assign(std::move(id), std::move(image)); }
    const Raster* find(std::string_view id) const override;

private:
    std::map<std::string, Raster, std::less<>> images_;
};

/// Bilinear resample onto a width x height grid, integer fixed-point throughout.
Raster resample_bilinear(const Raster& source, std::int64_t width, std::int64_t height);

/// Paints the document at `scale` device pixels per document pixel onto a
/// ceil(scale*w) x ceil(scale*h) canvas. Background first, then nodes in
/// ascending z-index (document order on ties): box fill, then glyphs clipped
/// to the box. Coordinates are rounded half-up only here.
///
/// Throws ScaleOutOfRange if the canvas would exceed 8192 px on a side and
/// MissingImageAsset for an unresolved image id.
Raster rasterize(const PosterDocument& doc, const GlyphProvider& glyphs, const Rational& scale,
                 const ImageSource& images);

Raster rasterize(const PosterDocument& doc, const GlyphProvider& glyphs, const Rational& scale);

/// Parses "#RRGGBB".
std::array<std::uint8_t, 4> parse_color(std::string_view hex);

}  // namespace posterforge::typography
