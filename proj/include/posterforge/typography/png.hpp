#pragma once

#include "posterforge/typography/raster.hpp"

#include <string>
#include <string_view>

namespace posterforge::typography {

/// 8-bit RGBA, non-interlaced, fixed compression settings and no time or
/// text chunks, so equal rasters always encode to equal bytes.
std::string encode_png(const Raster& raster);

/// Decodes any PNG libpng understands into 8-bit RGBA. Throws Error(ImageDecode).
Raster decode_png(std::string_view bytes);

}  // namespace posterforge::typography
