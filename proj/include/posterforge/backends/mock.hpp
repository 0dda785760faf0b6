#pragma once

#include "posterforge/blueprint.hpp"
#include "posterforge/typography/raster.hpp"

#include <cstdint>
#include <string>

namespace posterforge::backends::mock {

/// Keyed on the requirement's canonical key when present (the trimmed text
/// otherwise), its locale and the seed; detail level and wording beyond the
/// key are ignored, so rewritings sharing a key give equal blueprints.
DesignBlueprint blueprint(const UserRequirement& req, std::uint64_t seed);

/// Procedural gradient keyed by (style, caption digest, seed). Each style
/// has its own palette family and texture.
typography::Raster background(const BackgroundAttributes& attrs, Resolution resolution, std::uint64_t seed);

/// Template poster: every text block of the blueprint stacked top to bottom
/// in non-overlapping boxes, fonts shrunk until the stack fits the page.
std::string layout(const DesignBlueprint& bp, const std::string& background_id);

}  // namespace posterforge::backends::mock
