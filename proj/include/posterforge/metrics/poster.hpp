#pragma once

#include "posterforge/metrics/overlap.hpp"
#include "posterforge/typography/document.hpp"

#include <string>
#include <vector>

namespace posterforge::metrics {

/// The layout elements of a poster: every leaf node in pre-order. Container
/// nodes are excluded so a group does not count as overlapping its members.
struct PosterElements {
    std::vector<std::string> ids;
    std::vector<Box> boxes;
};

PosterElements poster_elements(const typography::PosterDocument& doc);

/// overlap() over poster_elements(), with per-element values keyed by id.
nlohmann::json poster_overlap_json(const typography::PosterDocument& doc);

}  // namespace posterforge::metrics
