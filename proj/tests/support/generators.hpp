#pragma once

#include "posterforge/blueprint.hpp"
#include "posterforge/core/rng.hpp"
#include "posterforge/metrics/frechet.hpp"
#include "posterforge/metrics/overlap.hpp"
#include "posterforge/typography/document.hpp"

#include <string>
#include <vector>

namespace pftest {

using posterforge::Rng;

/// Mixed-script text: Latin letters, digits, CJK ideographs, a few symbols.
/// Never empty, no leading/trailing/double spaces.
std::string random_words(Rng& rng, std::size_t max_words = 6);

/// Code point string for edit-distance tests over a small alphabet so that
/// matches are frequent.
std::u32string random_codepoints(Rng& rng, std::size_t max_len);

std::string random_hex_color(Rng& rng);

posterforge::DesignBlueprint random_blueprint(Rng& rng);
posterforge::UserRequirement random_requirement(Rng& rng);

/// A valid document: nested nodes, multiple runs, fractional rects, all
/// style features. Lengths use denominators in {1, 2, 4, 5, 3}.
posterforge::typography::PosterDocument random_document(Rng& rng);

/// Up to `max_rects` integer rects with coordinates in [0, max_coord].
std::vector<posterforge::metrics::Box> random_boxes(Rng& rng, std::size_t max_rects, std::int64_t max_coord);

/// n Gaussian vectors of `dim` components, optionally correlated.
posterforge::metrics::FeatureSet random_features(Rng& rng, std::size_t n, std::size_t dim, const std::string& prefix);

/// n embeddings ("e000".."e099") of which `pairs` are planted near-copies of
/// an earlier-id vector (cosine >= 0.95); the rest are random directions.
struct PlantedDuplicates {
    posterforge::metrics::FeatureSet features;
    std::vector<std::pair<std::string, std::string>> pairs;  // (earlier id, later id)
};

PlantedDuplicates planted_duplicates(Rng& rng, std::size_t n = 100, std::size_t pairs = 10, std::size_t dim = 64);

}  // namespace pftest
