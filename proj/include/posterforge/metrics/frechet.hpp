#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace posterforge::metrics {

/// n feature vectors of a common dimension, with optional row ids.
struct FeatureSet {
    std::size_t dim = 0;
    std::vector<std::string> ids;
    std::vector<std::vector<double>> vectors;

    std::size_t size() const { return vectors.size(); }
    /// Row for `id`, or nullptr.
    const std::vector<double>* find(const std::string& id) const;
};

/// JSON lines: a header {"dim": n}, then one {"id": "...", "vec": [...]} per
/// row. Throws Error(MalformedFeatureFile) with the offending line number.
FeatureSet read_feature_set(std::istream& in);
FeatureSet read_feature_set(const std::filesystem::path& path);
void write_feature_set(std::ostream& out, const FeatureSet& set);

/// Squared Fréchet distance between the Gaussians fitted to two sets:
/// value = mean_term + trace_term with mean_term = |mu_a - mu_b|^2 and
/// trace_term = tr(S_a + S_b - 2 (S_a S_b)^(1/2)), covariances using n - 1.
struct FrechetReport {
    double value = 0;
    double mean_term = 0;
    double trace_term = 0;
};

/// Throws DimensionMismatch, DegenerateSet (fewer than two rows) or
/// NumericalFailure (non-finite input or a clearly negative eigenvalue).
FrechetReport frechet_distance(const FeatureSet& a, const FeatureSet& b);

nlohmann::json to_json(const FrechetReport& report);

}  // namespace posterforge::metrics
