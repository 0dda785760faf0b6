#pragma once

#include "posterforge/metrics/frechet.hpp"
#include "posterforge/metrics/overlap.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <tuple>
#include <vector>

// Independent reference implementations. None of them calls into the code
// under test.
namespace pftest {

/// Levenshtein distance by the textbook full matrix.
std::int64_t oracle_edit_distance(const std::u32string& a, const std::u32string& b);

/// Every (deletions, substitutions, insertions) triple achieved by some
/// minimum-cost edit script, found by exhaustive recursion over scripts.
std::set<std::tuple<std::int64_t, std::int64_t, std::int64_t>> oracle_optimal_scripts(const std::u32string& gt,
                                                                                      const std::u32string& pred);

/// Overlap by counting unit cells on the integer grid; boxes must have
/// integer coordinates.
double oracle_pixel_overlap(const std::vector<posterforge::metrics::Box>& boxes);

/// The same cell count on 256x256 bitmaps, one bit per cell; fast enough for
/// large sweeps. Boxes must lie inside [0, 256]^2.
double oracle_bitmap_overlap(const std::vector<posterforge::metrics::Box>& boxes);

/// Frechet distance with plain arrays: Cholesky of one covariance, Jacobi
/// eigenvalues of L^T S_b L, no shared numerics with the library.
double oracle_frechet(const posterforge::metrics::FeatureSet& a, const posterforge::metrics::FeatureSet& b);

/// Symmetric eigenvalues by cyclic Jacobi rotations.
std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> m);

/// Cosine similarity of every unordered pair (i < j), computed directly.
std::vector<std::vector<double>> oracle_similarity_matrix(const std::vector<std::vector<double>>& vectors);

}  // namespace pftest
