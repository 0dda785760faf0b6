#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace posterforge::metrics {

/// Character-level accuracy of a predicted string against ground truth.
/// Counts come from one canonical minimal edit script: when several scripts
/// are minimal, the backtrace prefers match, then substitution, then
/// deletion, then insertion.
struct TextAccuracyReport {
    std::int64_t n_t = 0;            // ground-truth code points
    std::int64_t n_p = 0;            // predicted code points
    std::int64_t deletions = 0;      // ground-truth characters missing from the prediction
    std::int64_t substitutions = 0;
    std::int64_t insertions = 0;     // extra predicted characters
    std::int64_t matches = 0;
    std::int64_t edit_distance = 0;
    double cr = 0;                   // (N_t - D - S) / N_t, may be negative
    double precision = 0;
    double recall = 0;
    double f1 = 0;

    bool operator==(const TextAccuracyReport&) const = default;
};

/// Throws Error(EmptyGroundTruth) when `ground_truth` is empty.
TextAccuracyReport score_text(std::string_view ground_truth, std::string_view predicted);

/// Joins each list with a single '\n' and scores the results.
TextAccuracyReport score_text(const std::vector<std::string>& ground_truth, const std::vector<std::string>& predicted);

/// Plain Levenshtein distance over code points.
std::int64_t edit_distance(std::u32string_view a, std::u32string_view b);

nlohmann::json to_json(const TextAccuracyReport& report);

}  // namespace posterforge::metrics
