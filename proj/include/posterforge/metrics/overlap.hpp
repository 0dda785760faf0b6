#pragma once

#include "posterforge/core/rational.hpp"

#include <vector>

#include <json.hpp>

namespace posterforge::metrics {

struct Box {
    Rational left;
    Rational top;
    Rational width;
    Rational height;

    Rational area() const { return width * height; }
};

/// Sum over ordered pairs (i, j), i != j, of |s_i ∩ s_j| / |s_i|.
/// Elements with zero area take part in no pair and contribute 0.
struct OverlapReport {
    double value = 0;
    std::vector<double> per_element;    // one entry per input element
    std::vector<Rational> per_element_exact;
};

Rational intersection_area(const Box& a, const Box& b);

OverlapReport overlap(const std::vector<Box>& elements);

nlohmann::json to_json(const OverlapReport& report);

}  // namespace posterforge::metrics
