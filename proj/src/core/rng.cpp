#include "posterforge/core/rng.hpp"

#include <cmath>
#include <numbers>

namespace posterforge {

double Rng::normal() {
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace posterforge
