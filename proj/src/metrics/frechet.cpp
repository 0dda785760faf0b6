#include "posterforge/metrics/frechet.hpp"

#include "posterforge/core/error.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace posterforge::metrics {
namespace {

constexpr double kEigenTolerance = 1e-10;

struct Moments {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
};

Moments moments(const FeatureSet& s) {
    const auto n = static_cast<Eigen::Index>(s.size());
    const auto d = static_cast<Eigen::Index>(s.dim);
    Eigen::MatrixXd x(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = s.vectors[static_cast<std::size_t>(i)];
        if (row.size() != s.dim) throw Error(ErrorCode::DimensionMismatch, "row length differs from set dimension");
        for (Eigen::Index k = 0; k < d; ++k) {
            const double v = row[static_cast<std::size_t>(k)];
            if (!std::isfinite(v)) throw Error(ErrorCode::NumericalFailure, "non-finite feature value");
            x(i, k) = v;
        }
    }
    Moments m;
    m.mean = x.colwise().mean().transpose();
    const Eigen::MatrixXd centered = x.rowwise() - m.mean.transpose();
    m.cov = centered.transpose() * centered / static_cast<double>(n - 1);
    return m;
}

// Eigenvalues of a symmetric PSD matrix with the shared clamping rule:
// values below -tolerance are a numerical failure, the rest clamp to zero.
Eigen::VectorXd clamped_eigenvalues(const Eigen::VectorXd& values, double tolerance, const char* what) {
    Eigen::VectorXd out = values;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        if (out(i) < -tolerance) {
            throw Error(ErrorCode::NumericalFailure, std::string(what) + " has a negative eigenvalue",
                        {std::to_string(out(i))});
        }
        if (out(i) < 0) out(i) = 0;
    }
    return out;
}

}  // namespace

FrechetReport frechet_distance(const FeatureSet& a, const FeatureSet& b) {
    if (a.dim != b.dim) {
        throw Error(ErrorCode::DimensionMismatch, "feature dimensions differ",
                    {std::to_string(a.dim), std::to_string(b.dim)});
    }
    if (a.dim == 0) throw Error(ErrorCode::DimensionMismatch, "feature dimension must be positive");
    if (a.size() < 2 || b.size() < 2) throw Error(ErrorCode::DegenerateSet, "each set needs at least two vectors");

    const Moments ma = moments(a), mb = moments(b);

    // S_a^(1/2) from the eigendecomposition of S_a. Its eigenvalue floor is
    // relative to the matrix scale since S_a itself is data, not a residual.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ea(ma.cov);
    if (ea.info() != Eigen::Success) throw Error(ErrorCode::NumericalFailure, "eigendecomposition of S_a failed");
    const double scale_a = std::max(1.0, ea.eigenvalues().cwiseAbs().maxCoeff());
    const Eigen::VectorXd la = clamped_eigenvalues(ea.eigenvalues(), kEigenTolerance * scale_a, "S_a");
    const Eigen::MatrixXd sqrt_a = ea.eigenvectors() * la.cwiseSqrt().asDiagonal() * ea.eigenvectors().transpose();

    Eigen::MatrixXd inner = sqrt_a * mb.cov * sqrt_a;
    inner = (inner + inner.transpose()) / 2;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> em(inner, Eigen::EigenvaluesOnly);
    if (em.info() != Eigen::Success) throw Error(ErrorCode::NumericalFailure, "eigendecomposition failed");
    const Eigen::VectorXd lm = clamped_eigenvalues(em.eigenvalues(), kEigenTolerance, "S_a^(1/2) S_b S_a^(1/2)");

    FrechetReport r;
    r.mean_term = (ma.mean - mb.mean).squaredNorm();
    r.trace_term = ma.cov.trace() + mb.cov.trace() - 2 * lm.cwiseSqrt().sum();
    r.value = std::max(0.0, r.mean_term + r.trace_term);
    if (!std::isfinite(r.value)) throw Error(ErrorCode::NumericalFailure, "distance is not finite");
    return r;
}

nlohmann::json to_json(const FrechetReport& r) {
    return {{"value", r.value}, {"mean_term", r.mean_term}, {"trace_term", r.trace_term}};
}

}  // namespace posterforge::metrics
