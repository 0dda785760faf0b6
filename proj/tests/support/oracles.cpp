#include "oracles.hpp"

#include <algorithm>
#include <array>
#include <bitset>
#include <cmath>
#include <map>
#include <stdexcept>

namespace pftest {

std::int64_t oracle_edit_distance(const std::u32string& a, const std::u32string& b) {
    const std::size_t n = a.size(), m = b.size();
    std::vector<std::vector<std::int64_t>> d(n + 1, std::vector<std::int64_t>(m + 1, 0));
    for (std::size_t i = 0; i <= n; ++i) d[i][0] = static_cast<std::int64_t>(i);
    for (std::size_t j = 0; j <= m; ++j) d[0][j] = static_cast<std::int64_t>(j);
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= m; ++j) {
            const std::int64_t sub = d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, sub});
        }
    }
    return d[n][m];
}

std::set<std::tuple<std::int64_t, std::int64_t, std::int64_t>> oracle_optimal_scripts(const std::u32string& gt,
                                                                                      const std::u32string& pred) {
    // Every script for the suffixes gt[i:], pred[j:] as (cost, D, S, I); keep
    // only minimum-cost ones at each cell.
    using Triple = std::tuple<std::int64_t, std::int64_t, std::int64_t>;
    std::map<std::pair<std::size_t, std::size_t>, std::pair<std::int64_t, std::set<Triple>>> memo;
    auto solve = [&](auto&& self, std::size_t i, std::size_t j) -> const std::pair<std::int64_t, std::set<Triple>>& {
        auto key = std::make_pair(i, j);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        std::vector<std::pair<std::int64_t, Triple>> options;
        if (i == gt.size() && j == pred.size()) {
            options.push_back({0, {0, 0, 0}});
        }
        if (i < gt.size()) {  // delete gt[i]
            const auto& r = self(self, i + 1, j);
            for (const auto& [d, s, in] : r.second) options.push_back({r.first + 1, {d + 1, s, in}});
        }
        if (j < pred.size()) {  // insert pred[j]
            const auto& r = self(self, i, j + 1);
            for (const auto& [d, s, in] : r.second) options.push_back({r.first + 1, {d, s, in + 1}});
        }
        if (i < gt.size() && j < pred.size()) {
            const auto& r = self(self, i + 1, j + 1);
            const std::int64_t c = gt[i] == pred[j] ? 0 : 1;
            for (const auto& [d, s, in] : r.second) options.push_back({r.first + c, {d, s + c, in}});
        }
        std::int64_t best = INT64_MAX;
        for (const auto& o : options) best = std::min(best, o.first);
        std::set<Triple> triples;
        for (const auto& o : options) {
            if (o.first == best) triples.insert(o.second);
        }
        return memo.emplace(key, std::make_pair(best, std::move(triples))).first->second;
    };
    return solve(solve, 0, 0).second;
}

double oracle_pixel_overlap(const std::vector<posterforge::metrics::Box>& boxes) {
    struct Cells {
        std::int64_t x0, y0, x1, y1;
    };
    std::vector<Cells> cells;
    for (const auto& b : boxes) {
        if (!b.left.is_integer() || !b.top.is_integer() || !b.width.is_integer() || !b.height.is_integer()) {
            throw std::invalid_argument("pixel oracle needs integer boxes");
        }
        cells.push_back({b.left.num(), b.top.num(), b.left.num() + b.width.num(), b.top.num() + b.height.num()});
    }
    double total = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& a = cells[i];
        const std::int64_t area = (a.x1 - a.x0) * (a.y1 - a.y0);
        if (area == 0) continue;
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (i == j) continue;
            const auto& b = cells[j];
            if ((b.x1 - b.x0) * (b.y1 - b.y0) == 0) continue;
            std::int64_t shared = 0;
            for (std::int64_t y = a.y0; y < a.y1; ++y) {
                for (std::int64_t x = a.x0; x < a.x1; ++x) {
                    if (x >= b.x0 && x < b.x1 && y >= b.y0 && y < b.y1) ++shared;
                }
            }
            total += static_cast<double>(shared) / static_cast<double>(area);
        }
    }
    return total;
}

double oracle_bitmap_overlap(const std::vector<posterforge::metrics::Box>& boxes) {
    constexpr std::int64_t kSide = 256;
    using Bitmap = std::array<std::bitset<kSide>, kSide>;
    std::vector<Bitmap> maps(boxes.size());
    std::vector<std::size_t> areas(boxes.size(), 0);
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        const auto& b = boxes[i];
        if (!b.left.is_integer() || !b.top.is_integer() || !b.width.is_integer() || !b.height.is_integer()) {
            throw std::invalid_argument("bitmap oracle needs integer boxes");
        }
        const std::int64_t x0 = b.left.num(), y0 = b.top.num(), x1 = x0 + b.width.num(), y1 = y0 + b.height.num();
        if (x0 < 0 || y0 < 0 || x1 > kSide || y1 > kSide) throw std::invalid_argument("box outside the bitmap");
        for (std::int64_t y = y0; y < y1; ++y) {
            for (std::int64_t x = x0; x < x1; ++x) maps[i][y].set(x);
        }
        for (const auto& row : maps[i]) areas[i] += row.count();
    }
    double total = 0;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        if (areas[i] == 0) continue;
        for (std::size_t j = 0; j < boxes.size(); ++j) {
            if (i == j || areas[j] == 0) continue;
            std::size_t shared = 0;
            for (std::int64_t y = 0; y < kSide; ++y) shared += (maps[i][y] & maps[j][y]).count();
            total += static_cast<double>(shared) / static_cast<double>(areas[i]);
        }
    }
    return total;
}

std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> m) {
    const std::size_t n = m.size();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) off += m[p][q] * m[p][q];
        }
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(m[p][q]) < 1e-300) continue;
                const double theta = (m[q][q] - m[p][p]) / (2 * m[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1 / std::sqrt(t * t + 1), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {  // columns p, q
                    const double mkp = m[k][p], mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {  // rows p, q
                    const double mpk = m[p][k], mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = m[i][i];
    return eig;
}

namespace {

using Matrix = std::vector<std::vector<double>>;

void moments(const posterforge::metrics::FeatureSet& s, std::vector<double>& mean, Matrix& cov) {
    const std::size_t d = s.dim, n = s.size();
    mean.assign(d, 0);
    for (const auto& v : s.vectors) {
        for (std::size_t k = 0; k < d; ++k) mean[k] += v[k];
    }
    for (auto& x : mean) x /= static_cast<double>(n);
    cov.assign(d, std::vector<double>(d, 0));
    for (const auto& v : s.vectors) {
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t c = 0; c < d; ++c) cov[r][c] += (v[r] - mean[r]) * (v[c] - mean[c]);
        }
    }
    for (auto& row : cov) {
        for (auto& x : row) x /= static_cast<double>(n - 1);
    }
}

Matrix cholesky(const Matrix& a) {
    const std::size_t n = a.size();
    Matrix l(n, std::vector<double>(n, 0));
    for (std::size_t j = 0; j < n; ++j) {
        double diag = a[j][j];
        for (std::size_t k = 0; k < j; ++k) diag -= l[j][k] * l[j][k];
        if (diag <= 0) throw std::domain_error("covariance is not positive definite");
        l[j][j] = std::sqrt(diag);
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = a[i][j];
            for (std::size_t k = 0; k < j; ++k) v -= l[i][k] * l[j][k];
            l[i][j] = v / l[j][j];
        }
    }
    return l;
}

}  // namespace

double oracle_frechet(const posterforge::metrics::FeatureSet& a, const posterforge::metrics::FeatureSet& b) {
    std::vector<double> mu_a, mu_b;
    Matrix sa, sb;
    moments(a, mu_a, sa);
    moments(b, mu_b, sb);
    const std::size_t d = a.dim;
    double mean_term = 0;
    for (std::size_t k = 0; k < d; ++k) mean_term += (mu_a[k] - mu_b[k]) * (mu_a[k] - mu_b[k]);

    // S_a S_b is similar to L^T S_b L (S_a = L L^T), which is symmetric PSD.
    const Matrix l = cholesky(sa);
    Matrix t(d, std::vector<double>(d, 0));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            double v = 0;
            for (std::size_t p = 0; p < d; ++p) {
                for (std::size_t q = 0; q < d; ++q) v += l[p][i] * sb[p][q] * l[q][j];
            }
            t[i][j] = v;
        }
    }
    double root_trace = 0;
    for (double e : jacobi_eigenvalues(t)) root_trace += std::sqrt(std::max(e, 0.0));
    double trace = 0;
    for (std::size_t k = 0; k < d; ++k) trace += sa[k][k] + sb[k][k];
    return mean_term + trace - 2 * root_trace;
}

std::vector<std::vector<double>> oracle_similarity_matrix(const std::vector<std::vector<double>>& vectors) {
    const std::size_t n = vectors.size();
    std::vector<std::vector<double>> sim(n, std::vector<double>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double dot = 0, na = 0, nb = 0;
            for (std::size_t k = 0; k < vectors[i].size(); ++k) {
                dot += vectors[i][k] * vectors[j][k];
                na += vectors[i][k] * vectors[i][k];
                nb += vectors[j][k] * vectors[j][k];
            }
            sim[i][j] = (na == 0 || nb == 0) ? 0 : dot / std::sqrt(na * nb);
        }
    }
    return sim;
}

}  // namespace pftest
