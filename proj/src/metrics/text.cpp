#include "posterforge/metrics/text.hpp"

#include "posterforge/core/error.hpp"
#include "posterforge/core/unicode.hpp"

#include <algorithm>

namespace posterforge::metrics {
namespace {

std::string join_lines(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += '\n';
        out += parts[i];
    }
    return out;
}

}  // namespace

std::int64_t edit_distance(std::u32string_view a, std::u32string_view b) {
    std::vector<std::int64_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<std::int64_t>(j);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = static_cast<std::int64_t>(i);
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

TextAccuracyReport score_text(std::string_view ground_truth, std::string_view predicted) {
    const std::u32string gt = unicode::decode_utf8(ground_truth);
    const std::u32string pr = unicode::decode_utf8(predicted);
    if (gt.empty()) throw Error(ErrorCode::EmptyGroundTruth, "ground truth is empty");

    const std::size_t n = gt.size(), m = pr.size(), w = m + 1;
    std::vector<std::int32_t> d((n + 1) * w);
    for (std::size_t j = 0; j <= m; ++j) d[j] = static_cast<std::int32_t>(j);
    for (std::size_t i = 1; i <= n; ++i) {
        d[i * w] = static_cast<std::int32_t>(i);
        for (std::size_t j = 1; j <= m; ++j) {
            d[i * w + j] = std::min({d[(i - 1) * w + j] + 1, d[i * w + j - 1] + 1,
                                     d[(i - 1) * w + j - 1] + (gt[i - 1] == pr[j - 1] ? 0 : 1)});
        }
    }

    TextAccuracyReport r;
    r.n_t = static_cast<std::int64_t>(n);
    r.n_p = static_cast<std::int64_t>(m);
    std::size_t i = n, j = m;
    while (i > 0 || j > 0) {
        const std::int32_t here = d[i * w + j];
        if (i > 0 && j > 0 && gt[i - 1] == pr[j - 1] && here == d[(i - 1) * w + j - 1]) {
            ++r.matches;
            --i, --j;
        } else if (i > 0 && j > 0 && here == d[(i - 1) * w + j - 1] + 1) {
            ++r.substitutions;
            --i, --j;
        } else if (i > 0 && here == d[(i - 1) * w + j] + 1) {
            ++r.deletions;
            --i;
        } else {
            ++r.insertions;
            --j;
        }
    }
    r.edit_distance = r.deletions + r.substitutions + r.insertions;
    r.cr = static_cast<double>(r.n_t - r.deletions - r.substitutions) / static_cast<double>(r.n_t);
    r.precision = m == 0 ? 0.0 : static_cast<double>(r.matches) / static_cast<double>(m);
    r.recall = static_cast<double>(r.matches) / static_cast<double>(n);
    r.f1 = r.precision + r.recall == 0 ? 0.0 : 2 * r.precision * r.recall / (r.precision + r.recall);
    return r;
}

TextAccuracyReport score_text(const std::vector<std::string>& ground_truth, const std::vector<std::string>& predicted) {
    return score_text(join_lines(ground_truth), join_lines(predicted));
}

nlohmann::json to_json(const TextAccuracyReport& r) {
    return {{"N_t", r.n_t},         {"N_p", r.n_p},
            {"D_e", r.deletions},   {"S_e", r.substitutions},
            {"I_e", r.insertions},  {"matches", r.matches},
            {"edit_distance", r.edit_distance},
            {"CR", r.cr},           {"precision", r.precision},
            {"recall", r.recall},   {"F1", r.f1}};
}

}  // namespace posterforge::metrics
