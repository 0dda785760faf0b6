#include "generators.hpp"

#include "posterforge/core/unicode.hpp"

#include <cstdio>

namespace pftest {
namespace {

using posterforge::Rational;
namespace typo = posterforge::typography;

constexpr const char* kLatin[] = {"sale", "Open", "music", "Festival", "café", "50%", "night", "A&B", "<new>",
                                  "\"quoted\"", "it's", "2026", "Summer", "tea", "x"};
constexpr const char* kCjk[] = {"春季", "音乐节", "城市", "公园", "欢迎", "参加", "优惠", "开幕", "咖啡", "新品"};

template <typename T, std::size_t N>
const T& pick(Rng& rng, const T (&items)[N]) {
    return items[rng.below(N)];
}

Rational random_length(Rng& rng, std::int64_t max_whole) {
    static constexpr std::int64_t kDens[] = {1, 1, 2, 4, 5, 3};
    const std::int64_t den = pick(rng, kDens);
    return Rational(rng.between(0, max_whole * den), den);
}

typo::Font random_font(Rng& rng) {
    static constexpr const char* kFamilies[] = {"sans-serif", "serif", "Noto Sans CJK"};
    static constexpr typo::TextAlign kAligns[] = {typo::TextAlign::Left, typo::TextAlign::Center, typo::TextAlign::Right};
    typo::Font f;
    f.family = pick(rng, kFamilies);
    f.size = Rational(rng.between(8, 64)) + Rational(rng.between(0, 3), 4);
    f.weight = rng.below(2) ? 700 : 400;
    f.color = random_hex_color(rng);
    f.letter_spacing = Rational(rng.between(0, 4), 2);
    static const Rational kLineHeights[] = {Rational(1), Rational(6, 5), Rational(3, 2), Rational(2)};
    f.line_height = pick(rng, kLineHeights);
    f.align = pick(rng, kAligns);
    return f;
}

void fill_node(Rng& rng, typo::Node& node, const Rational& page_w, const Rational& page_h, int depth, int& counter) {
    node.id = "n" + std::to_string(counter++);
    node.rect.left = random_length(rng, page_w.floor() / 2);
    node.rect.top = random_length(rng, page_h.floor() / 2);
    node.rect.width = random_length(rng, page_w.floor() / 2);
    node.rect.height = random_length(rng, page_h.floor() / 2);
    node.z_index = rng.between(-2, 3);
    if (rng.below(3) == 0) node.style.background_color = random_hex_color(rng);
    if (rng.below(4) == 0) node.style.border_radius = random_length(rng, 12);

    const auto shape = rng.below(6);
    if (shape == 0) {
        node.kind = typo::NodeKind::Img;
        node.style.background_image = "img-" + std::to_string(rng.below(4));
    } else if (shape == 1 && depth < 2) {
        const auto n = rng.between(1, 3);
        for (std::int64_t i = 0; i < n; ++i) {
            node.children.emplace_back();
            fill_node(rng, node.children.back(), page_w, page_h, depth + 1, counter);
        }
    } else if (shape <= 4) {
        const auto n = rng.between(1, 3);
        for (std::int64_t i = 0; i < n; ++i) node.runs.push_back({random_words(rng), random_font(rng)});
    }
}

}  // namespace

std::string random_words(Rng& rng, std::size_t max_words) {
    const auto n = rng.between(1, static_cast<std::int64_t>(max_words));
    std::string out;
    for (std::int64_t i = 0; i < n; ++i) {
        const bool cjk = rng.below(2) == 0;
        const std::string word = cjk ? pick(rng, kCjk) : pick(rng, kLatin);
        if (!out.empty() && !(cjk && rng.below(2) == 0)) out += ' ';
        out += word;
    }
    return out;
}

std::u32string random_codepoints(Rng& rng, std::size_t max_len) {
    static constexpr char32_t kAlphabet[] = {U'a', U'b', U'c', U'd', U'e', U' ', U'1', U'春', U'音', U'乐', U'节', U'é'};
    const auto len = rng.below(max_len + 1);
    std::u32string s;
    for (std::uint64_t i = 0; i < len; ++i) s.push_back(pick(rng, kAlphabet));
    return s;
}

std::string random_hex_color(Rng& rng) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%06llX", static_cast<unsigned long long>(rng.below(0x1000000)));
    return buf;
}

posterforge::DesignBlueprint random_blueprint(Rng& rng) {
    static constexpr posterforge::StyleId kStyles[] = {
        posterforge::StyleId::Illustrative, posterforge::StyleId::DesignOriented, posterforge::StyleId::Minimalistic,
        posterforge::StyleId::Photorealistic};
    posterforge::DesignBlueprint bp;
    bp.textual.title = random_words(rng, 4);
    if (rng.below(2)) bp.textual.subtitle = random_words(rng, 5);
    for (auto i = rng.below(4); i > 0; --i) bp.textual.body.push_back(random_words(rng, 8));
    for (auto i = rng.below(3); i > 0; --i) bp.textual.contact.push_back("Tel 021-" + std::to_string(rng.between(1000, 9999)));
    bp.background.style = pick(rng, kStyles);
    bp.background.caption = random_words(rng, 6);
    bp.params.resolution = {rng.between(200, 1400), rng.between(200, 1400)};
    bp.params.theme = random_words(rng, 2);
    for (auto i = rng.below(3); i > 0; --i) bp.params.elements.push_back(random_words(rng, 2));
    for (auto i = rng.below(4); i > 0; --i) bp.params.colors.push_back(random_hex_color(rng));
    bp.params.purpose = random_words(rng, 3);
    return bp;
}

posterforge::UserRequirement random_requirement(Rng& rng) {
    static constexpr const char* kLocales[] = {"zh", "en", "zh-CN", "en-US"};
    posterforge::UserRequirement req;
    req.text = random_words(rng, 10);
    req.locale = pick(rng, kLocales);
    return req;
}

typo::PosterDocument random_document(Rng& rng) {
    typo::PosterDocument doc;
    doc.width = Rational(rng.between(64, 1200)) + Rational(rng.between(0, 1), 2);
    doc.height = Rational(rng.between(64, 1200)) + Rational(rng.between(0, 1), 2);
    if (rng.below(3) == 0) {
        doc.background = typo::ImageBackground{"bg-" + std::to_string(rng.below(100))};
    } else {
        doc.background = typo::SolidBackground{random_hex_color(rng)};
    }
    int counter = 0;
    const auto n = rng.between(0, 6);
    for (std::int64_t i = 0; i < n; ++i) {
        doc.nodes.emplace_back();
        fill_node(rng, doc.nodes.back(), doc.width, doc.height, 0, counter);
    }
    return doc;
}

std::vector<posterforge::metrics::Box> random_boxes(Rng& rng, std::size_t max_rects, std::int64_t max_coord) {
    std::vector<posterforge::metrics::Box> boxes;
    const auto n = rng.below(max_rects + 1);
    for (std::uint64_t i = 0; i < n; ++i) {
        const auto x0 = rng.between(0, max_coord), x1 = rng.between(0, max_coord);
        const auto y0 = rng.between(0, max_coord), y1 = rng.between(0, max_coord);
        boxes.push_back({std::min(x0, x1), std::min(y0, y1), std::abs(x1 - x0), std::abs(y1 - y0)});
    }
    return boxes;
}

posterforge::metrics::FeatureSet random_features(Rng& rng, std::size_t n, std::size_t dim, const std::string& prefix) {
    posterforge::metrics::FeatureSet set;
    set.dim = dim;
    // A random linear mix gives correlated, full-rank covariances.
    std::vector<std::vector<double>> mix(dim, std::vector<double>(dim));
    for (auto& row : mix) {
        for (auto& v : row) v = rng.normal() * 0.7;
    }
    for (std::size_t d = 0; d < dim; ++d) mix[d][d] += 1.5;
    const double offset = rng.normal();
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> z(dim), v(dim, offset);
        for (auto& x : z) x = rng.normal();
        for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t c = 0; c < dim; ++c) v[r] += mix[r][c] * z[c];
        }
        set.ids.push_back(prefix + std::to_string(i));
        set.vectors.push_back(std::move(v));
    }
    return set;
}

PlantedDuplicates planted_duplicates(Rng& rng, std::size_t n, std::size_t pairs, std::size_t dim) {
    auto id_of = [](std::size_t i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "e%03zu", i);
        return std::string(buf);
    };
    PlantedDuplicates out;
    out.features.dim = dim;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> v(dim);
        for (auto& x : v) x = rng.normal();
        out.features.ids.push_back(id_of(i));
        out.features.vectors.push_back(std::move(v));
    }
    // Distinct indices for the 2 * pairs planted members.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
    for (std::size_t p = 0; p < pairs; ++p) {
        std::size_t first = order[2 * p], second = order[2 * p + 1];
        if (first > second) std::swap(first, second);
        auto& copy = out.features.vectors[second];
        const auto& base = out.features.vectors[first];
        for (std::size_t k = 0; k < dim; ++k) copy[k] = base[k] + 0.15 * rng.normal();
        out.pairs.emplace_back(id_of(first), id_of(second));
    }
    return out;
}

}  // namespace pftest
