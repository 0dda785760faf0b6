#include "posterforge/core/error.hpp"
#include "posterforge/core/rng.hpp"
#include "posterforge/core/unicode.hpp"
#include "posterforge/metrics/frechet.hpp"
#include "posterforge/metrics/overlap.hpp"
#include "posterforge/metrics/poster.hpp"
#include "posterforge/metrics/text.hpp"
#include "posterforge/typography/html.hpp"

#include "generators.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <sstream>

using namespace posterforge;
using namespace posterforge::metrics;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::InvalidArgument;
}

FeatureSet shifted(const FeatureSet& a, const std::vector<double>& d) {
    FeatureSet b = a;
    for (auto& v : b.vectors) {
        for (std::size_t k = 0; k < d.size(); ++k) v[k] += d[k];
    }
    return b;
}

}  // namespace

TEST_CASE("text: identity") {
    const auto r = score_text("abc", "abc");
    CHECK(r.deletions == 0);
    CHECK(r.substitutions == 0);
    CHECK(r.insertions == 0);
    CHECK(r.cr == 1.0);
    CHECK(r.f1 == 1.0);
}

TEST_CASE("text: N_t=10, D=1, S=1 gives CR 0.8") {
    // Drop the first character and replace the last one.
    const auto r = score_text("abcdefghij", "bcdefghiX");
    CHECK(r.n_t == 10);
    CHECK(r.deletions == 1);
    CHECK(r.substitutions == 1);
    CHECK(r.insertions == 0);
    CHECK(r.cr == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("text: kitten / sitting full report") {
    const auto r = score_text("kitten", "sitting");
    CHECK(r.edit_distance == 3);
    CHECK(pftest::oracle_edit_distance(U"kitten", U"sitting") == 3);
    // The reported script must be one of the minimum-cost scripts.
    const auto optimal = pftest::oracle_optimal_scripts(U"kitten", U"sitting");
    CHECK(optimal.count({r.deletions, r.substitutions, r.insertions}) == 1);
    // Frozen values of the canonical script.
    CHECK(r.n_t == 6);
    CHECK(r.n_p == 7);
    CHECK(r.deletions == 0);
    CHECK(r.substitutions == 2);
    CHECK(r.insertions == 1);
    CHECK(r.matches == 4);
    CHECK(r.precision == doctest::Approx(4.0 / 7).epsilon(1e-15));
    CHECK(r.recall == doctest::Approx(4.0 / 6).epsilon(1e-15));
    CHECK(r.cr == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(r.f1 == doctest::Approx(8.0 / 13).epsilon(1e-15));
}

TEST_CASE("text: edge cases") {
    CHECK(code_of([] { score_text("", "x"); }) == ErrorCode::EmptyGroundTruth);
    const auto nothing = score_text("abc", "");
    CHECK(nothing.deletions == 3);
    CHECK(nothing.cr == 0.0);
    CHECK(nothing.f1 == 0.0);
    const auto noisy = score_text("ab", "xyzw");
    CHECK(noisy.cr == 0.0);  // S=2, insertions do not enter CR
    const auto lists = score_text(std::vector<std::string>{"春季", "音乐节"}, std::vector<std::string>{"春季", "音乐节"});
    CHECK(lists.n_t == 6);  // joined with one newline
    CHECK(lists.f1 == 1.0);
    const auto j = to_json(score_text("kitten", "sitting"));
    CHECK(j.at("N_t") == 6);
    CHECK(j.at("S_e") == 2);
}

TEST_CASE("property: edit distance matches the full-matrix oracle") {
    Rng rng(101);
    for (int i = 0; i < 500; ++i) {
        const auto a = pftest::random_codepoints(rng, 40);
        const auto b = pftest::random_codepoints(rng, 40);
        CHECK(edit_distance(a, b) == pftest::oracle_edit_distance(a, b));
        if (a.empty()) continue;
        const auto r = score_text(unicode::encode_utf8(a), unicode::encode_utf8(b));
        CHECK(r.edit_distance == r.deletions + r.substitutions + r.insertions);
        CHECK(r.matches + r.substitutions + r.deletions == r.n_t);
        CHECK(r.matches + r.substitutions + r.insertions == r.n_p);
        CHECK(r.cr <= 1.0);
    }
}

TEST_CASE("property: reported counts form an optimal script on short strings") {
    Rng rng(102);
    for (int i = 0; i < 200; ++i) {
        const auto a = pftest::random_codepoints(rng, 7);
        const auto b = pftest::random_codepoints(rng, 7);
        if (a.empty()) continue;
        const auto r = score_text(unicode::encode_utf8(a), unicode::encode_utf8(b));
        CHECK(pftest::oracle_optimal_scripts(a, b).count({r.deletions, r.substitutions, r.insertions}) == 1);
    }
}

TEST_CASE("overlap: worked examples") {
    CHECK(overlap({{0, 0, 10, 10}, {20, 20, 5, 5}}).value == 0.0);
    const auto ab = overlap({{0, 0, 10, 10}, {5, 5, 10, 10}});
    CHECK(ab.value == 0.5);
    CHECK(ab.per_element_exact == std::vector<Rational>{Rational(1, 4), Rational(1, 4)});
    CHECK(pftest::oracle_pixel_overlap({{0, 0, 10, 10}, {5, 5, 10, 10}}) == 0.5);
    CHECK(overlap({{0, 0, 10, 10}}).value == 0.0);
    CHECK(overlap({}).value == 0.0);
    // Zero-area elements take part in no pair.
    const auto z = overlap({{0, 0, 10, 10}, {2, 2, 0, 5}, {5, 5, 10, 10}});
    CHECK(z.value == 0.5);
    CHECK(z.per_element[1] == 0.0);
    // Containment is asymmetric.
    const auto c = overlap({{0, 0, 10, 10}, {0, 0, 5, 5}});
    CHECK(c.per_element_exact == std::vector<Rational>{Rational(1, 4), Rational(1)});
    CHECK(intersection_area({0, 0, 10, 10}, {10, 0, 5, 5}) == Rational(0));
}

TEST_CASE("property: overlap matches pixel counting and is scale/translation invariant") {
    Rng rng(103);
    for (int i = 0; i < 200; ++i) {
        const auto boxes = pftest::random_boxes(rng, 12, 64);
        const auto r = overlap(boxes);
        CHECK(std::abs(r.value - pftest::oracle_pixel_overlap(boxes)) < 1e-9);
        double sum = 0;
        for (double v : r.per_element) sum += v;
        CHECK(std::abs(sum - r.value) < 1e-12);

        const Rational k(rng.between(1, 9), rng.between(1, 9));
        const Rational dx(rng.between(-50, 50), 7);
        std::vector<Box> moved;
        for (const auto& b : boxes) moved.push_back({b.left * k + dx, b.top * k - dx, b.width * k, b.height * k});
        CHECK(overlap(moved).per_element_exact == r.per_element_exact);
    }
}

TEST_CASE("overlap of poster leaves") {
    const auto doc = typography::parse_poster_html(
        R"(<div class="poster" style="width:100px;height:100px"><div id="g" style="left:0;top:0;width:100px;height:100px"><div id="a" style="left:0;top:0;width:10px;height:10px"></div><div id="b" style="left:5px;top:5px;width:10px;height:10px"></div></div></div>)");
    const auto elements = poster_elements(doc);
    CHECK(elements.ids == std::vector<std::string>{"a", "b"});
    const auto j = poster_overlap_json(doc);
    CHECK(j.at("value") == 0.5);
    CHECK(j.at("elements").at("a") == 0.25);
}

TEST_CASE("frechet: self distance and shifted mean") {
    Rng rng(104);
    const auto a = pftest::random_features(rng, 40, 5, "a");
    CHECK(std::abs(frechet_distance(a, a).value) < 1e-6);
    const std::vector<double> d = {1.5, -2, 0.25, 0, 3};
    const auto r = frechet_distance(a, shifted(a, d));
    CHECK(std::abs(r.value - (1.5 * 1.5 + 4 + 0.0625 + 9)) < 1e-6);
    CHECK(std::abs(r.trace_term) < 1e-6);
}

TEST_CASE("property: frechet matches the Cholesky/Jacobi oracle") {
    Rng rng(105);
    for (int i = 0; i < 30; ++i) {
        const std::size_t dim = 1 + rng.below(6);
        const auto a = pftest::random_features(rng, 16, dim, "a");
        const auto b = pftest::random_features(rng, 16 + rng.below(10), dim, "b");
        const auto r = frechet_distance(a, b);
        CHECK(std::abs(r.value - pftest::oracle_frechet(a, b)) < 1e-6);
        CHECK(std::abs(r.value - (r.mean_term + r.trace_term)) < 1e-9);
        CHECK(r.value >= 0);
        // Symmetric in its arguments.
        CHECK(std::abs(frechet_distance(b, a).value - r.value) < 1e-6);
    }
}

TEST_CASE("frechet: rank-deficient covariance is handled") {
    // All points on a line: covariance has rank 1.
    FeatureSet a{2, {}, {}};
    FeatureSet b{2, {}, {}};
    for (int i = 0; i < 10; ++i) {
        a.vectors.push_back({double(i), double(2 * i)});
        b.vectors.push_back({double(i) + 1, double(2 * i)});
    }
    const auto r = frechet_distance(a, b);
    CHECK(std::abs(r.value - 1.0) < 1e-6);
}

TEST_CASE("frechet: errors") {
    Rng rng(106);
    const auto a = pftest::random_features(rng, 10, 3, "a");
    const auto b = pftest::random_features(rng, 10, 4, "b");
    CHECK(code_of([&] { frechet_distance(a, b); }) == ErrorCode::DimensionMismatch);
    FeatureSet one{3, {"x"}, {{1, 2, 3}}};
    CHECK(code_of([&] { frechet_distance(a, one); }) == ErrorCode::DegenerateSet);
    auto bad = a;
    bad.vectors[0][0] = std::nan("");
    CHECK(code_of([&] { frechet_distance(bad, a); }) == ErrorCode::NumericalFailure);
}

TEST_CASE("feature files round trip and report line numbers") {
    Rng rng(107);
    const auto a = pftest::random_features(rng, 5, 3, "row");
    std::stringstream ss;
    write_feature_set(ss, a);
    const auto back = read_feature_set(ss);
    CHECK(back.dim == 3);
    CHECK(back.ids == a.ids);
    CHECK(back.vectors == a.vectors);
    REQUIRE(back.find("row2"));
    CHECK(*back.find("row2") == a.vectors[2]);

    std::stringstream bad("{\"dim\":2}\n{\"id\":\"x\",\"vec\":[1,2]}\n{\"id\":\"y\",\"vec\":[1]}\n");
    try {
        read_feature_set(bad);
        FAIL("expected MalformedFeatureFile");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MalformedFeatureFile);
        CHECK(std::string(e.what()).find("3") != std::string::npos);
    }
}

TEST_CASE("the two pixel oracles agree") {
    Rng rng(108);
    for (int i = 0; i < 100; ++i) {
        const auto boxes = pftest::random_boxes(rng, 8, 40);
        CHECK(pftest::oracle_bitmap_overlap(boxes) == pftest::oracle_pixel_overlap(boxes));
    }
}
