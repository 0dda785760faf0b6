#include "posterforge/core/digest.hpp"
#include "posterforge/core/error.hpp"
#include "posterforge/core/fs.hpp"
#include "posterforge/pipeline/pipeline.hpp"
#include "posterforge/typography/html.hpp"
#include "posterforge/typography/png.hpp"

#include "generators.hpp"
#include "testkit.hpp"

#include <doctest.h>

#include <functional>
#include <thread>

using namespace posterforge;
using namespace posterforge::pipeline;
namespace typo = posterforge::typography;

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

UserRequirement requirement(std::string text = "Spring tea fair, Sunday, free entry") {
    UserRequirement r;
    r.text = std::move(text);
    return r;
}

Pipeline mock_pipeline(const std::filesystem::path& root, std::uint64_t seed = 42) {
    return Pipeline(JobStore(root), std::make_shared<backends::Backends>(backends::BackendConfig::all_mock(0)),
                    PipelineOptions{seed});
}

/// Shrinks the mock blueprint so tests render small canvases.
Job small_blueprint_ready(Pipeline& p) {
    Job job = p.create_job(requirement());
    job = p.advance(job.id);
    DesignBlueprint bp = *job.blueprint;
    bp.params.resolution = {160, 240};
    return p.put_blueprint(job.id, bp, job.version);
}

Job small_layout_ready(Pipeline& p) {
    Job job = small_blueprint_ready(p);
    job = p.advance(job.id);
    return p.advance(job.id);
}

std::string first_text_node(const Job& job) {
    std::string id;
    typo::for_each_node(job.poster->nodes, [&](const typo::Node& n) {
        if (id.empty() && !n.runs.empty()) id = n.id;
    });
    return id;
}

}  // namespace

TEST_CASE("transition relation") {
    using K = StateKind;
    CHECK(is_legal_transition(K::Created, K::BlueprintReady));
    CHECK(is_legal_transition(K::BlueprintReady, K::BackgroundReady));
    CHECK(is_legal_transition(K::BackgroundReady, K::LayoutReady));
    CHECK(is_legal_transition(K::LayoutReady, K::Rendered));
    CHECK(is_legal_transition(K::Rendered, K::LayoutReady));
    CHECK(is_legal_transition(K::Created, K::Failed));
    CHECK(is_legal_transition(K::Rendered, K::Failed));
    CHECK(is_legal_transition(K::LayoutReady, K::LayoutReady));
    CHECK_FALSE(is_legal_transition(K::Created, K::LayoutReady));
    CHECK_FALSE(is_legal_transition(K::BackgroundReady, K::BlueprintReady));
    CHECK_FALSE(is_legal_transition(K::Failed, K::Created));
    CHECK_FALSE(is_legal_transition(K::Failed, K::Rendered));
    for (auto k : {K::Created, K::BlueprintReady, K::BackgroundReady, K::LayoutReady, K::Rendered, K::Failed}) {
        CHECK(state_kind_from_string(to_string(k)) == k);
    }
}

TEST_CASE("four advances reach Rendered, then the job is terminal") {
    pftest::TempDir dir;
    auto p = mock_pipeline(dir.path());
    Job job = p.create_job(requirement());
    CHECK(job.state.kind == StateKind::Created);
    CHECK(job.version == 1);
    const StateKind expected[] = {StateKind::BlueprintReady, StateKind::BackgroundReady, StateKind::LayoutReady,
                                  StateKind::Rendered};
    for (std::int64_t i = 0; i < 4; ++i) {
        job = p.advance(job.id, job.version);
        CHECK(job.state.kind == expected[i]);
        CHECK(job.version == i + 2);
    }
    REQUIRE(job.renders.size() == 1);
    CHECK(job.renders[0].scale == Rational(1));
    const auto png = read_file(p.store().job_dir(job.id) / job.renders[0].path);
    CHECK(sha256_hex(png) == job.renders[0].digest);
    CHECK(job.stage_ms.size() == 4);
    CHECK(code_of([&] { p.advance(job.id); }) == ErrorCode::StateTerminal);

    const auto dir_of = p.store().job_dir(job.id);
    for (const char* name : {"manifest.json", "blueprint.json", "background.png", "poster.html"}) {
        CHECK(std::filesystem::exists(dir_of / name));
    }
    CHECK(read_file(dir_of / "poster.html") == typo::serialize_poster(*job.poster) + "\n");
}

TEST_CASE("backend timeout fails the job with stage and reason") {
    pftest::TempDir dir;
    auto config = backends::BackendConfig::all_mock(0);
    backends::EndpointConfig ep;
    ep.base_url = "http://bg.test";
    ep.timeout = std::chrono::milliseconds(10);
    ep.max_retries = 1;
    config.background_default = ep;
    auto transport = std::make_shared<pftest::ScriptedTransport>(
        [](const backends::HttpRequest&, int) -> backends::HttpResponse {
            throw Error(ErrorCode::BackendTimeout, "deadline");
        });
    Pipeline p(JobStore(dir.path()), std::make_shared<backends::Backends>(config, transport), PipelineOptions{1});
    Job job = p.advance(p.create_job(requirement()).id);
    CHECK(code_of([&] { p.advance(job.id); }) == ErrorCode::BackendTimeout);
    job = p.get(job.id);
    CHECK(job.state == JobState::failed("background", "timeout"));
    CHECK(job.version == 3);
    CHECK(transport->requests().size() == 2);
    CHECK(code_of([&] { p.advance(job.id); }) == ErrorCode::StateTerminal);
    CHECK(code_of([&] { p.regenerate_background(job.id, {}); }) == ErrorCode::WrongState);
}

TEST_CASE("a rejected layout fails the job with the error code in the reason") {
    pftest::TempDir dir;
    auto config = backends::BackendConfig::all_mock(0);
    backends::EndpointConfig ep;
    ep.base_url = "http://layout.test";
    config.layout = ep;
    auto transport = std::make_shared<pftest::ScriptedTransport>([](const backends::HttpRequest&, int) {
        return backends::HttpResponse{
            200, R"({"output":"<div class=\"poster\" style=\"width:160px;height:240px\"></div>"})"};
    });
    Pipeline p(JobStore(dir.path()), std::make_shared<backends::Backends>(config, transport), PipelineOptions{1});
    Job job = small_blueprint_ready(p);
    job = p.advance(job.id);
    CHECK(code_of([&] { p.advance(job.id); }) == ErrorCode::TextCoverageViolation);
    job = p.get(job.id);
    CHECK(job.state.kind == StateKind::Failed);
    CHECK(job.state.failed_stage == "layout");
    CHECK(job.state.reason.rfind("TextCoverageViolation: ", 0) == 0);
}

TEST_CASE("stale versions are rejected with the current version") {
    pftest::TempDir dir;
    auto p = mock_pipeline(dir.path());
    Job job = p.create_job(requirement());
    job = p.advance(job.id, 1);
    try {
        p.advance(job.id, 1);
        FAIL("expected StaleVersion");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::StaleVersion);
        CHECK(e.details() == std::vector<std::string>{"2"});
    }
    CHECK(p.get(job.id).version == 2);
    CHECK(code_of([&] { p.get("nope"); }) == ErrorCode::JobNotFound);
}

TEST_CASE("put_blueprint only while BlueprintReady and only valid blueprints") {
    pftest::TempDir dir;
    auto p = mock_pipeline(dir.path());
    Job job = p.create_job(requirement());
    const auto bp = mock_pipeline(dir.path()).backends().generate_blueprint(requirement());
    CHECK(code_of([&] { p.put_blueprint(job.id, bp); }) == ErrorCode::WrongState);
    job = p.advance(job.id);
    auto bad = bp;
    bad.textual.title.clear();
    CHECK(code_of([&] { p.put_blueprint(job.id, bad); }) == ErrorCode::SchemaViolation);
    auto edited = bp;
    edited.textual.title = "Tea Fair 2026";
    job = p.put_blueprint(job.id, edited, job.version);
    CHECK(job.blueprint->textual.title == "Tea Fair 2026");
    job = p.advance(job.id);
    CHECK(code_of([&] { p.put_blueprint(job.id, edited); }) == ErrorCode::WrongState);
}

TEST_CASE("edits clear renders, are atomic and replay") {
    pftest::TempDir dir;
    auto p = mock_pipeline(dir.path());
    Job job = small_layout_ready(p);
    job = p.render(job.id, Rational(1)).job;
    job = p.render(job.id, Rational(1, 2)).job;
    CHECK(job.renders.size() == 2);
    CHECK(std::filesystem::exists(p.store().job_dir(job.id) / "renders" / "scale-0.5.png"));

    const std::string target = first_text_node(job);
    REQUIRE(!target.empty());
    job = p.edit_layout(job.id, typo::Move{target, Rational(3), Rational(1, 3)}, job.version);
    CHECK(job.state.kind == StateKind::LayoutReady);
    CHECK(job.renders.empty());
    CHECK_FALSE(std::filesystem::exists(p.store().job_dir(job.id) / "renders" / "scale-0.5.png"));

    const Job before = job;
    const std::vector<typo::EditOp> batch = {typo::SetStyle{target, "color", "#FF0000"},
                                             typo::RemoveNode{"does-not-exist"}};
    CHECK(code_of([&] { p.edit_layout(job.id, batch); }) == ErrorCode::UnknownNode);
    CHECK(p.get(job.id) == before);

    job = p.edit_layout(job.id, {typo::SetText{target, {{"Hello", {}}}, true}, typo::Resize{target, 50, 20}});
    CHECK(job.edit_history.size() == 3);
    CHECK(Pipeline::replay_edits(job) == *job.poster);
    CHECK(typo::extract_text(*job.poster).front() == "Hello");

    // Edits are refused before a layout exists.
    Job fresh = p.create_job(requirement());
    CHECK(code_of([&] { p.edit_layout(fresh.id, typo::RemoveNode{"x"}); }) == ErrorCode::WrongState);
}

TEST_CASE("render: dimensions, replacement at the same scale, range errors, preview") {
    pftest::TempDir dir;
    auto p = mock_pipeline(dir.path());
    Job job = small_layout_ready(p);
    const auto r2 = p.render(job.id, Rational(2), job.version);
    CHECK(r2.entry.width == 320);
    CHECK(r2.entry.height == 480);
    const auto r13 = p.render(job.id, Rational(1, 3));
    CHECK(r13.entry.width == 54);  // ceil(160/3)
    CHECK(r13.entry.height == 80);
    CHECK(r13.entry.path == "renders/scale-1_3.png");
    const auto again = p.render(job.id, Rational(2));
    CHECK(again.job.renders.size() == 2);
    CHECK(again.entry.digest == r2.entry.digest);

    CHECK(code_of([&] { p.render(job.id, Rational(0)); }) == ErrorCode::ScaleOutOfRange);
    CHECK(code_of([&] { p.render(job.id, Rational(-1)); }) == ErrorCode::ScaleOutOfRange);
    CHECK(code_of([&] { p.render(job.id, Rational(100)); }) == ErrorCode::ScaleOutOfRange);

    const auto version = p.get(job.id).version;
    const auto preview = p.preview_png(job.id, Rational(2));
    CHECK(sha256_hex(preview) == r2.entry.digest);
    CHECK(p.get(job.id).version == version);

    Job early = p.create_job(requirement());
    CHECK(code_of([&] { p.render(early.id, Rational(1)); }) == ErrorCode::WrongState);
}

TEST_CASE("regenerate_background rebinds poster and pristine poster") {
    pftest::TempDir dir;
    auto p = mock_pipeline(dir.path());
    Job job = small_layout_ready(p);
    job = p.render(job.id, Rational(1)).job;
    const auto old_id = job.background->id;
    BackgroundOverrides o;
    o.caption = "lanterns at night";
    o.style = StyleId::Photorealistic;
    o.seed = 99;
    job = p.regenerate_background(job.id, o, job.version);
    CHECK(job.background->id != old_id);
    CHECK(job.blueprint->background == BackgroundAttributes{StyleId::Photorealistic, "lanterns at night"});
    CHECK(job.seeds.background_seed == 99);
    CHECK(job.state.kind == StateKind::LayoutReady);
    CHECK(job.renders.empty());
    const auto& bg = std::get<typo::ImageBackground>(job.poster->background);
    CHECK(bg.image_id == job.background->id);
    CHECK(std::get<typo::ImageBackground>(job.pristine_poster->background).image_id == job.background->id);
    CHECK(sha256_hex(read_file(p.store().job_dir(job.id) / "background.png")) == job.background->content_hash);

    // Same overrides again give the same image.
    const Job again = p.regenerate_background(job.id, o);
    CHECK(again.background == job.background);

    o.caption = "";
    const Job before = p.get(job.id);
    CHECK(code_of([&] { p.regenerate_background(job.id, o); }) == ErrorCode::SchemaViolation);
    CHECK(p.get(job.id) == before);
}

TEST_CASE("attach_background: override before stage 2, rebind after") {
    pftest::TempDir dir;
    auto p = mock_pipeline(dir.path());
    Job job = small_blueprint_ready(p);
    const std::string upload = typo::encode_png(typo::Raster(40, 60, {10, 200, 30, 255}));
    job = p.attach_background(job.id, upload, job.version);
    REQUIRE(job.background_override);
    CHECK(job.background_override->width == 160);
    CHECK(job.background_override->height == 240);
    CHECK(job.state.kind == StateKind::BlueprintReady);
    job = p.advance(job.id);
    CHECK(job.state.kind == StateKind::BackgroundReady);
    CHECK(job.background->id == p.get(job.id).background->id);
    const auto adopted = job.background->id;
    job = p.advance(job.id);
    CHECK(std::get<typo::ImageBackground>(job.poster->background).image_id == adopted);

    const std::string second = typo::encode_png(typo::Raster(160, 240, {0, 0, 0, 255}));
    job = p.attach_background(job.id, second);
    CHECK(job.background->id != adopted);
    CHECK(std::get<typo::ImageBackground>(job.poster->background).image_id == job.background->id);
    CHECK(code_of([&] { p.attach_background(job.id, "not a png"); }) != ErrorCode::StaleVersion);

    Job created = p.create_job(requirement());
    CHECK(code_of([&] { p.attach_background(created.id, second); }) == ErrorCode::WrongState);
}

TEST_CASE("persistence: a second pipeline over the same store sees identical jobs") {
    pftest::TempDir dir;
    auto p = mock_pipeline(dir.path());
    std::vector<std::string> ids;
    for (int i = 0; i < 3; ++i) {
        Job job = small_layout_ready(p);
        job = p.render(job.id, Rational(3, 2)).job;
        ids.push_back(job.id);
    }
    auto q = mock_pipeline(dir.path());
    for (const auto& id : ids) {
        const Job a = p.get(id);
        const Job b = q.get(id);
        CHECK(a == b);
        CHECK(job_from_json(job_to_json(a)) == a);
    }
    CHECK(q.list(1, 2).size() == 2);
    CHECK(q.list(2, 2).size() == 1);
    CHECK(q.list(3, 2).empty());
    CHECK(q.store().count() == 3);
}

TEST_CASE("seeded pipelines are reproducible") {
    pftest::TempDir a_dir, b_dir;
    auto a = mock_pipeline(a_dir.path(), 42);
    auto b = mock_pipeline(b_dir.path(), 42);
    Job ja = small_layout_ready(a);
    Job jb = small_layout_ready(b);
    CHECK(ja.seeds == jb.seeds);
    CHECK(ja.background->content_hash == jb.background->content_hash);
    CHECK(typo::serialize_poster(*ja.poster) == typo::serialize_poster(*jb.poster));
    CHECK(a.render(ja.id, Rational(1)).entry.digest == b.render(jb.id, Rational(1)).entry.digest);
}

TEST_CASE("concurrent mutations on one job serialize") {
    pftest::TempDir dir;
    auto p = mock_pipeline(dir.path());
    Job job = small_layout_ready(p);
    const std::string target = first_text_node(job);
    const auto start = job.version;
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t) {
        threads.emplace_back([&] {
            for (int i = 0; i < 5; ++i) p.edit_layout(job.id, typo::Move{target, Rational(1), Rational(0)});
        });
    }
    for (auto& t : threads) t.join();
    const Job end = p.get(job.id);
    CHECK(end.version == start + 20);
    CHECK(end.edit_history.size() == 20);
    CHECK(Pipeline::replay_edits(end) == *end.poster);
}

TEST_CASE("property: job manifests round trip") {
    Rng rng(301);
    for (int i = 0; i < 100; ++i) {
        Job job;
        job.id = "job-" + std::to_string(i);
        job.requirement = pftest::random_requirement(rng);
        if (rng.below(2)) job.requirement.detail_level = DetailLevel::Detailed;
        job.state.kind = static_cast<StateKind>(rng.below(5));
        if (rng.below(3)) job.blueprint = pftest::random_blueprint(rng);
        if (rng.below(2)) {
            job.poster = pftest::random_document(rng);
            job.pristine_poster = pftest::random_document(rng);
        }
        job.version = rng.between(1, 1000);
        job.seeds.background_seed = rng.below(UINT64_MAX);
        job.created_ms = rng.between(0, 1LL << 42);
        job.updated_ms = job.created_ms + rng.between(0, 1000);
        if (rng.below(2)) job.renders.push_back({Rational(rng.between(1, 7), rng.between(1, 7)), "renders/x.png", "ab", 3, 4});
        if (rng.below(2)) job.edit_history.push_back({typo::Move{"n0", Rational(1, 3), Rational(-2)}, 17});
        if (rng.below(4) == 0) job.state = JobState::failed("render", "Storage: disk full");
        CHECK(job_from_json(job_to_json(job)) == job);
        CHECK(job_from_json(nlohmann::json::parse(job_to_json(job).dump())) == job);
    }
    CHECK(code_of([] { job_from_json(nlohmann::json{{"id", 3}}); }) == ErrorCode::Storage);
}
