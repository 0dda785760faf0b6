#include "posterforge/pipeline/pipeline.hpp"

#include "posterforge/core/digest.hpp"
#include "posterforge/core/error.hpp"
#include "posterforge/typography/html.hpp"
#include "posterforge/typography/png.hpp"
#include "posterforge/typography/raster.hpp"

#include <chrono>
#include <cstdio>
#include <random>
#include <set>

namespace posterforge::pipeline {
namespace {

using typography::PosterDocument;

std::string new_uuid() {
    static thread_local std::random_device device;
    std::uint8_t b[16];
    for (int i = 0; i < 16; i += 4) {
        const std::uint32_t v = device();
        for (int k = 0; k < 4; ++k) b[i + k] = static_cast<std::uint8_t>(v >> (8 * k));
    }
    b[6] = static_cast<std::uint8_t>((b[6] & 0x0F) | 0x40);
    b[8] = static_cast<std::uint8_t>((b[8] & 0x3F) | 0x80);
    char out[37];
    std::snprintf(out, sizeof out, "%02x%02x%02x%02x-%02x%02x-%02x%02x-%02x%02x-%02x%02x%02x%02x%02x%02x", b[0], b[1],
                  b[2], b[3], b[4], b[5], b[6], b[7], b[8], b[9], b[10], b[11], b[12], b[13], b[14], b[15]);
    return out;
}

std::uint64_t entropy_seed() {
    std::random_device device;
    return (static_cast<std::uint64_t>(device()) << 32) | device();
}

[[noreturn]] void wrong_state(const Job& job, const std::string& operation) {
    throw Error(ErrorCode::WrongState,
                operation + " is not allowed in state " + std::string(to_string(job.state.kind)),
                {std::string(to_string(job.state.kind))});
}

bool has_layout(const Job& job) {
    return job.state.kind == StateKind::LayoutReady || job.state.kind == StateKind::Rendered;
}

std::string failure_reason(const Error& e) {
    if (e.code() == ErrorCode::BackendTimeout) return "timeout";
    return std::string(to_string(e.code())) + ": " + e.what();
}

void rebind(PosterDocument& doc, const std::string& old_id, const std::string& new_id) {
    if (auto* bg = std::get_if<typography::ImageBackground>(&doc.background); bg && bg->image_id == old_id) {
        bg->image_id = new_id;
    }
}

}  // namespace

Pipeline::Pipeline(JobStore store, std::shared_ptr<const backends::Backends> backends, PipelineOptions options)
    : store_(std::move(store)), backends_(std::move(backends)), options_(options) {
    if (options_.seed) seed_rng_.emplace(*options_.seed);
}

std::shared_ptr<std::mutex> Pipeline::job_mutex(const std::string& id) {
    std::lock_guard lock(registry_mutex_);
    auto& slot = job_mutexes_[id];
    if (!slot) slot = std::make_shared<std::mutex>();
    return slot;
}

Job Pipeline::load_checked(const std::string& id, std::optional<std::int64_t> expected_version) const {
    Job job = store_.load(id);
    if (expected_version && *expected_version != job.version) {
        throw Error(ErrorCode::StaleVersion,
                    "job " + id + " is at version " + std::to_string(job.version) + ", not " +
                        std::to_string(*expected_version),
                    {std::to_string(job.version)});
    }
    return job;
}

Job Pipeline::commit(const Job& before, Job after) {
    if (!is_legal_transition(before.state.kind, after.state.kind)) {
        throw std::logic_error("illegal transition " + std::string(to_string(before.state.kind)) + " -> " +
                               std::string(to_string(after.state.kind)));
    }
    after.version = before.version + 1;
    after.updated_ms = now_ms();
    store_.save(after);
    if (!before.renders.empty() && after.renders.empty()) store_.remove_renders(after.id);
    return after;
}

Job Pipeline::create_job(const UserRequirement& req) {
    validate_requirement(req);
    Job job;
    job.id = new_uuid();
    job.requirement = req;
    {
        std::lock_guard lock(seed_mutex_);
        job.seeds.background_seed = seed_rng_ ? seed_rng_->next() : entropy_seed();
    }
    job.created_ms = job.updated_ms = now_ms();
    store_.save(job);
    return job;
}

Job Pipeline::get(const std::string& id) const { return store_.load(id); }

std::vector<Job> Pipeline::list(std::size_t page, std::size_t page_size) const { return store_.list(page, page_size); }

Job Pipeline::advance(const std::string& id, std::optional<std::int64_t> expected_version) {
    auto mutex = job_mutex(id);
    std::lock_guard lock(*mutex);
    const Job before = load_checked(id, expected_version);
    if (before.state.kind == StateKind::Rendered || before.state.kind == StateKind::Failed) {
        throw Error(ErrorCode::StateTerminal,
                    "job " + id + " is " + std::string(to_string(before.state.kind)) + "; nothing to advance",
                    {std::string(to_string(before.state.kind))});
    }

    Job after = before;
    std::string stage;
    const auto started = std::chrono::steady_clock::now();
    try {
        switch (before.state.kind) {
            case StateKind::Created:
                stage = "blueprint";
                after.blueprint = backends_->generate_blueprint(before.requirement);
                after.state = {StateKind::BlueprintReady, {}, {}};
                break;
            case StateKind::BlueprintReady: {
                stage = "background";
                if (before.background_override) {
                    after.background = before.background_override;
                    after.background_override.reset();
                    store_.put_background(id, store_.get_asset(id, after.background->id));
                } else {
                    const auto bg = backends_->generate_background(before.blueprint->background,
                                                                   before.blueprint->params.resolution,
                                                                   before.seeds.background_seed);
                    store_.put_asset(id, bg.ref.id, bg.png);
                    store_.put_background(id, bg.png);
                    after.background = bg.ref;
                }
                after.state = {StateKind::BackgroundReady, {}, {}};
                break;
            }
            case StateKind::BackgroundReady: {
                stage = "layout";
                const std::string html = backends_->generate_layout(*before.blueprint, *before.background);
                after.poster = typography::parse_poster_html(html, ParseMode::Strict);
                after.pristine_poster = after.poster;
                after.edit_history.clear();
                after.state = {StateKind::LayoutReady, {}, {}};
                break;
            }
            case StateKind::LayoutReady: {
                stage = "render";
                const auto raster = rasterize_poster(before, *before.poster);
                const std::string png = typography::encode_png(raster);
                const std::string path = store_.put_render(id, Rational(1), png);
                after.renders = {RenderEntry{Rational(1), path, sha256_hex(png), raster.width, raster.height}};
                after.state = {StateKind::Rendered, {}, {}};
                break;
            }
            default:
                break;
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Storage) throw;
        Job failed = before;
        failed.state = JobState::failed(stage, failure_reason(e));
        commit(before, std::move(failed));
        throw;
    }
    after.stage_ms[stage] = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started).count();
    return commit(before, std::move(after));
}

Job Pipeline::put_blueprint(const std::string& id, const DesignBlueprint& bp, std::optional<std::int64_t> expected_version) {
    auto mutex = job_mutex(id);
    std::lock_guard lock(*mutex);
    const Job before = load_checked(id, expected_version);
    if (before.state.kind != StateKind::BlueprintReady) wrong_state(before, "replacing the blueprint");
    const auto violations = validate_blueprint(bp);
    if (!violations.empty()) {
        std::vector<std::string> details;
        for (const auto& v : violations) details.push_back(v.path + ": " + v.reason);
        throw Error(ErrorCode::SchemaViolation, "blueprint is invalid", details);
    }
    Job after = before;
    after.blueprint = bp;
    if (after.background_override) {
        const auto& res = bp.params.resolution;
        if (after.background_override->width != res.width || after.background_override->height != res.height) {
            // The uploaded image was fitted to the old resolution; refit it.
            const auto raster = typography::decode_png(store_.get_asset(id, after.background_override->id));
            const auto bg = backends::adopt_raster(typography::resample_bilinear(raster, res.width, res.height));
            store_.put_asset(id, bg.ref.id, bg.png);
            after.background_override = bg.ref;
        }
    }
    return commit(before, std::move(after));
}

Job Pipeline::edit_layout(const std::string& id, const typography::EditOp& edit, std::optional<std::int64_t> expected_version) {
    return edit_layout(id, std::vector<typography::EditOp>{edit}, expected_version);
}

Job Pipeline::edit_layout(const std::string& id, const std::vector<typography::EditOp>& edits,
                          std::optional<std::int64_t> expected_version) {
    auto mutex = job_mutex(id);
    std::lock_guard lock(*mutex);
    const Job before = load_checked(id, expected_version);
    if (!has_layout(before)) wrong_state(before, "editing the layout");
    Job after = before;
    const std::int64_t at = now_ms();
    for (const auto& edit : edits) {
        after.poster = typography::apply_edit(*after.poster, edit);
        after.edit_history.push_back({edit, at});
    }
    after.renders.clear();
    after.state = {StateKind::LayoutReady, {}, {}};
    return commit(before, std::move(after));
}

Job Pipeline::rebind_background(Job job, const backends::GeneratedBackground& bg) {
    store_.put_asset(job.id, bg.ref.id, bg.png);
    store_.put_background(job.id, bg.png);
    const std::string old_id = job.background ? job.background->id : std::string();
    job.background = bg.ref;
    job.background_override.reset();
    if (job.poster) {
        rebind(*job.poster, old_id, bg.ref.id);
        rebind(*job.pristine_poster, old_id, bg.ref.id);
        job.renders.clear();
        job.state = {StateKind::LayoutReady, {}, {}};
    } else {
        job.state = {StateKind::BackgroundReady, {}, {}};
    }
    return job;
}

Job Pipeline::regenerate_background(const std::string& id, const BackgroundOverrides& overrides,
                                    std::optional<std::int64_t> expected_version) {
    auto mutex = job_mutex(id);
    std::lock_guard lock(*mutex);
    const Job before = load_checked(id, expected_version);
    const auto kind = before.state.kind;
    if (kind != StateKind::BackgroundReady && kind != StateKind::LayoutReady && kind != StateKind::Rendered) {
        wrong_state(before, "regenerating the background");
    }
    Job after = before;
    if (overrides.caption) after.blueprint->background.caption = *overrides.caption;
    if (overrides.style) after.blueprint->background.style = *overrides.style;
    if (overrides.seed) after.seeds.background_seed = *overrides.seed;
    if (after.blueprint->background.caption.empty()) {
        throw Error(ErrorCode::SchemaViolation, "caption must be non-empty", {"background.caption: empty string"});
    }
    const auto bg = backends_->generate_background(after.blueprint->background, after.blueprint->params.resolution,
                                                   after.seeds.background_seed);
    return commit(before, rebind_background(std::move(after), bg));
}

Job Pipeline::attach_background(const std::string& id, const std::string& png, std::optional<std::int64_t> expected_version) {
    auto mutex = job_mutex(id);
    std::lock_guard lock(*mutex);
    const Job before = load_checked(id, expected_version);
    if (before.state.kind == StateKind::Created || before.state.kind == StateKind::Failed) {
        wrong_state(before, "attaching a background");
    }
    const auto& res = before.blueprint->params.resolution;
    typography::Raster raster = typography::decode_png(png);
    if (raster.width != res.width || raster.height != res.height) {
        raster = typography::resample_bilinear(raster, res.width, res.height);
    }
    const auto bg = backends::adopt_raster(std::move(raster));

    if (before.state.kind == StateKind::BlueprintReady) {
        Job after = before;
        store_.put_asset(id, bg.ref.id, bg.png);
        after.background_override = bg.ref;
        return commit(before, std::move(after));
    }
    return commit(before, rebind_background(before, bg));
}

typography::Raster Pipeline::rasterize_poster(const Job& job, const PosterDocument& doc) const {
    std::set<std::string> ids;
    if (const auto* bg = std::get_if<typography::ImageBackground>(&doc.background)) ids.insert(bg->image_id);
    typography::for_each_node(doc.nodes, [&](const typography::Node& n) {
        if (n.style.background_image) ids.insert(*n.style.background_image);
    });
    typography::ImageMap images;
    for (const auto& image_id : ids) images.insert(image_id, typography::decode_png(store_.get_asset(job.id, image_id)));
    return typography::rasterize(doc, glyphs_, Rational(1), images);
}

Pipeline::RenderResult Pipeline::render(const std::string& id, const Rational& scale,
                                        std::optional<std::int64_t> expected_version) {
    auto mutex = job_mutex(id);
    std::lock_guard lock(*mutex);
    const Job before = load_checked(id, expected_version);
    if (!has_layout(before)) wrong_state(before, "rendering");
    const PosterDocument scaled = typography::scale_document(*before.poster, scale);
    const typography::Raster raster = rasterize_poster(before, scaled);
    std::string png = typography::encode_png(raster);

    RenderEntry entry{scale, store_.put_render(id, scale, png), sha256_hex(png), raster.width, raster.height};
    Job after = before;
    auto same = std::find_if(after.renders.begin(), after.renders.end(), [&](const RenderEntry& r) { return r.scale == scale; });
    if (same != after.renders.end()) *same = entry;
    else after.renders.push_back(entry);
    after.state = {StateKind::Rendered, {}, {}};
    Job committed = commit(before, std::move(after));
    return {std::move(committed), std::move(entry), std::move(png)};
}

std::string Pipeline::preview_png(const std::string& id, const Rational& scale) const {
    const Job job = store_.load(id);
    if (!has_layout(job)) wrong_state(job, "rendering");
    return typography::encode_png(rasterize_poster(job, typography::scale_document(*job.poster, scale)));
}

PosterDocument Pipeline::replay_edits(const Job& job) {
    if (!job.pristine_poster) throw Error(ErrorCode::WrongState, "job has no layout");
    PosterDocument doc = *job.pristine_poster;
    for (const auto& record : job.edit_history) doc = typography::apply_edit(doc, record.op);
    return doc;
}

}  // namespace posterforge::pipeline
