#pragma once

#include "posterforge/backends/backends.hpp"
#include "posterforge/core/rng.hpp"
#include "posterforge/pipeline/job.hpp"
#include "posterforge/pipeline/store.hpp"
#include "posterforge/typography/glyphs.hpp"

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace posterforge::pipeline {

struct PipelineOptions {
    /// Seeds background_seed derivation for new jobs; entropy when absent.
    std::optional<std::uint64_t> seed;
};

struct BackgroundOverrides {
    std::optional<std::string> caption;
    std::optional<StyleId> style;
    std::optional<std::uint64_t> seed;
};

/// Job operations over a store and a set of backends.
///
/// Every mutating call takes the version the caller last saw; a mismatch
/// raises Error(StaleVersion) with the current version as detail, and
/// passing std::nullopt skips the check. Calls on one job are serialized,
/// calls on different jobs run concurrently. Every accepted mutation bumps
/// the version by one and is persisted before the call returns.
class Pipeline {
public:
    Pipeline(JobStore store, std::shared_ptr<const backends::Backends> backends, PipelineOptions options = {});

    Job create_job(const UserRequirement& req);

    Job get(const std::string& id) const;
    std::vector<Job> list(std::size_t page, std::size_t page_size = 20) const;

    /// Runs exactly the next stage. Backend failures persist the job as
    /// Failed(stage, reason) and rethrow. Throws StateTerminal on Rendered or
    /// Failed jobs.
    Job advance(const std::string& id, std::optional<std::int64_t> expected_version = std::nullopt);

    /// Replaces the blueprint while the job is BlueprintReady (before any
    /// artifact depends on it). Throws WrongState otherwise.
    Job put_blueprint(const std::string& id, const DesignBlueprint& bp,
                      std::optional<std::int64_t> expected_version = std::nullopt);

    /// Applies the edits in order as one mutation; all or nothing.
    Job edit_layout(const std::string& id, const std::vector<typography::EditOp>& edits,
                    std::optional<std::int64_t> expected_version = std::nullopt);
    Job edit_layout(const std::string& id, const typography::EditOp& edit,
                    std::optional<std::int64_t> expected_version = std::nullopt);

    /// New background from merged attributes, rebound into the poster in
    /// place. Failures leave the job untouched.
    Job regenerate_background(const std::string& id, const BackgroundOverrides& overrides,
                              std::optional<std::int64_t> expected_version = std::nullopt);

    /// A user-supplied background (any PNG, resampled to the blueprint
    /// resolution). While BlueprintReady it is held as an override that the
    /// next advance adopts; afterwards it is rebound like a regeneration.
    Job attach_background(const std::string& id, const std::string& png,
                          std::optional<std::int64_t> expected_version = std::nullopt);

    struct RenderResult {
        Job job;
        RenderEntry entry;
        std::string png;
    };

    /// Rasterizes scale_document(poster, scale), stores the PNG and records
    /// it (replacing an earlier render at the same scale).
    RenderResult render(const std::string& id, const Rational& scale,
                        std::optional<std::int64_t> expected_version = std::nullopt);

    /// The same raster as render() without touching the job.
    std::string preview_png(const std::string& id, const Rational& scale) const;

    /// Rebuilds the poster from pristine_poster and edit_history.
    static typography::PosterDocument replay_edits(const Job& job);

    const JobStore& store() const { return store_; }
    const backends::Backends& backends() const { return *backends_; }

private:
    std::shared_ptr<std::mutex> job_mutex(const std::string& id);
    Job load_checked(const std::string& id, std::optional<std::int64_t> expected_version) const;
    /// Validates the transition, bumps the version and persists.
    Job commit(const Job& before, Job after);
    typography::Raster rasterize_poster(const Job& job, const typography::PosterDocument& doc) const;
    Job rebind_background(Job job, const backends::GeneratedBackground& bg);

    JobStore store_;
    std::shared_ptr<const backends::Backends> backends_;
    PipelineOptions options_;
    typography::SyntheticGlyphs glyphs_;

    std::mutex seed_mutex_;
    std::optional<Rng> seed_rng_;
    std::mutex registry_mutex_;
    std::unordered_map<std::string, std::shared_ptr<std::mutex>> job_mutexes_;
};

}  // namespace posterforge::pipeline
