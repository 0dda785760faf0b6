#pragma once

#include "posterforge/backends/backends.hpp"
#include "posterforge/blueprint.hpp"
#include "posterforge/core/rational.hpp"
#include "posterforge/typography/document.hpp"
#include "posterforge/typography/edit.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace posterforge::pipeline {

enum class StateKind { Created, BlueprintReady, BackgroundReady, LayoutReady, Rendered, Failed };

std::string_view to_string(StateKind kind);
std::optional<StateKind> state_kind_from_string(std::string_view text);

struct JobState {
    StateKind kind = StateKind::Created;
    std::string failed_stage;  // only for Failed: "blueprint", "background", "layout" or "render"
    std::string reason;

    static JobState failed(std::string stage, std::string reason) { return {StateKind::Failed, std::move(stage), std::move(reason)}; }

    bool operator==(const JobState&) const = default;
};

/// The declared transition relation: the forward chain
/// Created -> BlueprintReady -> BackgroundReady -> LayoutReady -> Rendered,
/// Rendered -> LayoutReady (edits and rebinds invalidate renders), and any
/// non-Failed state -> Failed. Staying in the same state is not a transition
/// and is always allowed.
bool is_legal_transition(StateKind from, StateKind to);

struct RenderEntry {
    Rational scale;
    std::string path;    // relative to the job directory
    std::string digest;  // SHA-256 hex of the PNG bytes
    std::int64_t width = 0;
    std::int64_t height = 0;

    bool operator==(const RenderEntry&) const = default;
};

struct EditRecord {
    typography::EditOp op;
    std::int64_t at_ms = 0;  // wall clock, milliseconds since the epoch

    bool operator==(const EditRecord&) const = default;
};

struct Seeds {
    std::uint64_t background_seed = 0;

    bool operator==(const Seeds&) const = default;
};

struct Job {
    std::string id;
    UserRequirement requirement;
    JobState state;
    std::optional<DesignBlueprint> blueprint;
    std::optional<backends::ImageRef> background;
    /// Uploaded image waiting to replace stage 2 (set while BlueprintReady).
    std::optional<backends::ImageRef> background_override;
    std::optional<typography::PosterDocument> poster;
    /// The poster as produced by stage 3; replaying edit_history on it gives `poster`.
    std::optional<typography::PosterDocument> pristine_poster;
    std::vector<RenderEntry> renders;
    std::vector<EditRecord> edit_history;
    std::int64_t version = 1;
    Seeds seeds;
    std::map<std::string, std::int64_t> stage_ms;
    std::int64_t created_ms = 0;
    std::int64_t updated_ms = 0;

    bool operator==(const Job&) const = default;
};

/// Scale as used in render file names: "1", "2.5", "1_3" for 1/3.
std::string scale_label(const Rational& scale);

/// The persisted manifest form: the whole job, posters as PosterHTML text.
nlohmann::json job_to_json(const Job& job);
/// Throws Error(Storage) on a malformed manifest.
Job job_from_json(const nlohmann::json& j);

nlohmann::json requirement_to_json(const UserRequirement& req);
/// Throws Error(InvalidRequirement).
UserRequirement requirement_from_json(const nlohmann::json& j);

std::int64_t now_ms();

}  // namespace posterforge::pipeline
