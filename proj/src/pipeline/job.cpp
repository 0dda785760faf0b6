#include "posterforge/pipeline/job.hpp"

#include "posterforge/core/error.hpp"
#include "posterforge/typography/html.hpp"

#include <chrono>

namespace posterforge::pipeline {
namespace {

using nlohmann::json;

constexpr std::string_view kStateNames[] = {"Created", "BlueprintReady", "BackgroundReady", "LayoutReady", "Rendered", "Failed"};

[[noreturn]] void corrupt(const std::string& reason) {
    throw Error(ErrorCode::Storage, "malformed job manifest: " + reason, {reason});
}

json poster_to_json(const std::optional<typography::PosterDocument>& doc) {
    return doc ? json(typography::serialize_poster(*doc)) : json(nullptr);
}

std::optional<typography::PosterDocument> poster_from_json(const json& j) {
    if (j.is_null()) return std::nullopt;
    return typography::parse_poster_html(j.get<std::string>(), ParseMode::Strict);
}

}  // namespace

std::string_view to_string(StateKind kind) { return kStateNames[static_cast<int>(kind)]; }

std::optional<StateKind> state_kind_from_string(std::string_view text) {
    for (int i = 0; i < 6; ++i) {
        if (kStateNames[i] == text) return static_cast<StateKind>(i);
    }
    return std::nullopt;
}

bool is_legal_transition(StateKind from, StateKind to) {
    if (from == to) return true;
    if (from == StateKind::Failed) return false;
    if (to == StateKind::Failed) return true;
    if (from == StateKind::Rendered && to == StateKind::LayoutReady) return true;
    return static_cast<int>(to) == static_cast<int>(from) + 1;
}

std::string scale_label(const Rational& scale) {
    std::string s = scale.to_string();
    for (char& c : s) {
        if (c == '/') c = '_';
    }
    return s;
}

std::int64_t now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch()).count();
}

json requirement_to_json(const UserRequirement& req) {
    json j = {{"text", req.text}, {"locale", req.locale}};
    if (req.detail_level) j["detail_level"] = std::string(to_string(*req.detail_level));
    if (req.canonical_key) j["canonical_key"] = *req.canonical_key;
    return j;
}

UserRequirement requirement_from_json(const json& j) {
    auto invalid = [](const std::string& why) -> UserRequirement {
        throw Error(ErrorCode::InvalidRequirement, "invalid requirement: " + why, {why});
    };
    if (!j.is_object()) return invalid("must be an object");
    UserRequirement req;
    for (const auto& [key, value] : j.items()) {
        if (key == "text") {
            if (!value.is_string()) return invalid("text must be a string");
            req.text = value.get<std::string>();
        } else if (key == "locale") {
            if (!value.is_string()) return invalid("locale must be a string");
            req.locale = value.get<std::string>();
        } else if (key == "detail_level") {
            if (value.is_null()) continue;
            auto level = value.is_string() ? detail_level_from_string(value.get<std::string>()) : std::nullopt;
            if (!level) return invalid("detail_level must be basic, medium or detailed");
            req.detail_level = level;
        } else if (key == "canonical_key") {
            if (value.is_null()) continue;
            if (!value.is_string()) return invalid("canonical_key must be a string");
            req.canonical_key = value.get<std::string>();
        } else {
            return invalid("unknown field '" + key + "'");
        }
    }
    validate_requirement(req);
    return req;
}

json job_to_json(const Job& job) {
    json state = {{"kind", std::string(to_string(job.state.kind))}};
    if (job.state.kind == StateKind::Failed) {
        state["stage"] = job.state.failed_stage;
        state["reason"] = job.state.reason;
    }
    json renders = json::array();
    for (const auto& r : job.renders) {
        renders.push_back({{"scale", r.scale.to_string()}, {"path", r.path}, {"digest", r.digest},
                           {"width", r.width}, {"height", r.height}});
    }
    json history = json::array();
    for (const auto& e : job.edit_history) history.push_back({{"op", typography::edit_to_json(e.op)}, {"at_ms", e.at_ms}});

    return {{"id", job.id},
            {"requirement", requirement_to_json(job.requirement)},
            {"state", state},
            {"blueprint", job.blueprint ? json::parse(serialize_blueprint(*job.blueprint)) : json(nullptr)},
            {"background", job.background ? backends::to_json(*job.background) : json(nullptr)},
            {"background_override", job.background_override ? backends::to_json(*job.background_override) : json(nullptr)},
            {"poster", poster_to_json(job.poster)},
            {"pristine_poster", poster_to_json(job.pristine_poster)},
            {"renders", renders},
            {"edit_history", history},
            {"version", job.version},
            {"seeds", {{"background_seed", job.seeds.background_seed}}},
            {"stage_ms", job.stage_ms},
            {"created_ms", job.created_ms},
            {"updated_ms", job.updated_ms}};
}

Job job_from_json(const json& j) {
    try {
        Job job;
        job.id = j.at("id").get<std::string>();
        job.requirement = requirement_from_json(j.at("requirement"));
        const json& state = j.at("state");
        auto kind = state_kind_from_string(state.at("kind").get<std::string>());
        if (!kind) corrupt("unknown state");
        job.state.kind = *kind;
        if (*kind == StateKind::Failed) {
            job.state.failed_stage = state.at("stage").get<std::string>();
            job.state.reason = state.at("reason").get<std::string>();
        }
        if (!j.at("blueprint").is_null()) job.blueprint = parse_blueprint(j.at("blueprint").dump());
        if (!j.at("background").is_null()) job.background = backends::image_ref_from_json(j.at("background"));
        if (!j.at("background_override").is_null()) {
            job.background_override = backends::image_ref_from_json(j.at("background_override"));
        }
        job.poster = poster_from_json(j.at("poster"));
        job.pristine_poster = poster_from_json(j.at("pristine_poster"));
        for (const auto& r : j.at("renders")) {
            auto scale = Rational::parse(r.at("scale").get<std::string>());
            if (!scale) corrupt("bad render scale");
            job.renders.push_back({*scale, r.at("path").get<std::string>(), r.at("digest").get<std::string>(),
                                   r.at("width").get<std::int64_t>(), r.at("height").get<std::int64_t>()});
        }
        for (const auto& e : j.at("edit_history")) {
            job.edit_history.push_back({typography::edit_from_json(e.at("op")), e.at("at_ms").get<std::int64_t>()});
        }
        job.version = j.at("version").get<std::int64_t>();
        job.seeds.background_seed = j.at("seeds").at("background_seed").get<std::uint64_t>();
        job.stage_ms = j.at("stage_ms").get<std::map<std::string, std::int64_t>>();
        job.created_ms = j.at("created_ms").get<std::int64_t>();
        job.updated_ms = j.at("updated_ms").get<std::int64_t>();
        return job;
    } catch (const json::exception& e) {
        corrupt(e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Storage) throw;
        corrupt(std::string(to_string(e.code())) + ": " + e.what());
    }
}

}  // namespace posterforge::pipeline
