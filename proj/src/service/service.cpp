#include "posterforge/service/service.hpp"

#include "posterforge/core/fs.hpp"
#include "posterforge/typography/html.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace posterforge::service {
namespace {

using nlohmann::json;

struct RouteError {
    int status;
    ApiError error;
};

[[noreturn]] void route_error(int status, std::string code, std::string message) {
    throw RouteError{status, ApiError{std::move(code), std::move(message), std::nullopt, std::nullopt, {}}};
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= path.size()) {
        std::size_t end = path.find('/', start);
        if (end == std::string::npos) end = path.size();
        if (end > start) parts.push_back(path.substr(start, end - start));
        start = end + 1;
    }
    return parts;
}

Response json_response(int status, const json& body, std::optional<std::int64_t> version = std::nullopt) {
    Response r;
    r.status = status;
    r.body = body.dump();
    if (version) r.headers.emplace_back("ETag", "\"" + std::to_string(*version) + "\"");
    return r;
}

Response error_response(int status, const ApiError& error) {
    Response r = json_response(status, error.to_json());
    if (error.job_version) r.headers.emplace_back("ETag", "\"" + std::to_string(*error.job_version) + "\"");
    return r;
}

json parse_body(const Request& req) {
    try {
        return req.body.empty() ? json::object() : json::parse(req.body);
    } catch (const json::exception&) {
        route_error(400, "BadRequest", "request body is not valid JSON");
    }
}

std::int64_t require_if_match(const Request& req) {
    auto it = req.headers.find("If-Match");
    if (it == req.headers.end()) route_error(428, "PreconditionRequired", "this route requires If-Match: <job version>");
    std::string_view v = it->second;
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.remove_suffix(1);
    if (v.substr(0, 2) == "W/") v.remove_prefix(2);
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
    std::int64_t version = 0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), version);
    if (v.empty() || res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
        route_error(400, "BadRequest", "If-Match must carry an integer job version");
    }
    return version;
}

Rational require_scale(const Request& req) {
    auto it = req.query.find("scale");
    if (it == req.query.end()) return Rational(1);
    auto scale = Rational::parse(it->second);
    if (!scale || !scale->is_positive()) route_error(400, "BadRequest", "scale must be a positive number such as 2, 0.5 or 1/3");
    return *scale;
}

std::string media_type(const Request& req) {
    auto it = req.headers.find("Content-Type");
    if (it == req.headers.end()) return "";
    std::string v = it->second.substr(0, it->second.find(';'));
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.pop_back();
    return v;
}

std::string static_content_type(const std::string& path) {
    auto ends = [&](std::string_view suffix) {
        return path.size() >= suffix.size() && path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    if (ends(".html")) return "text/html; charset=utf-8";
    if (ends(".js") || ends(".mjs")) return "text/javascript";
    if (ends(".css")) return "text/css";
    if (ends(".json")) return "application/json";
    if (ends(".svg")) return "image/svg+xml";
    if (ends(".png")) return "image/png";
    return "application/octet-stream";
}

}  // namespace

bool CaseInsensitiveLess::operator()(const std::string& a, const std::string& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [](char x, char y) {
        return std::tolower(static_cast<unsigned char>(x)) < std::tolower(static_cast<unsigned char>(y));
    });
}

json ApiError::to_json() const {
    json j = {{"code", code}, {"message", message}};
    if (stage) j["stage"] = *stage;
    if (job_version) j["job_version"] = *job_version;
    if (!details.empty()) j["details"] = details;
    return j;
}

int http_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::JobNotFound:
        case ErrorCode::UnknownNode:
            return 404;
        case ErrorCode::StaleVersion:
        case ErrorCode::WrongState:
        case ErrorCode::StateTerminal:
            return 409;
        case ErrorCode::InvalidBackendOutput:
        case ErrorCode::ResolutionMismatch:
        case ErrorCode::ParseFailure:
        case ErrorCode::TextCoverageViolation:
            return 422;
        case ErrorCode::BackendUnreachable:
        case ErrorCode::BackendRejected:
            return 502;
        case ErrorCode::BackendTimeout:
            return 504;
        case ErrorCode::Storage:
        case ErrorCode::ArithmeticOverflow:
        case ErrorCode::NumericalFailure:
            return 500;
        default:
            return 400;
    }
}

json job_view(const pipeline::Job& job) {
    json j = pipeline::job_to_json(job);
    j["state"] = std::string(pipeline::to_string(job.state.kind));
    if (job.state.kind == pipeline::StateKind::Failed) {
        j["failure"] = {{"stage", job.state.failed_stage}, {"reason", job.state.reason}};
    }
    return j;
}

Service::Service(pipeline::Pipeline& pipeline, ServiceOptions options) : pipeline_(pipeline), options_(std::move(options)) {}

Response Service::handle(const Request& request) {
    try {
        return route(request);
    } catch (const RouteError& e) {
        return error_response(e.status, e.error);
    } catch (const Error& e) {
        ApiError api{std::string(to_string(e.code())), e.what(), std::nullopt, std::nullopt, e.details()};
        const auto parts = split_path(request.path);
        if (parts.size() >= 2 && parts[0] == "jobs" && pipeline_.store().exists(parts[1])) {
            // Report where the job stands now so clients can recover (re-read after 409, inspect a failure).
            try {
                const auto job = pipeline_.get(parts[1]);
                api.job_version = job.version;
                if (job.state.kind == pipeline::StateKind::Failed) api.stage = job.state.failed_stage;
            } catch (const Error&) {
            }
        }
        return error_response(http_status(e.code()), api);
    } catch (const std::exception& e) {
        return error_response(500, ApiError{"Internal", e.what(), std::nullopt, std::nullopt, {}});
    }
}

Response Service::serve_static(const std::string& relative) const {
    if (!options_.static_dir) route_error(404, "RouteNotFound", "no studio bundle is configured");
    const auto root = std::filesystem::weakly_canonical(*options_.static_dir);
    auto target = std::filesystem::weakly_canonical(root / (relative.empty() ? "index.html" : relative));
    const auto [root_end, unused] = std::mismatch(root.begin(), root.end(), target.begin(), target.end());
    (void)unused;
    if (root_end != root.end()) route_error(404, "RouteNotFound", "outside the studio bundle");
    if (std::filesystem::is_directory(target)) target /= "index.html";
    if (!std::filesystem::is_regular_file(target)) route_error(404, "RouteNotFound", "no such studio file");
    Response r;
    r.content_type = static_content_type(target.string());
    r.body = read_file(target);
    return r;
}

Response Service::route(const Request& req) {
    const auto parts = split_path(req.path);
    const std::string& method = req.method;
    auto method_not_allowed = [&]() -> Response { route_error(405, "MethodNotAllowed", method + " is not supported on " + req.path); };

    if (parts.size() == 1 && parts[0] == "healthz") {
        if (method != "GET") return method_not_allowed();
        return json_response(200, {{"status", "ok"}});
    }
    if (!parts.empty() && parts[0] == "app") {
        if (method != "GET") return method_not_allowed();
        std::string relative;
        for (std::size_t i = 1; i < parts.size(); ++i) relative += (i > 1 ? "/" : "") + parts[i];
        return serve_static(relative);
    }
    if (parts.empty() || parts[0] != "jobs") route_error(404, "RouteNotFound", "no route for " + req.path);

    if (parts.size() == 1) {
        if (method == "POST") {
            json body = parse_body(req);
            const json& requirement = body.contains("requirement") ? body.at("requirement") : body;
            auto job = pipeline_.create_job(pipeline::requirement_from_json(requirement));
            Response r = json_response(201, job_view(job), job.version);
            r.headers.emplace_back("Location", "/jobs/" + job.id);
            return r;
        }
        if (method == "GET") {
            std::size_t page = 1;
            if (auto it = req.query.find("page"); it != req.query.end()) {
                auto res = std::from_chars(it->second.data(), it->second.data() + it->second.size(), page);
                if (res.ec != std::errc{} || res.ptr != it->second.data() + it->second.size() || page == 0) {
                    route_error(400, "BadRequest", "page must be a positive integer");
                }
            }
            constexpr std::size_t kPageSize = 20;
            json jobs = json::array();
            for (const auto& job : pipeline_.list(page, kPageSize)) {
                jobs.push_back({{"id", job.id},
                                {"state", std::string(pipeline::to_string(job.state.kind))},
                                {"version", job.version},
                                {"created_ms", job.created_ms},
                                {"requirement", pipeline::requirement_to_json(job.requirement)}});
            }
            return json_response(200, {{"page", page}, {"page_size", kPageSize}, {"total", pipeline_.store().count()}, {"jobs", jobs}});
        }
        return method_not_allowed();
    }

    const std::string& id = parts[1];
    if (!pipeline_.store().exists(id)) {
        throw Error(ErrorCode::JobNotFound, "no job with id '" + id + "'", {id});
    }

    if (parts.size() == 2) {
        if (method != "GET") return method_not_allowed();
        auto job = pipeline_.get(id);
        return json_response(200, job_view(job), job.version);
    }
    if (parts.size() != 3) route_error(404, "RouteNotFound", "no route for " + req.path);
    const std::string& leaf = parts[2];

    if (leaf == "advance") {
        if (method != "POST") return method_not_allowed();
        auto job = pipeline_.advance(id, require_if_match(req));
        return json_response(200, job_view(job), job.version);
    }
    if (leaf == "blueprint") {
        if (method == "GET") {
            auto job = pipeline_.get(id);
            if (!job.blueprint) throw Error(ErrorCode::WrongState, "job has no blueprint yet", {std::string(pipeline::to_string(job.state.kind))});
            Response r = json_response(200, json::parse(serialize_blueprint(*job.blueprint)), job.version);
            return r;
        }
        if (method == "PUT") {
            const std::int64_t version = require_if_match(req);
            auto job = pipeline_.put_blueprint(id, parse_blueprint(req.body, ParseMode::Strict), version);
            return json_response(200, job_view(job), job.version);
        }
        return method_not_allowed();
    }
    if (leaf == "background") {
        if (method != "POST") return method_not_allowed();
        const std::int64_t version = require_if_match(req);
        const std::string type = media_type(req);
        if (type == "image/png" || type == "application/octet-stream") {
            auto job = pipeline_.attach_background(id, req.body, version);
            return json_response(200, job_view(job), job.version);
        }
        json body = parse_body(req);
        if (!body.is_object()) route_error(400, "BadRequest", "expected {caption?, style?, seed?}");
        pipeline::BackgroundOverrides overrides;
        for (const auto& [key, value] : body.items()) {
            if (key == "caption" && value.is_string()) {
                overrides.caption = value.get<std::string>();
            } else if (key == "style" && value.is_string()) {
                overrides.style = style_from_string(value.get<std::string>());
                if (!overrides.style) route_error(400, "BadRequest", "unknown style '" + value.get<std::string>() + "'");
            } else if (key == "seed" && value.is_number_unsigned()) {
                overrides.seed = value.get<std::uint64_t>();
            } else {
                route_error(400, "BadRequest", "unexpected or mistyped field '" + key + "'");
            }
        }
        auto job = pipeline_.regenerate_background(id, overrides, version);
        return json_response(200, job_view(job), job.version);
    }
    if (leaf == "poster.html") {
        if (method != "GET") return method_not_allowed();
        auto job = pipeline_.get(id);
        if (!job.poster) throw Error(ErrorCode::WrongState, "job has no poster yet", {std::string(pipeline::to_string(job.state.kind))});
        Response r;
        r.content_type = "text/html; charset=utf-8";
        r.body = typography::serialize_poster(*job.poster);
        r.headers.emplace_back("ETag", "\"" + std::to_string(job.version) + "\"");
        return r;
    }
    if (leaf == "poster") {
        if (method != "PATCH") return method_not_allowed();
        const std::int64_t version = require_if_match(req);
        json body = parse_body(req);
        if (!body.is_object() || !body.contains("edits") || !body.at("edits").is_array()) {
            route_error(400, "BadRequest", "expected {\"edits\": [EditOp, ...]}");
        }
        std::vector<typography::EditOp> edits;
        for (const auto& e : body.at("edits")) edits.push_back(typography::edit_from_json(e));
        auto job = pipeline_.edit_layout(id, edits, version);
        return json_response(200, job_view(job), job.version);
    }
    if (leaf == "render") {
        const Rational scale = require_scale(req);
        if (method == "GET") {
            Response r;
            r.content_type = "image/png";
            r.body = pipeline_.preview_png(id, scale);
            return r;
        }
        if (method == "POST") {
            const std::int64_t version = require_if_match(req);
            auto result = pipeline_.render(id, scale, version);
            json body = job_view(result.job);
            body["render"] = {{"scale", result.entry.scale.to_string()}, {"path", result.entry.path},
                              {"digest", result.entry.digest}, {"width", result.entry.width}, {"height", result.entry.height}};
            return json_response(200, body, result.job.version);
        }
        return method_not_allowed();
    }
    route_error(404, "RouteNotFound", "no route for " + req.path);
}

}  // namespace posterforge::service
