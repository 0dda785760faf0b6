#pragma once

#include "posterforge/core/error.hpp"
#include "posterforge/pipeline/pipeline.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace posterforge::service {

struct CaseInsensitiveLess {
    bool operator()(const std::string& a, const std::string& b) const;
};

struct Request {
    std::string method;
    std::string path;  // without the query string
    std::map<std::string, std::string> query;
    std::map<std::string, std::string, CaseInsensitiveLess> headers;
    std::string body;
};

struct Response {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
    std::vector<std::pair<std::string, std::string>> headers;
};

/// Error body of every non-2xx JSON response. `code` is one of the library
/// error names (StaleVersion, JobNotFound, BackendTimeout, ...) or one of
/// the route-level codes RouteNotFound, MethodNotAllowed,
/// PreconditionRequired, BadRequest and Internal.
struct ApiError {
    std::string code;
    std::string message;
    std::optional<std::string> stage;
    std::optional<std::int64_t> job_version;
    std::vector<std::string> details;

    nlohmann::json to_json() const;
};

/// HTTP status for a library error code.
int http_status(ErrorCode code);

struct ServiceOptions {
    /// Built studio bundle served under /app; disabled when empty.
    std::optional<std::filesystem::path> static_dir;
};

/// Routes every request onto a pipeline operation. Transport-free so it can
/// be driven directly in tests; serve() wires it to an HTTP listener.
class Service {
public:
    explicit Service(pipeline::Pipeline& pipeline, ServiceOptions options = {});

    Response handle(const Request& request);

    pipeline::Pipeline& pipeline() { return pipeline_; }

private:
    Response route(const Request& request);
    Response serve_static(const std::string& relative) const;

    pipeline::Pipeline& pipeline_;
    ServiceOptions options_;
};

/// The JSON view of a job returned by the job routes: the persisted form
/// with `state` flattened to its name and a `failure` {stage, reason} member
/// on failed jobs.
nlohmann::json job_view(const pipeline::Job& job);

/// Blocks serving `service` on host:port until stop_server() or a signal.
void serve(Service& service, const std::string& host, int port);
void stop_server();

}  // namespace posterforge::service
