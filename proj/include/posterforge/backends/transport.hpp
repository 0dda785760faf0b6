#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace posterforge::backends {

struct HttpRequest {
    std::string url;  // absolute, e.g. "http://host:8080/v1/generate"
    std::vector<std::pair<std::string, std::string>> headers;
    std::string body;
    std::chrono::milliseconds timeout{120000};
};

struct HttpResponse {
    int status = 0;
    std::string body;
};

/// Minimal POST-only client. Implementations throw Error(BackendTimeout)
/// when the deadline passes and Error(BackendUnreachable) when no response
/// arrives for any other reason; any HTTP status is returned, not thrown.
class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual HttpResponse post(const HttpRequest& request) const = 0;
};

/// cpp-httplib backed transport, HTTPS included.
std::shared_ptr<HttpTransport> make_default_transport();

}  // namespace posterforge::backends
