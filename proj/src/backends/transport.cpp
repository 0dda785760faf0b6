#include "posterforge/backends/transport.hpp"

#include "posterforge/core/error.hpp"

#include <httplib.h>

namespace posterforge::backends {
namespace {

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

SplitUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw Error(ErrorCode::InvalidArgument, "not an absolute URL: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

class HttplibTransport final : public HttpTransport {
public:
    HttpResponse post(const HttpRequest& request) const override {
        const SplitUrl url = split_url(request.url);
        httplib::Client client(url.origin);
        const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(request.timeout);
        const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(request.timeout - seconds);
        client.set_connection_timeout(seconds.count(), micros.count());
        client.set_read_timeout(seconds.count(), micros.count());
        client.set_write_timeout(seconds.count(), micros.count());

        httplib::Headers headers;
        std::string content_type = "application/json";
        for (const auto& [name, value] : request.headers) {
            if (iequals(name, "Content-Type")) content_type = value;
            else headers.emplace(name, value);
        }
        const auto started = std::chrono::steady_clock::now();
        auto result = client.Post(url.path, headers, request.body, content_type);
        if (!result) {
            const auto elapsed = std::chrono::steady_clock::now() - started;
            const auto error = result.error();
            // httplib reports an expired read deadline as a plain read error.
            const bool timed_out = error == httplib::Error::ConnectionTimeout ||
                                   ((error == httplib::Error::Read || error == httplib::Error::Write) &&
                                    elapsed >= request.timeout * 9 / 10);
            if (timed_out) throw Error(ErrorCode::BackendTimeout, "timeout calling " + request.url, {"timeout"});
            throw Error(ErrorCode::BackendUnreachable, "cannot reach " + request.url + ": " + httplib::to_string(error),
                        {httplib::to_string(error)});
        }
        return {result->status, result->body};
    }
};

}  // namespace

std::shared_ptr<HttpTransport> make_default_transport() { return std::make_shared<HttplibTransport>(); }

}  // namespace posterforge::backends
