#include "posterforge/service/service.hpp"

#include <httplib.h>

#include <csignal>
#include <iostream>
#include <mutex>

namespace posterforge::service {
namespace {

std::mutex g_server_mutex;
httplib::Server* g_server = nullptr;

extern "C" void on_signal(int) {
    // Server::stop only flips flags and shuts the listening socket.
    if (g_server) g_server->stop();
}

Request to_request(const httplib::Request& in) {
    Request out;
    out.method = in.method;
    out.path = in.path;
    for (const auto& [key, value] : in.params) out.query.emplace(key, value);
    for (const auto& [key, value] : in.headers) out.headers.emplace(key, value);
    out.body = in.body;
    if (in.is_multipart_form_data()) {
        // The studio uploads backgrounds as a multipart "image" field.
        if (in.has_file("image")) {
            out.body = in.get_file_value("image").content;
            out.headers.erase("Content-Type");
            out.headers.emplace("Content-Type", "image/png");
        }
    }
    return out;
}

void write_response(const Response& in, httplib::Response& out) {
    out.status = in.status;
    for (const auto& [key, value] : in.headers) out.set_header(key, value);
    out.set_content(in.body, in.content_type);
}

}  // namespace

void serve(Service& service, const std::string& host, int port) {
    httplib::Server server;
    auto handler = [&service](const httplib::Request& req, httplib::Response& res) {
        write_response(service.handle(to_request(req)), res);
    };
    const std::string all = ".*";
    server.Get(all, handler);
    server.Post(all, handler);
    server.Put(all, handler);
    server.Patch(all, handler);
    server.Delete(all, handler);
    server.set_logger([](const httplib::Request& req, const httplib::Response& res) {
        std::cerr << req.method << ' ' << req.path << ' ' << res.status << '\n';
    });

    if (!server.bind_to_port(host, port)) {
        throw Error(ErrorCode::InvalidArgument, "cannot listen on " + host + ":" + std::to_string(port));
    }
    {
        std::lock_guard lock(g_server_mutex);
        g_server = &server;
    }
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "listening on http://" << host << ':' << port << '\n';
    server.listen_after_bind();
    std::lock_guard lock(g_server_mutex);
    g_server = nullptr;
}

void stop_server() {
    std::lock_guard lock(g_server_mutex);
    if (g_server) g_server->stop();
}

}  // namespace posterforge::service
