#include "posterforge/backends/config.hpp"

#include "posterforge/core/error.hpp"

namespace posterforge::backends {
namespace {

using nlohmann::json;

[[noreturn]] void bad_config(const std::string& message) { throw Error(ErrorCode::InvalidArgument, message); }

}  // namespace

const BackendKind& BackendConfig::background_for(StyleId style) const {
    auto it = background_by_style.find(style);
    return it == background_by_style.end() ? background_default : it->second;
}

BackendConfig BackendConfig::all_mock(std::uint64_t seed) {
    BackendConfig c;
    c.blueprint = c.background_default = c.layout = MockBackend{seed};
    return c;
}

void validate_endpoint(const EndpointConfig& e) {
    if (e.timeout.count() <= 0) bad_config("timeout must be positive");
    if (e.max_retries < 0) bad_config("max_retries must be >= 0");
    if (e.base_url.rfind("http://", 0) != 0 && e.base_url.rfind("https://", 0) != 0) {
        bad_config("base_url must start with http:// or https://: '" + e.base_url + "'");
    }
}

BackendKind backend_kind_from_json(const json& j) {
    if (!j.is_object()) bad_config("backend must be an object");
    try {
        if (j.value("mock", false)) return MockBackend{j.value<std::uint64_t>("seed", 0)};
        EndpointConfig e;
        if (!j.contains("base_url")) bad_config("backend needs \"mock\": true or a base_url");
        e.base_url = j.at("base_url").get<std::string>();
        if (j.contains("timeout_ms")) e.timeout = std::chrono::milliseconds(j.at("timeout_ms").get<std::int64_t>());
        if (j.contains("max_retries")) e.max_retries = j.at("max_retries").get<int>();
        if (j.contains("auth_token_env") && !j.at("auth_token_env").is_null()) {
            e.auth_token_env = j.at("auth_token_env").get<std::string>();
        }
        validate_endpoint(e);
        return e;
    } catch (const json::exception& ex) {
        bad_config(std::string("malformed backend: ") + ex.what());
    }
}

json to_json(const BackendKind& kind) {
    if (const auto* m = std::get_if<MockBackend>(&kind)) return {{"mock", true}, {"seed", m->seed}};
    const auto& e = std::get<EndpointConfig>(kind);
    json j = {{"base_url", e.base_url}, {"timeout_ms", e.timeout.count()}, {"max_retries", e.max_retries}};
    if (e.auth_token_env) j["auth_token_env"] = *e.auth_token_env;
    return j;
}

BackendConfig backend_config_from_json(const json& j) {
    if (!j.is_object()) bad_config("backend config must be an object");
    BackendConfig c = BackendConfig::all_mock(j.value<std::uint64_t>("mock_seed", 0));
    if (auto it = j.find("blueprint"); it != j.end()) c.blueprint = backend_kind_from_json(*it);
    if (auto it = j.find("layout"); it != j.end()) c.layout = backend_kind_from_json(*it);
    if (auto it = j.find("background"); it != j.end()) {
        if (!it->is_object()) bad_config("background must be an object");
        for (const auto& [key, value] : it->items()) {
            if (key == "default") {
                c.background_default = backend_kind_from_json(value);
            } else if (auto style = style_from_string(key)) {
                c.background_by_style[*style] = backend_kind_from_json(value);
            } else {
                bad_config("unknown background style '" + key + "'");
            }
        }
    }
    return c;
}

json to_json(const BackendConfig& c) {
    json background = {{"default", to_json(c.background_default)}};
    for (const auto& [style, kind] : c.background_by_style) background[std::string(to_string(style))] = to_json(kind);
    return {{"blueprint", to_json(c.blueprint)}, {"background", background}, {"layout", to_json(c.layout)}};
}

}  // namespace posterforge::backends
