#pragma once

#include "posterforge/blueprint.hpp"

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

namespace posterforge::backends {

struct EndpointConfig {
    std::string base_url;
    std::chrono::milliseconds timeout{120000};
    int max_retries = 2;
    std::optional<std::string> auth_token_env;

    bool operator==(const EndpointConfig&) const = default;
};

struct MockBackend {
    std::uint64_t seed = 0;

    bool operator==(const MockBackend&) const = default;
};

/// Remote(EndpointConfig) or Mock(seed).
using BackendKind = std::variant<EndpointConfig, MockBackend>;

/// Backends for the three stages. Background generation routes on the
/// style: a per-style entry wins over `background_default`.
struct BackendConfig {
    BackendKind blueprint = MockBackend{};
    BackendKind background_default = MockBackend{};
    std::map<StyleId, BackendKind> background_by_style;
    BackendKind layout = MockBackend{};

    const BackendKind& background_for(StyleId style) const;

    /// Every stage mocked with the same seed.
    static BackendConfig all_mock(std::uint64_t seed = 0);
};

/// Throws Error(InvalidArgument) on a bad timeout, retry count or URL.
void validate_endpoint(const EndpointConfig& endpoint);

/// {"mock": true, "seed": 7} or {"base_url": "...", "timeout_ms": 120000,
/// "max_retries": 2, "auth_token_env": "NAME"}.
BackendKind backend_kind_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BackendKind& kind);

/// {"blueprint": kind, "background": {"default": kind, "<StyleId>": kind, ...},
/// "layout": kind}. Missing stages default to mock with `mock_seed` (0).
BackendConfig backend_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BackendConfig& config);

}  // namespace posterforge::backends
