#include "posterforge/backends/backends.hpp"

#include "posterforge/backends/mock.hpp"
#include "posterforge/core/digest.hpp"
#include "posterforge/core/error.hpp"
#include "posterforge/core/unicode.hpp"
#include "posterforge/typography/html.hpp"
#include "posterforge/typography/png.hpp"

#include <cstdlib>

namespace posterforge::backends {
namespace {

using nlohmann::json;

std::string excerpt(const std::string& body) {
    return body.size() <= 200 ? body : body.substr(0, 200) + "...";
}

// One logical remote call: same envelope and idempotency key on every
// attempt, retrying only timeouts and 5xx answers.
json call_remote(const EndpointConfig& endpoint, const HttpTransport& transport, const std::string& task,
                 const json& payload, std::uint64_t seed) {
    validate_endpoint(endpoint);
    const std::string body = json{{"task", task}, {"payload", payload}, {"seed", seed}}.dump();
    HttpRequest request;
    request.url = endpoint.base_url;
    if (!request.url.empty() && request.url.back() == '/') request.url.pop_back();
    request.url += "/v1/generate";
    request.body = body;
    request.timeout = endpoint.timeout;
    request.headers.emplace_back("Content-Type", "application/json");
    request.headers.emplace_back("Idempotency-Key", sha256_hex(body).substr(0, 32));
    if (endpoint.auth_token_env) {
        if (const char* token = std::getenv(endpoint.auth_token_env->c_str()); token && *token) {
            request.headers.emplace_back("Authorization", std::string("Bearer ") + token);
        }
    }

    for (int attempt = 0;; ++attempt) {
        const bool last = attempt >= endpoint.max_retries;
        HttpResponse response;
        try {
            response = transport.post(request);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::BackendTimeout && !last) continue;
            throw;
        }
        if (response.status >= 500) {
            if (!last) continue;
            throw Error(ErrorCode::BackendRejected, task + ": backend answered " + std::to_string(response.status),
                        {std::to_string(response.status), excerpt(response.body)});
        }
        if (response.status < 200 || response.status >= 300) {
            throw Error(ErrorCode::BackendRejected, task + ": backend answered " + std::to_string(response.status),
                        {std::to_string(response.status), excerpt(response.body)});
        }
        json parsed;
        try {
            parsed = json::parse(response.body);
        } catch (const json::exception&) {
            throw Error(ErrorCode::InvalidBackendOutput, task + ": response is not JSON", {excerpt(response.body)});
        }
        if (!parsed.is_object() || !parsed.contains("output")) {
            throw Error(ErrorCode::InvalidBackendOutput, task + ": response lacks an \"output\" member",
                        {excerpt(response.body)});
        }
        return parsed.at("output");
    }
}

json requirement_payload(const UserRequirement& req) {
    json j = {{"text", req.text}, {"locale", req.locale}};
    if (req.detail_level) j["detail_level"] = std::string(to_string(*req.detail_level));
    if (req.canonical_key) j["canonical_key"] = *req.canonical_key;
    return j;
}

}  // namespace

json to_json(const ImageRef& ref) {
    return {{"id", ref.id}, {"width", ref.width}, {"height", ref.height}, {"format", ref.format},
            {"content_hash", ref.content_hash}};
}

ImageRef image_ref_from_json(const json& j) {
    try {
        return {j.at("id").get<std::string>(), j.at("width").get<std::int64_t>(), j.at("height").get<std::int64_t>(),
                j.value("format", std::string("PNG")), j.at("content_hash").get<std::string>()};
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("malformed image reference: ") + e.what());
    }
}

GeneratedBackground adopt_raster(typography::Raster raster) {
    GeneratedBackground g;
    g.png = typography::encode_png(raster);
    g.ref.content_hash = sha256_hex(g.png);
    g.ref.id = "bg-" + g.ref.content_hash.substr(0, 16);
    g.ref.width = raster.width;
    g.ref.height = raster.height;
    g.raster = std::move(raster);
    return g;
}

GeneratedBackground adopt_png(std::string png) {
    GeneratedBackground g;
    g.raster = typography::decode_png(png);
    g.png = std::move(png);
    g.ref.content_hash = sha256_hex(g.png);
    g.ref.id = "bg-" + g.ref.content_hash.substr(0, 16);
    g.ref.width = g.raster.width;
    g.ref.height = g.raster.height;
    return g;
}

DesignBlueprint generate_blueprint(const UserRequirement& req, const BackendKind& backend,
                                   const HttpTransport& transport) {
    validate_requirement(req);
    if (const auto* m = std::get_if<MockBackend>(&backend)) return mock::blueprint(req, m->seed);

    const json output = call_remote(std::get<EndpointConfig>(backend), transport, "blueprint",
                                    {{"requirement", requirement_payload(req)}}, 0);
    const std::string text = output.is_string() ? output.get<std::string>() : output.dump();
    try {
        return parse_blueprint(text, ParseMode::Strict);
    } catch (const Error& e) {
        std::vector<std::string> details = e.details();
        if (details.empty()) details.push_back(e.what());
        throw Error(ErrorCode::InvalidBackendOutput, std::string("blueprint backend output rejected: ") + e.what(),
                    details);
    }
}

GeneratedBackground generate_background(const BackgroundAttributes& attrs, Resolution resolution, std::uint64_t seed,
                                        const BackendKind& backend, const HttpTransport& transport) {
    if (resolution.width < kMinResolution || resolution.height < kMinResolution || resolution.width > kMaxResolution ||
        resolution.height > kMaxResolution) {
        throw Error(ErrorCode::InvalidArgument, "background resolution outside [64, 8192]");
    }
    GeneratedBackground g;
    if (const auto* m = std::get_if<MockBackend>(&backend)) {
        // Both seeds feed the key: the per-call seed picks the image, the
        // backend seed separates otherwise identical mock deployments.
        const std::uint64_t mixed = m->seed == 0 ? seed : stable_hash64(std::to_string(m->seed) + ":" + std::to_string(seed));
        g = adopt_raster(mock::background(attrs, resolution, mixed));
    } else {
        const std::string task = "background:" + std::string(to_string(attrs.style));
        const json output = call_remote(std::get<EndpointConfig>(backend), transport, task,
                                        {{"style", std::string(to_string(attrs.style))},
                                         {"caption", attrs.caption},
                                         {"width", resolution.width},
                                         {"height", resolution.height}},
                                        seed);
        std::string b64;
        if (output.is_string()) b64 = output.get<std::string>();
        else if (output.is_object() && output.contains("image") && output.at("image").is_string()) b64 = output.at("image").get<std::string>();
        else throw Error(ErrorCode::InvalidBackendOutput, "background output must be a base64 PNG string");
        try {
            g = adopt_png(base64_decode(b64));
        } catch (const Error& e) {
            throw Error(ErrorCode::InvalidBackendOutput, std::string("background output is not a PNG: ") + e.what());
        }
    }
    if (g.ref.width != resolution.width || g.ref.height != resolution.height) {
        const std::string got = std::to_string(g.ref.width) + "x" + std::to_string(g.ref.height);
        const std::string want = std::to_string(resolution.width) + "x" + std::to_string(resolution.height);
        throw Error(ErrorCode::ResolutionMismatch, "background is " + got + ", wanted " + want, {got, want});
    }
    return g;
}

std::vector<std::string> missing_strings(const DesignBlueprint& bp, const std::vector<std::string>& extracted) {
    std::vector<std::string> haystacks;
    haystacks.reserve(extracted.size());
    for (const auto& s : extracted) haystacks.push_back(unicode::normalize_for_matching(s));
    std::vector<std::string> missing;
    for (const auto& s : bp.textual.strings()) {
        const std::string needle = unicode::normalize_for_matching(s);
        if (needle.empty()) continue;
        const bool found = std::any_of(haystacks.begin(), haystacks.end(),
                                       [&](const std::string& h) { return h.find(needle) != std::string::npos; });
        if (!found) missing.push_back(s);
    }
    return missing;
}

void check_layout(const DesignBlueprint& bp, const std::string& html) {
    typography::PosterDocument doc;
    try {
        doc = typography::parse_poster_html(html, ParseMode::Strict);
    } catch (const Error& e) {
        std::vector<std::string> details = e.details();
        details.insert(details.begin(), std::string(to_string(e.code())));
        throw Error(ErrorCode::ParseFailure, std::string("layout output does not parse: ") + e.what(), details);
    }
    const auto missing = missing_strings(bp, typography::extract_text(doc));
    if (!missing.empty()) {
        throw Error(ErrorCode::TextCoverageViolation,
                    "layout output is missing " + std::to_string(missing.size()) + " blueprint string(s)", missing);
    }
}

std::string generate_layout(const DesignBlueprint& bp, const ImageRef& background, const BackendKind& backend,
                            const HttpTransport& transport) {
    if (background.width != bp.params.resolution.width || background.height != bp.params.resolution.height) {
        throw Error(ErrorCode::ResolutionMismatch, "background does not match the blueprint resolution",
                    {std::to_string(background.width) + "x" + std::to_string(background.height),
                     std::to_string(bp.params.resolution.width) + "x" + std::to_string(bp.params.resolution.height)});
    }
    std::string html;
    if (std::holds_alternative<MockBackend>(backend)) {
        html = mock::layout(bp, background.id);
    } else {
        const json output = call_remote(std::get<EndpointConfig>(backend), transport, "layout",
                                        {{"blueprint", json::parse(serialize_blueprint(bp))},
                                         {"background", to_json(background)}},
                                        0);
        if (!output.is_string()) throw Error(ErrorCode::InvalidBackendOutput, "layout output must be a PosterHTML string");
        html = output.get<std::string>();
    }
    check_layout(bp, html);
    return html;
}

Backends::Backends(BackendConfig config, std::shared_ptr<HttpTransport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {}

DesignBlueprint Backends::generate_blueprint(const UserRequirement& req) const {
    return backends::generate_blueprint(req, config_.blueprint, *transport_);
}

GeneratedBackground Backends::generate_background(const BackgroundAttributes& attrs, Resolution resolution,
                                                  std::uint64_t seed) const {
    return backends::generate_background(attrs, resolution, seed, config_.background_for(attrs.style), *transport_);
}

std::string Backends::generate_layout(const DesignBlueprint& bp, const ImageRef& background) const {
    return backends::generate_layout(bp, background, config_.layout, *transport_);
}

}  // namespace posterforge::backends
