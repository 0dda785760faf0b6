#pragma once

#include "posterforge/backends/config.hpp"
#include "posterforge/backends/transport.hpp"
#include "posterforge/blueprint.hpp"
#include "posterforge/typography/raster.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

namespace posterforge::backends {

/// A stored background image. `content_hash` is the SHA-256 (hex) of the
/// PNG bytes; the id is derived from it, so equal images share an id.
struct ImageRef {
    std::string id;
    std::int64_t width = 0;
    std::int64_t height = 0;
    std::string format = "PNG";
    std::string content_hash;

    bool operator==(const ImageRef&) const = default;
};

nlohmann::json to_json(const ImageRef& ref);
ImageRef image_ref_from_json(const nlohmann::json& j);

struct GeneratedBackground {
    ImageRef ref;
    std::string png;
    typography::Raster raster;
};

/// Wraps encoded PNG bytes into a GeneratedBackground (decoding them and
/// computing the hash and id).
GeneratedBackground adopt_png(std::string png);
GeneratedBackground adopt_raster(typography::Raster raster);

DesignBlueprint generate_blueprint(const UserRequirement& req, const BackendKind& backend,
                                   const HttpTransport& transport);

GeneratedBackground generate_background(const BackgroundAttributes& attrs, Resolution resolution, std::uint64_t seed,
                                        const BackendKind& backend, const HttpTransport& transport);

std::string generate_layout(const DesignBlueprint& bp, const ImageRef& background, const BackendKind& backend,
                            const HttpTransport& transport);

/// Checks a layout against its blueprint: strict parse (ParseFailure) and
/// text coverage (TextCoverageViolation listing the missing strings). Every
/// non-empty blueprint string must occur, after NFC normalization and
/// whitespace collapsing, inside the text of a single node.
void check_layout(const DesignBlueprint& bp, const std::string& html);

/// Blueprint strings absent from the document text (same rule as above).
std::vector<std::string> missing_strings(const DesignBlueprint& bp, const std::vector<std::string>& extracted);

/// The configured backends for all stages plus the transport they share.
class Backends {
public:
    explicit Backends(BackendConfig config, std::shared_ptr<HttpTransport> transport = make_default_transport());

    DesignBlueprint generate_blueprint(const UserRequirement& req) const;
    GeneratedBackground generate_background(const BackgroundAttributes& attrs, Resolution resolution,
                                            std::uint64_t seed) const;
    std::string generate_layout(const DesignBlueprint& bp, const ImageRef& background) const;

    const BackendConfig& config() const { return config_; }

private:
    BackendConfig config_;
    std::shared_ptr<HttpTransport> transport_;
};

}  // namespace posterforge::backends
