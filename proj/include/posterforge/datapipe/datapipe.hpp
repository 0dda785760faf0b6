#pragma once

#include "posterforge/blueprint.hpp"
#include "posterforge/core/rng.hpp"
#include "posterforge/metrics/frechet.hpp"

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace posterforge::datapipe {

/// One curated image. `format` is kept as the declared string ("PNG",
/// "JPEG", "WEBP", ...) so that foreign formats can be recorded and then
/// rejected by verification instead of failing at load time.
struct AssetRecord {
    std::string id;
    std::string path;
    std::int64_t width = 0;
    std::int64_t height = 0;
    std::string format = "PNG";
    std::optional<double> aesthetic_score;
    std::optional<std::string> embedding_id;
    nlohmann::json extra = nlohmann::json::object();  // unrecognized fields, carried through

    bool operator==(const AssetRecord&) const = default;
};

struct VerifyPolicy {
    std::int64_t min_width = 512;
    std::int64_t min_height = 512;
    std::vector<std::string> allowed_formats = {"PNG", "JPEG", "WEBP"};
};

struct Verdict {
    bool accepted = true;
    std::vector<std::string> reasons;  // every violated rule, in a fixed order

    bool operator==(const Verdict&) const = default;
};

Verdict verify_asset(const AssetRecord& record, const VerifyPolicy& policy = {});

struct ResolutionTier {
    std::string label;
    std::int64_t min_pixels = 0;
};

struct AspectRatio {
    std::string label;
    std::int64_t w = 1;
    std::int64_t h = 1;
};

inline constexpr std::string_view kOtherClass = "other";

struct BucketPolicy {
    std::vector<ResolutionTier> tiers = {{"sd", 0}, {"hd", 1024 * 1024}, {"2k", 2048 * 2048}};
    std::vector<AspectRatio> ratios = {{"2:3", 2, 3}, {"3:4", 3, 4}, {"1:1", 1, 1}, {"4:3", 4, 3}, {"3:2", 3, 2},
                                       {"9:16", 9, 16}, {"16:9", 16, 9}};
    double ratio_tolerance = 0.05;
};

struct BucketKey {
    std::string resolution_tier;
    std::string aspect_class;

    auto operator<=>(const BucketKey&) const = default;
};

/// Tier: the highest tier whose min_pixels <= w*h ("other" below all tiers).
/// Aspect: the ratio closest to w/h (first listed wins ties), or "other"
/// when even that one deviates by more than the tolerance.
BucketKey bucket_of(const AssetRecord& record, const BucketPolicy& policy);
std::map<BucketKey, std::vector<std::string>> bucket_assets(const std::vector<AssetRecord>& records,
                                                            const BucketPolicy& policy = {});

inline constexpr double kDefaultDedupThreshold = 0.92;

struct DedupDrop {
    std::string id;
    std::string kept_by;
    double similarity = 0;

    bool operator==(const DedupDrop&) const = default;
};

struct DedupResult {
    std::vector<std::string> kept;     // ascending id order
    std::vector<DedupDrop> dropped;    // in scan order

    /// Kept id -> the ids dropped because of it.
    std::map<std::string, std::vector<std::string>> clusters() const;
};

/// Cosine similarity; 0 when either vector is all zeros.
double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

/// Greedy scan in ascending id order: an item is kept iff its cosine
/// similarity to every item kept so far is below `threshold`. Each dropped
/// item names the first kept item that reached the threshold. Throws
/// Error(MissingEmbedding) for an id without a vector.
DedupResult dedup(std::vector<std::string> ids, const metrics::FeatureSet& embeddings,
                  double threshold = kDefaultDedupThreshold);

/// Record-level dedup keyed by `embedding_id` (falling back to the record
/// id). With a bucket policy the scan runs separately inside each bucket,
/// otherwise across the whole corpus.
DedupResult dedup_records(const std::vector<AssetRecord>& records, const metrics::FeatureSet& embeddings,
                          double threshold = kDefaultDedupThreshold,
                          const std::optional<BucketPolicy>& within_buckets = std::nullopt);

struct FilterResult {
    std::vector<std::string> kept;
    std::vector<std::string> missing_score;
};

inline constexpr double kFilterDisabled = -std::numeric_limits<double>::infinity();

FilterResult aesthetic_filter(const std::vector<AssetRecord>& records, double min_score);

struct PromptTriplet {
    std::string basic;
    std::string medium;
    std::string detailed;

    const std::string& at(DetailLevel level) const;
    bool operator==(const PromptTriplet&) const = default;
};

/// Uniform choice among the three levels.
std::pair<DetailLevel, std::string> sample_prompt(const PromptTriplet& triplet, Rng& rng);

inline constexpr std::int64_t kManifestVersion = 1;

struct Manifest {
    std::int64_t version = kManifestVersion;
    std::vector<AssetRecord> records;
    std::map<std::string, PromptTriplet> prompts;
    std::vector<std::string> notes;
    /// Unrecognized top-level members as raw JSON text, re-emitted verbatim.
    std::map<std::string, std::string> extensions;

    bool operator==(const Manifest&) const = default;
};

/// Throws Error(MalformedManifest) or Error(VersionUnsupported).
Manifest parse_manifest(std::string_view text, const std::string& origin = "<memory>");
std::string serialize_manifest(const Manifest& manifest);

Manifest read_manifest(const std::string& path);
/// Atomic: writes a sibling temp file, then renames over `path`.
void write_manifest(const Manifest& manifest, const std::string& path);

}  // namespace posterforge::datapipe
