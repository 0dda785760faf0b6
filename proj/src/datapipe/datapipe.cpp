#include "posterforge/datapipe/datapipe.hpp"

#include "posterforge/core/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_map>

namespace posterforge::datapipe {
namespace {

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::toupper(c); });
    return out;
}

}  // namespace

Verdict verify_asset(const AssetRecord& record, const VerifyPolicy& policy) {
    Verdict v;
    if (record.width < policy.min_width) v.reasons.push_back("width<" + std::to_string(policy.min_width));
    if (record.height < policy.min_height) v.reasons.push_back("height<" + std::to_string(policy.min_height));
    const std::string format = upper(record.format);
    const bool allowed = std::any_of(policy.allowed_formats.begin(), policy.allowed_formats.end(),
                                     [&](const std::string& f) { return upper(f) == format; });
    if (!allowed) v.reasons.push_back("format not allowed");
    v.accepted = v.reasons.empty();
    return v;
}

BucketKey bucket_of(const AssetRecord& record, const BucketPolicy& policy) {
    BucketKey key{std::string(kOtherClass), std::string(kOtherClass)};
    const std::int64_t pixels = record.width * record.height;
    std::int64_t best_tier = -1;
    for (const auto& tier : policy.tiers) {
        if (tier.min_pixels <= pixels && tier.min_pixels > best_tier) {
            best_tier = tier.min_pixels;
            key.resolution_tier = tier.label;
        }
    }
    if (record.height > 0) {
        const double ratio = static_cast<double>(record.width) / static_cast<double>(record.height);
        double best = std::numeric_limits<double>::infinity();
        const AspectRatio* chosen = nullptr;
        for (const auto& r : policy.ratios) {
            const double deviation = std::abs(ratio - static_cast<double>(r.w) / static_cast<double>(r.h));
            if (deviation < best) {
                best = deviation;
                chosen = &r;
            }
        }
        if (chosen && best <= policy.ratio_tolerance) key.aspect_class = chosen->label;
    }
    return key;
}

std::map<BucketKey, std::vector<std::string>> bucket_assets(const std::vector<AssetRecord>& records,
                                                            const BucketPolicy& policy) {
    std::map<BucketKey, std::vector<std::string>> out;
    for (const auto& r : records) out[bucket_of(r, policy)].push_back(r.id);
    return out;
}

std::map<std::string, std::vector<std::string>> DedupResult::clusters() const {
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& d : dropped) out[d.kept_by].push_back(d.id);
    return out;
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0, na = 0, nb = 0;
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0 || nb == 0) return 0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

namespace {

DedupResult dedup_keyed(std::vector<std::pair<std::string, std::string>> items,  // (id, embedding key)
                        const metrics::FeatureSet& embeddings, double threshold) {
    if (!(threshold > 0 && threshold <= 1)) {
        throw Error(ErrorCode::InvalidArgument, "dedup threshold must lie in (0, 1]");
    }
    std::unordered_map<std::string, const std::vector<double>*> index;
    for (std::size_t i = 0; i < embeddings.ids.size(); ++i) index.emplace(embeddings.ids[i], &embeddings.vectors[i]);

    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end(),
                            [](const auto& x, const auto& y) { return x.first == y.first; }),
                items.end());

    std::vector<const std::vector<double>*> vectors;
    for (const auto& [id, key] : items) {
        auto it = index.find(key);
        if (it == index.end()) throw Error(ErrorCode::MissingEmbedding, "no embedding for '" + id + "'", {id});
        vectors.push_back(it->second);
    }

    DedupResult result;
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < items.size(); ++i) {
        std::optional<DedupDrop> drop;
        for (std::size_t k : kept) {
            const double sim = cosine_similarity(*vectors[i], *vectors[k]);
            if (sim >= threshold) {
                drop = DedupDrop{items[i].first, items[k].first, sim};
                break;
            }
        }
        if (drop) {
            result.dropped.push_back(*drop);
        } else {
            kept.push_back(i);
            result.kept.push_back(items[i].first);
        }
    }
    return result;
}

}  // namespace

DedupResult dedup(std::vector<std::string> ids, const metrics::FeatureSet& embeddings, double threshold) {
    std::vector<std::pair<std::string, std::string>> items;
    for (auto& id : ids) items.emplace_back(id, id);
    return dedup_keyed(std::move(items), embeddings, threshold);
}

DedupResult dedup_records(const std::vector<AssetRecord>& records, const metrics::FeatureSet& embeddings,
                          double threshold, const std::optional<BucketPolicy>& within_buckets) {
    std::map<BucketKey, std::vector<std::pair<std::string, std::string>>> groups;
    for (const auto& r : records) {
        BucketKey key = within_buckets ? bucket_of(r, *within_buckets) : BucketKey{};
        groups[key].emplace_back(r.id, r.embedding_id.value_or(r.id));
    }
    DedupResult merged;
    for (auto& [key, items] : groups) {
        DedupResult part = dedup_keyed(std::move(items), embeddings, threshold);
        merged.kept.insert(merged.kept.end(), part.kept.begin(), part.kept.end());
        merged.dropped.insert(merged.dropped.end(), part.dropped.begin(), part.dropped.end());
    }
    std::sort(merged.kept.begin(), merged.kept.end());
    std::stable_sort(merged.dropped.begin(), merged.dropped.end(),
                     [](const DedupDrop& a, const DedupDrop& b) { return a.id < b.id; });
    return merged;
}

FilterResult aesthetic_filter(const std::vector<AssetRecord>& records, double min_score) {
    FilterResult out;
    for (const auto& r : records) {
        if (!r.aesthetic_score) out.missing_score.push_back(r.id);
        else if (*r.aesthetic_score >= min_score) out.kept.push_back(r.id);
    }
    return out;
}

const std::string& PromptTriplet::at(DetailLevel level) const {
    switch (level) {
        case DetailLevel::Basic: return basic;
        case DetailLevel::Medium: return medium;
        case DetailLevel::Detailed: break;
    }
    return detailed;
}

std::pair<DetailLevel, std::string> sample_prompt(const PromptTriplet& triplet, Rng& rng) {
    static constexpr DetailLevel levels[] = {DetailLevel::Basic, DetailLevel::Medium, DetailLevel::Detailed};
    const DetailLevel level = levels[rng.below(3)];
    return {level, triplet.at(level)};
}

}  // namespace posterforge::datapipe
