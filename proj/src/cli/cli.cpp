#include "posterforge/cli/cli.hpp"

#include "posterforge/backends/backends.hpp"
#include "posterforge/core/digest.hpp"
#include "posterforge/core/fs.hpp"
#include "posterforge/core/unicode.hpp"
#include "posterforge/datapipe/datapipe.hpp"
#include "posterforge/metrics/frechet.hpp"
#include "posterforge/metrics/poster.hpp"
#include "posterforge/metrics/text.hpp"
#include "posterforge/pipeline/pipeline.hpp"
#include "posterforge/service/service.hpp"
#include "posterforge/typography/edit.hpp"
#include "posterforge/typography/html.hpp"
#include "posterforge/typography/png.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>
#include <unistd.h>

namespace posterforge::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

/// A command line that parsed but makes no sense (conflicting flags, bad values).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Settings that may come from POSTERFORGE_CONFIG; flags win over the file.
struct Settings {
    std::optional<backends::BackendConfig> backends;
    std::optional<std::uint64_t> seed;
    std::string store = "posterforge-store";
    std::string listen = "127.0.0.1:8080";
    std::string static_dir;
    bool mock = false;
};

Settings load_settings() {
    Settings s;
    const char* path = std::getenv("POSTERFORGE_CONFIG");
    if (!path || !*path) return s;
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw UsageError(std::string("POSTERFORGE_CONFIG is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw UsageError("POSTERFORGE_CONFIG must hold a JSON object");
    try {
        if (j.contains("backends")) s.backends = backends::backend_config_from_json(j.at("backends"));
        if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("store")) s.store = j.at("store").get<std::string>();
        if (j.contains("listen")) s.listen = j.at("listen").get<std::string>();
        if (j.contains("static_dir")) s.static_dir = j.at("static_dir").get<std::string>();
        if (j.contains("mock")) s.mock = j.at("mock").get<bool>();
    } catch (const json::exception& e) {
        throw UsageError(std::string("POSTERFORGE_CONFIG: ") + e.what());
    }
    return s;
}

/// "@path" reads the file, anything else is the literal value.
std::string literal_or_file(const std::string& value) {
    if (!value.empty() && value[0] == '@') return read_file(value.substr(1));
    return value;
}

Rational parse_scale(const std::string& text) {
    auto k = Rational::parse(text);
    if (!k || !k->is_positive()) throw UsageError("scale must be a positive number such as 2, 0.5 or 1/3, got '" + text + "'");
    return *k;
}

backends::BackendConfig backend_config(const Settings& settings, bool mock, const std::string& config_path,
                                       std::optional<std::uint64_t> seed) {
    if (!config_path.empty()) {
        json j;
        try {
            j = json::parse(read_file(config_path));
        } catch (const json::exception& e) {
            throw UsageError("--config is not valid JSON: " + std::string(e.what()));
        }
        return backends::backend_config_from_json(j.contains("backends") ? j.at("backends") : j);
    }
    if (!mock && settings.backends) return *settings.backends;
    return backends::BackendConfig::all_mock(seed.value_or(0));
}

std::pair<std::string, int> split_listen(const std::string& listen) {
    const auto colon = listen.rfind(':');
    if (colon == std::string::npos) throw UsageError("--listen expects host:port, got '" + listen + "'");
    int port = 0;
    try {
        std::size_t used = 0;
        port = std::stoi(listen.substr(colon + 1), &used);
        if (used != listen.size() - colon - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw UsageError("--listen port must be an integer, got '" + listen + "'");
    }
    if (port < 0 || port > 65535) throw UsageError("--listen port out of range");
    return {listen.substr(0, colon), port};
}

fs::path fresh_temp_dir(const fs::path& near) {
    static std::uint64_t counter = 0;
    for (;;) {
        fs::path dir = near / (".posterforge-stage-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        if (fs::create_directories(dir)) return dir;
    }
}

/// Copies the files of a staged job directory over `dest`, dropping renders
/// the staged job no longer has.
void publish_job_dir(const fs::path& staged, const fs::path& dest) {
    fs::create_directories(dest);
    if (!fs::exists(staged / "renders")) fs::remove_all(dest / "renders");
    fs::copy(staged, dest, fs::copy_options::recursive | fs::copy_options::overwrite_existing);
}

json job_summary(const pipeline::Job& job, const fs::path& dir) {
    json j = {{"id", job.id}, {"state", std::string(pipeline::to_string(job.state.kind))}, {"version", job.version},
              {"dir", dir.string()}};
    if (job.state.kind == pipeline::StateKind::Failed) {
        j["failed_stage"] = job.state.failed_stage;
        j["reason"] = job.state.reason;
    }
    if (job.poster) j["poster_sha256"] = sha256_hex(typography::serialize_poster(*job.poster) + "\n");
    json renders = json::array();
    for (const auto& r : job.renders) {
        renders.push_back({{"scale", r.scale.to_string()}, {"path", r.path}, {"sha256", r.digest},
                           {"width", r.width}, {"height", r.height}});
    }
    j["renders"] = renders;
    return j;
}

void print_human(std::ostream& out, const json& j, const std::string& indent = "") {
    if (!j.is_object()) {
        out << indent << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
        return;
    }
    for (const auto& [key, value] : j.items()) {
        if (value.is_object() && !value.empty()) {
            out << indent << key << ":\n";
            print_human(out, value, indent + "  ");
        } else if (value.is_string()) {
            out << indent << key << ": " << value.get<std::string>() << '\n';
        } else {
            out << indent << key << ": " << value.dump() << '\n';
        }
    }
}

/// Document text for the text metric: a JSON array of strings, a PosterHTML
/// file (its extracted text), or the file taken as one string minus its
/// final line break.
std::vector<std::string> load_text_items(const std::string& path) {
    const std::string text = read_file(path);
    const std::string_view trimmed = unicode::trim(text);
    if (!trimmed.empty() && trimmed.front() == '[') {
        try {
            return json::parse(trimmed).get<std::vector<std::string>>();
        } catch (const json::exception&) {
        }
    }
    if (!trimmed.empty() && trimmed.front() == '<') {
        try {
            return typography::extract_text(typography::parse_poster_html(text, ParseMode::Lenient));
        } catch (const Error&) {
        }
    }
    std::string_view body = text;
    while (!body.empty() && (body.back() == '\n' || body.back() == '\r')) body.remove_suffix(1);
    return {std::string(body)};
}

/// Images a poster file may reference: <dir>/assets/*.png by file stem, plus
/// <dir>/background.png under the page background id when that id is missing.
typography::ImageMap images_near(const fs::path& poster_path, const typography::PosterDocument& doc) {
    typography::ImageMap images;
    const fs::path dir = poster_path.has_parent_path() ? poster_path.parent_path() : fs::path(".");
    if (fs::is_directory(dir / "assets")) {
        for (const auto& entry : fs::directory_iterator(dir / "assets")) {
            if (entry.path().extension() == ".png") {
                images.insert(entry.path().stem().string(), typography::decode_png(read_file(entry.path())));
            }
        }
    }
    if (const auto* bg = std::get_if<typography::ImageBackground>(&doc.background)) {
        if (!images.find(bg->image_id) && fs::exists(dir / "background.png")) {
            images.insert(bg->image_id, typography::decode_png(read_file(dir / "background.png")));
        }
    }
    return images;
}

datapipe::Manifest subset_manifest(const datapipe::Manifest& m, const std::vector<std::string>& keep) {
    const std::set<std::string> ids(keep.begin(), keep.end());
    datapipe::Manifest out = m;
    out.records.clear();
    out.prompts.clear();
    for (const auto& r : m.records) {
        if (ids.count(r.id)) out.records.push_back(r);
    }
    for (const auto& [id, p] : m.prompts) {
        if (ids.count(id)) out.prompts.emplace(id, p);
    }
    return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"posterforge: editable poster generation, rendering, evaluation and dataset curation", "posterforge"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "Print results as JSON on stdout");

    // generate
    auto* gen = app.add_subcommand("generate", "Run a requirement through every stage into a job directory");
    std::string requirement, locale = "zh", detail, canonical_key, gen_config, gen_out;
    bool gen_mock = false;
    std::optional<std::uint64_t> gen_seed;
    std::vector<std::string> gen_scales;
    gen->add_option("--requirement", requirement, "Requirement text, or @file")->required();
    gen->add_option("--locale", locale, "BCP-47 locale of the requirement")->capture_default_str();
    gen->add_option("--detail", detail, "basic | medium | detailed");
    gen->add_option("--canonical-key", canonical_key, "Shared key of rewritings of one request");
    auto* gen_mock_flag = gen->add_flag("--mock", gen_mock, "Use the deterministic mock backends");
    gen->add_option("--config", gen_config, "Backend config JSON file")->excludes(gen_mock_flag);
    gen->add_option("--seed", gen_seed, "Seed for the background stage and mock backends");
    gen->add_option("--scale", gen_scales, "Extra render scales besides 1");
    gen->add_option("--out", gen_out, "Job directory to write")->required();

    // render
    auto* ren = app.add_subcommand("render", "Rasterize a PosterHTML file to PNG");
    std::string ren_poster, ren_scale = "1", ren_out;
    ren->add_option("--poster", ren_poster, "PosterHTML file")->required();
    ren->add_option("--scale", ren_scale, "Device pixels per document pixel (2, 0.5, 1/3)")->capture_default_str();
    ren->add_option("--out", ren_out, "PNG file to write")->required();

    // edit
    auto* ed = app.add_subcommand("edit", "Apply edit operations to a job directory");
    std::string ed_job;
    std::vector<std::string> ed_ops;
    ed->add_option("--job", ed_job, "Job directory written by generate")->required();
    ed->add_option("--op", ed_ops, "Edit op JSON (object or array), or @file; repeatable")->required()->allow_extra_args(false);

    // eval
    auto* ev = app.add_subcommand("eval", "Evaluation metrics");
    ev->require_subcommand(1);
    auto* ev_text = ev->add_subcommand("text", "Character error rate, precision, recall and F1");
    std::string gt, pred;
    ev_text->add_option("--gt", gt, "Ground truth: text, JSON string array or PosterHTML")->required();
    ev_text->add_option("--pred", pred, "Prediction in the same forms")->required();
    auto* ev_layout = ev->add_subcommand("layout", "Element overlap of a poster");
    std::string layout_poster;
    ev_layout->add_option("--poster", layout_poster, "PosterHTML file")->required();
    auto* ev_fid = ev->add_subcommand("fid", "Frechet distance between two feature sets");
    std::string fid_a, fid_b;
    ev_fid->add_option("--a", fid_a, "Feature file (JSON lines)")->required();
    ev_fid->add_option("--b", fid_b, "Feature file (JSON lines)")->required();

    // dataset
    auto* ds = app.add_subcommand("dataset", "Curation over an asset manifest");
    ds->require_subcommand(1);
    std::string manifest_path, write_path;
    auto add_manifest = [&](CLI::App* sub) {
        sub->add_option("--manifest", manifest_path, "Asset manifest JSON")->required();
    };
    auto* ds_verify = ds->add_subcommand("verify", "Check minimum size and format");
    add_manifest(ds_verify);
    datapipe::VerifyPolicy verify_policy;
    ds_verify->add_option("--min-width", verify_policy.min_width)->capture_default_str();
    ds_verify->add_option("--min-height", verify_policy.min_height)->capture_default_str();
    ds_verify->add_option("--formats", verify_policy.allowed_formats)->delimiter(',');
    ds_verify->add_option("--write", write_path, "Write a manifest of the accepted records");
    auto* ds_bucket = ds->add_subcommand("bucket", "Group by resolution tier and aspect class");
    add_manifest(ds_bucket);
    datapipe::BucketPolicy bucket_policy;
    ds_bucket->add_option("--tolerance", bucket_policy.ratio_tolerance)->capture_default_str();
    auto* ds_dedup = ds->add_subcommand("dedup", "Greedy near-duplicate removal by embedding similarity");
    add_manifest(ds_dedup);
    std::string embeddings;
    double threshold = datapipe::kDefaultDedupThreshold;
    bool within_buckets = false;
    ds_dedup->add_option("--embeddings", embeddings, "Feature file (JSON lines)")->required();
    ds_dedup->add_option("--threshold", threshold)->capture_default_str();
    ds_dedup->add_flag("--within-buckets", within_buckets, "Deduplicate inside each bucket only");
    ds_dedup->add_option("--write", write_path, "Write a manifest of the kept records");
    auto* ds_filter = ds->add_subcommand("filter", "Keep records at or above an aesthetic score");
    add_manifest(ds_filter);
    double min_score = 0;
    ds_filter->add_option("--min-score", min_score)->required();
    ds_filter->add_option("--write", write_path, "Write a manifest of the kept records");
    auto* ds_sample = ds->add_subcommand("sample", "Draw training prompts uniformly over detail levels");
    add_manifest(ds_sample);
    std::string sample_id;
    std::size_t sample_count = 1;
    std::uint64_t sample_seed = 0;
    ds_sample->add_option("--id", sample_id, "Record id (all records with prompts when absent)");
    ds_sample->add_option("--count", sample_count, "Draws per record")->capture_default_str();
    ds_sample->add_option("--seed", sample_seed)->capture_default_str();

    // serve
    auto* srv = app.add_subcommand("serve", "HTTP service over a job store");
    std::string listen, store, static_dir, srv_config;
    bool srv_mock = false;
    std::optional<std::uint64_t> srv_seed;
    srv->add_option("--listen", listen, "host:port (default 127.0.0.1:8080)");
    srv->add_option("--store", store, "Job store root (default ./posterforge-store)");
    srv->add_option("--static", static_dir, "Studio bundle served under /app");
    auto* srv_mock_flag = srv->add_flag("--mock", srv_mock, "Use the deterministic mock backends");
    srv->add_option("--config", srv_config, "Backend config JSON file")->excludes(srv_mock_flag);
    srv->add_option("--seed", srv_seed, "Seed for job seeds and mock backends");

    std::vector<std::string> argv_rest(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(argv_rest.begin(), argv_rest.end());
    try {
        app.parse(argv_rest);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help("", CLI::AppFormatMode::All);
        return kExitUsage;
    }

    auto emit = [&](const json& result) {
        if (as_json) {
            out << result.dump() << '\n';
        } else {
            print_human(out, result);
        }
    };

    try {
        const Settings settings = load_settings();

        if (gen->parsed()) {
            UserRequirement req;
            req.text = literal_or_file(requirement);
            req.locale = locale;
            if (!detail.empty()) {
                req.detail_level = detail_level_from_string(detail);
                if (!req.detail_level) throw UsageError("--detail must be basic, medium or detailed");
            }
            if (!canonical_key.empty()) req.canonical_key = canonical_key;
            const auto seed = gen_seed ? gen_seed : settings.seed;
            std::vector<Rational> scales;
            for (const auto& s : gen_scales) scales.push_back(parse_scale(s));

            auto backends = std::make_shared<const backends::Backends>(
                backend_config(settings, gen_mock || settings.mock, gen_config, seed));
            const fs::path out_dir = gen_out;
            fs::create_directories(out_dir);
            const fs::path stage = fresh_temp_dir(out_dir);
            struct Cleanup {
                fs::path dir;
                ~Cleanup() {
                    std::error_code ec;
                    fs::remove_all(dir, ec);
                }
            } cleanup{stage};

            pipeline::Pipeline pipe(pipeline::JobStore(stage), backends, pipeline::PipelineOptions{seed});
            pipeline::Job job = pipe.create_job(req);
            try {
                while (job.state.kind != pipeline::StateKind::Rendered) job = pipe.advance(job.id);
                for (const auto& k : scales) job = pipe.render(job.id, k).job;
            } catch (const Error&) {
                publish_job_dir(pipe.store().job_dir(job.id), out_dir);
                throw;
            }
            publish_job_dir(pipe.store().job_dir(job.id), out_dir);
            err << "generated job " << job.id << " into " << out_dir.string() << '\n';
            emit(job_summary(job, out_dir));
            return kExitOk;
        }

        if (ren->parsed()) {
            const Rational k = parse_scale(ren_scale);
            const auto doc = typography::parse_poster_html(read_file(ren_poster), ParseMode::Strict);
            const auto images = images_near(ren_poster, doc);
            const auto raster = typography::rasterize(typography::scale_document(doc, k), typography::SyntheticGlyphs{},
                                                      Rational(1), images);
            const std::string png = typography::encode_png(raster);
            write_file_atomic(ren_out, png);
            emit({{"out", ren_out}, {"scale", k.to_string()}, {"width", raster.width}, {"height", raster.height},
                  {"sha256", sha256_hex(png)}});
            return kExitOk;
        }

        if (ed->parsed()) {
            std::vector<typography::EditOp> edits;
            for (const auto& op : ed_ops) {
                json j;
                try {
                    j = json::parse(literal_or_file(op));
                } catch (const json::exception& e) {
                    throw UsageError("--op is not valid JSON: " + std::string(e.what()));
                }
                if (j.is_array()) {
                    for (const auto& e : j) edits.push_back(typography::edit_from_json(e));
                } else {
                    edits.push_back(typography::edit_from_json(j));
                }
            }
            const fs::path job_dir = ed_job;
            const pipeline::Job loaded = pipeline::JobStore::load_at(job_dir);
            const fs::path stage = fresh_temp_dir(job_dir.has_parent_path() ? job_dir.parent_path() : fs::path("."));
            struct Cleanup {
                fs::path dir;
                ~Cleanup() {
                    std::error_code ec;
                    fs::remove_all(dir, ec);
                }
            } cleanup{stage};
            fs::copy(job_dir, stage / loaded.id, fs::copy_options::recursive);

            auto backends = std::make_shared<const backends::Backends>(backends::BackendConfig::all_mock());
            pipeline::Pipeline pipe(pipeline::JobStore(stage), backends);
            const pipeline::Job job = pipe.edit_layout(loaded.id, edits, loaded.version);
            publish_job_dir(stage / loaded.id, job_dir);
            emit(job_summary(job, job_dir));
            return kExitOk;
        }

        if (ev_text->parsed()) {
            emit(metrics::to_json(metrics::score_text(load_text_items(gt), load_text_items(pred))));
            return kExitOk;
        }
        if (ev_layout->parsed()) {
            emit(metrics::poster_overlap_json(typography::parse_poster_html(read_file(layout_poster), ParseMode::Lenient)));
            return kExitOk;
        }
        if (ev_fid->parsed()) {
            emit(metrics::to_json(metrics::frechet_distance(metrics::read_feature_set(fs::path(fid_a)),
                                                            metrics::read_feature_set(fs::path(fid_b)))));
            return kExitOk;
        }

        if (ds->parsed()) {
            const datapipe::Manifest manifest = datapipe::read_manifest(manifest_path);
            auto maybe_write = [&](const std::vector<std::string>& kept) {
                if (!write_path.empty()) datapipe::write_manifest(subset_manifest(manifest, kept), write_path);
            };
            if (ds_verify->parsed()) {
                json accepted = json::array(), rejected = json::array();
                std::vector<std::string> kept;
                for (const auto& r : manifest.records) {
                    const auto v = datapipe::verify_asset(r, verify_policy);
                    if (v.accepted) {
                        accepted.push_back(r.id);
                        kept.push_back(r.id);
                    } else {
                        rejected.push_back({{"id", r.id}, {"reasons", v.reasons}});
                    }
                }
                maybe_write(kept);
                emit({{"accepted", accepted}, {"rejected", rejected}});
            } else if (ds_bucket->parsed()) {
                json buckets = json::object();
                for (const auto& [key, ids] : datapipe::bucket_assets(manifest.records, bucket_policy)) {
                    buckets[key.resolution_tier + "/" + key.aspect_class] = ids;
                }
                emit({{"buckets", buckets}});
            } else if (ds_dedup->parsed()) {
                const auto features = metrics::read_feature_set(fs::path(embeddings));
                const auto result = datapipe::dedup_records(
                    manifest.records, features, threshold,
                    within_buckets ? std::optional<datapipe::BucketPolicy>(datapipe::BucketPolicy{}) : std::nullopt);
                json dropped = json::array();
                for (const auto& d : result.dropped) {
                    dropped.push_back({{"id", d.id}, {"kept_by", d.kept_by}, {"similarity", d.similarity}});
                }
                maybe_write(result.kept);
                emit({{"kept", result.kept}, {"dropped", dropped}});
            } else if (ds_filter->parsed()) {
                const auto result = datapipe::aesthetic_filter(manifest.records, min_score);
                maybe_write(result.kept);
                emit({{"kept", result.kept}, {"missing_score", result.missing_score}});
            } else if (ds_sample->parsed()) {
                Rng rng(sample_seed);
                json samples = json::array();
                std::vector<std::string> ids;
                if (!sample_id.empty()) {
                    if (!manifest.prompts.count(sample_id)) {
                        throw Error(ErrorCode::InvalidArgument, "no prompts for record '" + sample_id + "'", {sample_id});
                    }
                    ids.push_back(sample_id);
                } else {
                    for (const auto& [id, triplet] : manifest.prompts) ids.push_back(id);
                }
                for (const auto& id : ids) {
                    for (std::size_t i = 0; i < sample_count; ++i) {
                        const auto [level, prompt] = datapipe::sample_prompt(manifest.prompts.at(id), rng);
                        samples.push_back({{"id", id}, {"level", std::string(to_string(level))}, {"prompt", prompt}});
                    }
                }
                emit({{"samples", samples}});
            }
            return kExitOk;
        }

        if (srv->parsed()) {
            const auto [host, port] = split_listen(listen.empty() ? settings.listen : listen);
            const auto seed = srv_seed ? srv_seed : settings.seed;
            auto backends = std::make_shared<const backends::Backends>(
                backend_config(settings, srv_mock || settings.mock, srv_config, seed));
            const fs::path root = store.empty() ? fs::path(settings.store) : fs::path(store);
            fs::create_directories(root);
            pipeline::Pipeline pipe(pipeline::JobStore(root), backends, pipeline::PipelineOptions{seed});
            service::ServiceOptions options;
            const std::string bundle = static_dir.empty() ? settings.static_dir : static_dir;
            if (!bundle.empty()) options.static_dir = bundle;
            service::Service svc(pipe, options);
            service::serve(svc, host, port);
            return kExitOk;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << app.help("", CLI::AppFormatMode::All);
        return kExitUsage;
    } catch (const Error& e) {
        if (as_json) {
            out << json{{"error", {{"code", std::string(to_string(e.code()))}, {"message", e.what()}, {"details", e.details()}}}}.dump()
                << '\n';
        }
        err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
        return kExitDomainError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomainError;
    }
    return kExitUsage;
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args(argv, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace posterforge::cli
