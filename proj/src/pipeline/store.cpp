#include "posterforge/pipeline/store.hpp"

#include "posterforge/core/error.hpp"
#include "posterforge/core/fs.hpp"
#include "posterforge/typography/html.hpp"
#include "posterforge/typography/css.hpp"

#include <algorithm>

namespace posterforge::pipeline {
namespace fs = std::filesystem;

namespace {

void check_id(const std::string& id) {
    // Ids become path components; refuse anything that could leave the root.
    const bool ok = !id.empty() && id != "." && id != ".." && id.find('/') == std::string::npos &&
                    id.find('\\') == std::string::npos && id.find('\0') == std::string::npos;
    if (!ok) throw Error(ErrorCode::JobNotFound, "invalid job id '" + id + "'", {id});
}

void check_image_id(const std::string& id) {
    const bool ok = !id.empty() && id != "." && id != ".." && id.find('/') == std::string::npos &&
                    id.find('\\') == std::string::npos && typography::css::is_valid_id(id);
    if (!ok) throw Error(ErrorCode::MissingImageAsset, "invalid image id '" + id + "'", {id});
}

}  // namespace

JobStore::JobStore(fs::path root) : root_(std::move(root)) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec) throw Error(ErrorCode::Storage, "cannot create store root " + root_.string() + ": " + ec.message());
}

fs::path JobStore::job_dir(const std::string& id) const {
    check_id(id);
    return root_ / id;
}

void JobStore::save_at(const fs::path& dir, const Job& job) {
    if (job.blueprint) write_file_atomic(dir / "blueprint.json", serialize_blueprint(*job.blueprint) + "\n");
    if (job.poster) write_file_atomic(dir / "poster.html", typography::serialize_poster(*job.poster) + "\n");
    // The manifest goes last: until it is renamed into place, readers see the previous job.
    write_file_atomic(dir / "manifest.json", job_to_json(job).dump(2) + "\n");
}

Job JobStore::load_at(const fs::path& dir) {
    const fs::path manifest = dir / "manifest.json";
    if (!fs::exists(manifest)) throw Error(ErrorCode::JobNotFound, "no job at " + dir.string(), {dir.string()});
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(manifest));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Storage, "corrupt manifest " + manifest.string() + ": " + e.what());
    }
    return job_from_json(j);
}

void JobStore::save(const Job& job) const { save_at(job_dir(job.id), job); }

Job JobStore::load(const std::string& id) const {
    Job job = load_at(job_dir(id));
    if (job.id != id) throw Error(ErrorCode::Storage, "manifest id mismatch for " + id);
    return job;
}

bool JobStore::exists(const std::string& id) const {
    try {
        return fs::exists(job_dir(id) / "manifest.json");
    } catch (const Error&) {
        return false;
    }
}

std::vector<Job> JobStore::list(std::size_t page, std::size_t page_size) const {
    std::vector<Job> jobs;
    for (const auto& entry : fs::directory_iterator(root_)) {
        if (!entry.is_directory() || !fs::exists(entry.path() / "manifest.json")) continue;
        jobs.push_back(load_at(entry.path()));
    }
    std::sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) {
        return a.created_ms != b.created_ms ? a.created_ms < b.created_ms : a.id < b.id;
    });
    if (page == 0 || page_size == 0) return {};
    const std::size_t start = (page - 1) * page_size;
    if (start >= jobs.size()) return {};
    const std::size_t end = std::min(jobs.size(), start + page_size);
    return {std::make_move_iterator(jobs.begin() + static_cast<std::ptrdiff_t>(start)),
            std::make_move_iterator(jobs.begin() + static_cast<std::ptrdiff_t>(end))};
}

std::size_t JobStore::count() const {
    std::size_t n = 0;
    for (const auto& entry : fs::directory_iterator(root_)) {
        if (entry.is_directory() && fs::exists(entry.path() / "manifest.json")) ++n;
    }
    return n;
}

void JobStore::put_asset(const std::string& job_id, const std::string& image_id, const std::string& png) const {
    check_image_id(image_id);
    const fs::path path = job_dir(job_id) / "assets" / (image_id + ".png");
    if (fs::exists(path)) return;  // content-addressed: same id, same bytes
    write_file_atomic(path, png);
}

std::string JobStore::get_asset(const std::string& job_id, const std::string& image_id) const {
    check_image_id(image_id);
    const fs::path path = job_dir(job_id) / "assets" / (image_id + ".png");
    if (!fs::exists(path)) throw Error(ErrorCode::MissingImageAsset, "missing image asset '" + image_id + "'", {image_id});
    return read_file(path);
}

void JobStore::put_background(const std::string& job_id, const std::string& png) const {
    write_file_atomic(job_dir(job_id) / "background.png", png);
}

std::string JobStore::put_render(const std::string& job_id, const Rational& scale, const std::string& png) const {
    const std::string relative = "renders/scale-" + scale_label(scale) + ".png";
    write_file_atomic(job_dir(job_id) / relative, png);
    return relative;
}

void JobStore::remove_renders(const std::string& job_id) const {
    std::error_code ec;
    fs::remove_all(job_dir(job_id) / "renders", ec);
}

}  // namespace posterforge::pipeline
