#pragma once

#include "posterforge/pipeline/job.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace posterforge::pipeline {

/// Directory-per-job persistence:
///
///   {root}/{id}/manifest.json     the job (commit point, written last)
///   {root}/{id}/blueprint.json    canonical blueprint
///   {root}/{id}/background.png    current background
///   {root}/{id}/poster.html       current PosterHTML
///   {root}/{id}/renders/scale-{s}.png
///   {root}/{id}/assets/{image-id}.png  every image a poster may reference
///
/// Every file is replaced atomically (temp file + rename).
class JobStore {
public:
    explicit JobStore(std::filesystem::path root);

    const std::filesystem::path& root() const { return root_; }
    std::filesystem::path job_dir(const std::string& id) const;

    void save(const Job& job) const;
    /// Throws Error(JobNotFound) for an unknown id, Error(Storage) for a corrupt manifest.
    Job load(const std::string& id) const;
    bool exists(const std::string& id) const;

    /// Jobs ordered by creation time then id; pages are 1-based.
    std::vector<Job> list(std::size_t page, std::size_t page_size = 20) const;
    std::size_t count() const;

    void put_asset(const std::string& job_id, const std::string& image_id, const std::string& png) const;
    /// Throws Error(MissingImageAsset).
    std::string get_asset(const std::string& job_id, const std::string& image_id) const;
    void put_background(const std::string& job_id, const std::string& png) const;

    /// Writes renders/scale-{label}.png and returns the relative path.
    std::string put_render(const std::string& job_id, const Rational& scale, const std::string& png) const;
    void remove_renders(const std::string& job_id) const;

    /// Direct-directory variants used by the CLI, which keeps one job per --out directory.
    static void save_at(const std::filesystem::path& dir, const Job& job);
    static Job load_at(const std::filesystem::path& dir);

private:
    std::filesystem::path root_;
};

}  // namespace posterforge::pipeline
