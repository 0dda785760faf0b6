#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace posterforge {

/// Whole-file read. Throws Error(Storage) when the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file, flushes it to disk and renames it over
/// `path`, so readers see either the old or the new content, never a mix.
/// Throws Error(Storage).
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace posterforge
