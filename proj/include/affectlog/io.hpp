#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace affectlog {

// Whole-file read. Throws std::runtime_error naming the path on failure.
std::string read_text_file(const std::filesystem::path& path);

// Writes to a temp file in the target's directory, then renames over the
// target, so readers never observe a half-written file.
void atomic_write_file(const std::filesystem::path& path,
                       std::string_view content);

}  // namespace affectlog
