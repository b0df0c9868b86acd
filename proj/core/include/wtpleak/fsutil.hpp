#pragma once

#include <filesystem>
#include <string>

namespace wtpleak {

std::string read_file(const std::filesystem::path& path);

// Write-temp-then-rename so concurrent readers never observe partial files.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace wtpleak
