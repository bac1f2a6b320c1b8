#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace levelblend {

/// Whole-file helpers that raise Error naming the path on failure.
std::string read_file(const std::filesystem::path& file);
/// Creates missing parent directories.
void write_file(const std::filesystem::path& file, std::string_view contents);

}  // namespace levelblend
