#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace pulse {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// 64-bit FNV-1a. Stable across platforms; used for transcript digests and
/// output-tree comparison.
std::uint64_t fnv1a64(std::string_view data);
std::string fnv1a64_hex(std::string_view data);

/// Relative path -> content hash for every regular file under root.
std::map<std::string, std::uint64_t> hash_tree(const std::filesystem::path& root);

}  // namespace pulse
