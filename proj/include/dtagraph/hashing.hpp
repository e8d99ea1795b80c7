#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace dtagraph {

/// Lower-case hex SHA-256 digest.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ull);

/// Reads a whole file; throws IoError.
std::string read_file(const std::filesystem::path& path);

/// Writes via a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace dtagraph
