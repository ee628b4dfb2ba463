#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace shopscope {

using Timestamp = std::chrono::sys_seconds;

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

/// ISO-8601 UTC, e.g. 2020-03-14T09:30:00Z.
std::string format_utc(Timestamp t);
std::optional<Timestamp> parse_utc(std::string_view text);
Timestamp utc_now();

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temp file and renames it over `path`.
void atomic_write(const std::filesystem::path& path, std::string_view content);

std::string trim(std::string_view s);
std::string ascii_lower(std::string_view s);

/// SplitMix64 finalizer; used to derive independent stream seeds from a master seed.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream);

/// Portable draws on top of a 64-bit engine; the libstdc++ distributions are
/// implementation-defined, these are not.
template <typename Engine>
double uniform01(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

template <typename Engine>
std::uint64_t uniform_below(Engine& eng, std::uint64_t n) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(eng()) * n) >> 64);
}

}  // namespace shopscope
