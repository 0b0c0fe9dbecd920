// SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace s2m {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Keys outside any section land in the section named "".
struct IniSection {
  std::string name;
  KeyValues entries;
};

/// Parses INI text; duplicate keys and malformed lines throw ConfigError.
std::vector<IniSection> read_ini(std::istream& is);
std::vector<IniSection> read_ini_file(const std::filesystem::path& path);

std::size_t parse_count(std::string_view key, std::string_view value);
std::uint64_t parse_u64(std::string_view key, std::string_view value);
double parse_real(std::string_view key, std::string_view value);
/// on/off, true/false, yes/no, 1/0.
bool parse_flag(std::string_view key, std::string_view value);

/// 64-bit FNV-1a; stable across platforms, used for config digests.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

}  // namespace s2m
