// SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
//
// SPDX-License-Identifier: Apache-2.0

#include "s2m/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cstdio>
#include <fstream>

#include "s2m/error.hpp"

namespace s2m {

std::vector<IniSection> read_ini(std::istream& is) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("invalid INI: ") + e.what());
  }
  std::vector<IniSection> out;
  IniSection top{"", {}};
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      top.entries.emplace_back(name, node.data());
      continue;
    }
    IniSection section{name, {}};
    for (const auto& [key, leaf] : node) section.entries.emplace_back(key, leaf.data());
    out.push_back(std::move(section));
  }
  if (!top.entries.empty()) out.insert(out.begin(), std::move(top));
  return out;
}

std::vector<IniSection> read_ini_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return read_ini(in);
}

namespace {

template <class T>
T parse_integer(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("key '" + std::string(key) + "': expected a non-negative integer, got '" +
                      std::string(value) + "'");
  }
  return out;
}

}  // namespace

std::size_t parse_count(std::string_view key, std::string_view value) {
  return parse_integer<std::size_t>(key, value);
}

std::uint64_t parse_u64(std::string_view key, std::string_view value) {
  return parse_integer<std::uint64_t>(key, value);
}

double parse_real(std::string_view key, std::string_view value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(std::string(value), &used);
    if (used == value.size()) return v;
  } catch (const std::logic_error&) {
  }
  throw ConfigError("key '" + std::string(key) + "': expected a number, got '" +
                    std::string(value) + "'");
}

bool parse_flag(std::string_view key, std::string_view value) {
  if (value == "on" || value == "true" || value == "yes" || value == "1") return true;
  if (value == "off" || value == "false" || value == "no" || value == "0") return false;
  throw ConfigError("key '" + std::string(key) + "': expected on/off, got '" +
                    std::string(value) + "'");
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace s2m
