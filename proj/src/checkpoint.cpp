// SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
//
// SPDX-License-Identifier: Apache-2.0

#include "s2m/checkpoint.hpp"

#include <bit>
#include <fstream>
#include <map>
#include <sstream>

#include "s2m/error.hpp"

namespace s2m {
namespace {

constexpr std::string_view kMagic = "s2mckpt1";

void put_values(std::ostream& os, std::span<const double> values) {
  std::vector<char> bytes(values.size() * 8);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto bits = std::bit_cast<std::uint64_t>(values[i]);
    for (int k = 0; k < 8; ++k) bytes[i * 8 + k] = static_cast<char>((bits >> (8 * k)) & 0xffu);
  }
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void get_values(std::istream& is, std::span<double> values) {
  std::vector<unsigned char> bytes(values.size() * 8);
  if (!is.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()))) {
    throw DataError("checkpoint truncated");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint64_t bits = 0;
    for (int k = 7; k >= 0; --k) bits = (bits << 8) | bytes[i * 8 + k];
    values[i] = std::bit_cast<double>(bits);
  }
}

}  // namespace

void write_checkpoint(std::ostream& os, const CheckpointHeader& header,
                      std::span<const Parameter* const> params) {
  os << kMagic << ' ' << header.config_digest << ' ' << header.step_count << ' ' << params.size()
     << '\n';
  for (const Parameter* p : params) {
    os << p->name << ' ' << p->value.rank();
    for (std::size_t d : p->value.shape()) os << ' ' << d;
    os << '\n';
    put_values(os, p->value.data());
  }
}

void save_checkpoint(const std::filesystem::path& path, const CheckpointHeader& header,
                     std::span<const Parameter* const> params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint " + path.string());
  write_checkpoint(out, header, params);
  if (!out) throw DataError("failed writing checkpoint " + path.string());
}

CheckpointHeader read_checkpoint(std::istream& is, std::span<Parameter* const> params) {
  std::string line;
  if (!std::getline(is, line)) throw DataError("checkpoint: missing header");
  std::istringstream hs(line);
  std::string magic;
  CheckpointHeader header;
  std::size_t count = 0;
  if (!(hs >> magic >> header.config_digest >> header.step_count >> count) || magic != kMagic) {
    throw DataError("checkpoint: bad header '" + line + "'");
  }
  std::map<std::string, Parameter*, std::less<>> by_name;
  for (Parameter* p : params) by_name.emplace(p->name, p);
  if (count != by_name.size()) {
    throw DataError("checkpoint holds " + std::to_string(count) + " parameters, model has " +
                    std::to_string(by_name.size()));
  }
  for (std::size_t k = 0; k < count; ++k) {
    if (!std::getline(is, line)) throw DataError("checkpoint truncated");
    std::istringstream ps(line);
    std::string name;
    std::size_t rank = 0;
    ps >> name >> rank;
    Shape shape(rank);
    for (auto& d : shape) ps >> d;
    if (!ps) throw DataError("checkpoint: bad parameter line '" + line + "'");
    auto it = by_name.find(name);
    if (it == by_name.end()) throw DataError("checkpoint: unknown parameter " + name);
    Parameter* p = it->second;
    if (p->value.shape() != shape) {
      throw DataError("checkpoint: parameter " + name + " has shape " + shape_string(shape) +
                      ", model expects " + shape_string(p->value.shape()));
    }
    get_values(is, p->value.data());
    p->step_count = header.step_count;
    by_name.erase(it);
  }
  return header;
}

CheckpointHeader load_checkpoint(const std::filesystem::path& path,
                                 std::span<Parameter* const> params) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  return read_checkpoint(in, params);
}

}  // namespace s2m
