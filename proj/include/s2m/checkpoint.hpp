// SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "s2m/autograd.hpp"

namespace s2m {

/// Header line `s2mckpt1 <config digest> <step_count> <parameter count>`,
/// then per parameter a line `<name> <rank> <dims...>` followed by its
/// values as little-endian doubles.
struct CheckpointHeader {
  std::string config_digest;
  std::uint64_t step_count = 0;
};

void write_checkpoint(std::ostream& os, const CheckpointHeader& header,
                      std::span<const Parameter* const> params);
void save_checkpoint(const std::filesystem::path& path, const CheckpointHeader& header,
                     std::span<const Parameter* const> params);

/// Loads values into parameters matched by name and shape; every parameter
/// must be present. Returns the header. Throws DataError on mismatch.
CheckpointHeader read_checkpoint(std::istream& is, std::span<Parameter* const> params);
CheckpointHeader load_checkpoint(const std::filesystem::path& path,
                                 std::span<Parameter* const> params);

}  // namespace s2m
