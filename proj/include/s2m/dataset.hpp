// SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "s2m/text.hpp"

namespace s2m {

/// csv2: `label,text`; csv3: `label,title,description` (title and
/// description joined by one space); text: one unlabeled sample per line.
enum class DatasetFormat { kCsv2, kCsv3, kText };

std::string_view to_string(DatasetFormat format) noexcept;
DatasetFormat parse_dataset_format(std::string_view name);

struct DatasetSpec {
  std::string name = "custom";
  std::filesystem::path train_path;
  std::filesystem::path test_path;
  std::size_t classes = 2;
  std::size_t n = 49;
  std::size_t m = 18;
  DatasetFormat format = DatasetFormat::kCsv2;
};

/// Presets for ag_news, yelp_full and mr rooted at `data_dir/<name>/`
/// (`train.csv`, `test.csv`). Returns nullopt for other names.
std::optional<DatasetSpec> dataset_preset(std::string_view name,
                                          const std::filesystem::path& data_dir);

/// S2M_DATA_DIR if set, otherwise ./data.
std::filesystem::path default_data_dir();

struct LabeledSentence {
  std::size_t label = 0;  ///< 0-based
  TokenizedSentence sentence;
};

struct LoadedSplit {
  std::vector<LabeledSentence> samples;
  std::size_t malformed = 0;
  std::vector<std::string> malformed_examples;  ///< first few, for reporting
};

/// Reads one RFC 4180 record (quoted fields, doubled quotes, embedded
/// newlines). Returns false at end of input.
bool read_csv_record(std::istream& is, std::vector<std::string>& fields);

/// Parses a split. Labels are 1-based on disk; a label outside 1..classes
/// throws DataError, while rows with the wrong field count or a
/// non-numeric label are counted as malformed.
LoadedSplit load_split(std::istream& is, DatasetFormat format, std::size_t classes,
                       std::string_view source = "input");
LoadedSplit load_split(const std::filesystem::path& path, DatasetFormat format,
                       std::size_t classes);

/// Writes `label,"text"` rows with 1-based labels.
void write_csv2(std::ostream& os, std::span<const std::pair<std::size_t, std::string>> rows);

struct MrSplitCounts {
  std::size_t train = 10235;
  std::size_t test = 427;
};

/// Builds the seeded MR train/test split from the raw polarity files (one
/// review per line; negative = label 1, positive = label 2). Writes
/// train.csv, test.csv and test_index.txt into out_dir.
void prepare_mr_split(const std::filesystem::path& negative, const std::filesystem::path& positive,
                      std::uint64_t seed, const std::filesystem::path& out_dir,
                      MrSplitCounts counts = {});

}  // namespace s2m
