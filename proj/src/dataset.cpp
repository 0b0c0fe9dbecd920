// SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
//
// SPDX-License-Identifier: Apache-2.0

#include "s2m/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <random>

#include "s2m/error.hpp"

namespace s2m {

std::string_view to_string(DatasetFormat format) noexcept {
  switch (format) {
    case DatasetFormat::kCsv2: return "csv2";
    case DatasetFormat::kCsv3: return "csv3";
    case DatasetFormat::kText: return "text";
  }
  return "unknown";
}

DatasetFormat parse_dataset_format(std::string_view name) {
  if (name == "csv2") return DatasetFormat::kCsv2;
  if (name == "csv3") return DatasetFormat::kCsv3;
  if (name == "text") return DatasetFormat::kText;
  throw ConfigError("unknown dataset format '" + std::string(name) +
                    "' (expected csv2, csv3 or text)");
}

std::optional<DatasetSpec> dataset_preset(std::string_view name,
                                          const std::filesystem::path& data_dir) {
  DatasetSpec spec;
  spec.name = std::string(name);
  spec.m = 18;
  if (name == "ag_news") {
    spec.classes = 4;
    spec.n = 49;
    spec.format = DatasetFormat::kCsv3;
  } else if (name == "yelp_full") {
    spec.classes = 5;
    spec.n = 67;
    spec.format = DatasetFormat::kCsv2;
  } else if (name == "mr") {
    spec.classes = 2;
    spec.n = 51;
    spec.format = DatasetFormat::kCsv2;
  } else {
    return std::nullopt;
  }
  spec.train_path = data_dir / spec.name / "train.csv";
  spec.test_path = data_dir / spec.name / "test.csv";
  return spec;
}

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("S2M_DATA_DIR"); env && *env) return env;
  return "data";
}

bool read_csv_record(std::istream& is, std::vector<std::string>& fields) {
  fields.clear();
  if (is.peek() == std::char_traits<char>::eof()) return false;
  std::string field;
  bool in_quotes = false;
  bool quoted_field = false;
  char c;
  while (is.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (is.peek() == '"') {
          is.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && field.empty() && !quoted_field) {
      in_quotes = true;
      quoted_field = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      quoted_field = false;
    } else if (c == '\n') {
      break;
    } else if (c == '\r') {
      if (is.peek() == '\n') is.get(c);
      break;
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(std::move(field));
  return true;
}

LoadedSplit load_split(std::istream& is, DatasetFormat format, std::size_t classes,
                       std::string_view source) {
  if (classes < 2 && format != DatasetFormat::kText) {
    throw ConfigError("a labeled dataset needs at least 2 classes");
  }
  LoadedSplit split;
  auto reject = [&](std::size_t row, const std::string& why) {
    ++split.malformed;
    if (split.malformed_examples.size() < 5) {
      split.malformed_examples.push_back(std::string(source) + " row " + std::to_string(row) +
                                         ": " + why);
    }
  };

  if (format == DatasetFormat::kText) {
    std::string line;
    std::size_t row = 0;
    while (std::getline(is, line)) {
      ++row;
      split.samples.push_back({0, sentence_from_text(line, std::to_string(row))});
    }
    return split;
  }

  const std::size_t expected_fields = format == DatasetFormat::kCsv3 ? 3 : 2;
  std::vector<std::string> fields;
  std::size_t row = 0;
  while (read_csv_record(is, fields)) {
    ++row;
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    if (fields.size() != expected_fields) {
      reject(row, "expected " + std::to_string(expected_fields) + " fields, got " +
                      std::to_string(fields.size()));
      continue;
    }
    std::size_t label = 0;
    const std::string& lf = fields[0];
    const auto [ptr, ec] = std::from_chars(lf.data(), lf.data() + lf.size(), label);
    if (ec != std::errc() || ptr != lf.data() + lf.size()) {
      reject(row, "non-numeric label '" + lf + "'");
      continue;
    }
    if (label < 1 || label > classes) {
      throw DataError(std::string(source) + " row " + std::to_string(row) + ": label " + lf +
                      " outside 1.." + std::to_string(classes));
    }
    std::string text = fields[1];
    if (expected_fields == 3) text += " " + fields[2];
    split.samples.push_back({label - 1, sentence_from_text(text, std::to_string(row))});
  }
  return split;
}

LoadedSplit load_split(const std::filesystem::path& path, DatasetFormat format,
                       std::size_t classes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset file " + path.string());
  return load_split(in, format, classes, path.string());
}

void write_csv2(std::ostream& os, std::span<const std::pair<std::size_t, std::string>> rows) {
  for (const auto& [label, text] : rows) {
    os << label << ",\"";
    for (char c : text) {
      if (c == '"') os << '"';
      os << c;
    }
    os << "\"\n";
  }
}

void prepare_mr_split(const std::filesystem::path& negative, const std::filesystem::path& positive,
                      std::uint64_t seed, const std::filesystem::path& out_dir,
                      MrSplitCounts counts) {
  std::vector<std::pair<std::size_t, std::string>> rows;
  for (const auto& [path, label] : {std::pair{negative, std::size_t{1}}, {positive, 2}}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) rows.emplace_back(label, line);
    }
  }
  if (rows.size() != counts.train + counts.test) {
    throw DataError("MR split expects " + std::to_string(counts.train + counts.test) +
                    " reviews, found " + std::to_string(rows.size()));
  }
  std::vector<std::size_t> perm(rows.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);

  std::filesystem::create_directories(out_dir);
  std::vector<std::pair<std::size_t, std::string>> train, test;
  std::vector<std::size_t> test_index(perm.begin(), perm.begin() + counts.test);
  std::sort(test_index.begin(), test_index.end());
  std::vector<bool> is_test(rows.size(), false);
  for (std::size_t i : test_index) is_test[i] = true;
  for (std::size_t i = 0; i < rows.size(); ++i) (is_test[i] ? test : train).push_back(rows[i]);

  std::ofstream tr(out_dir / "train.csv", std::ios::binary);
  std::ofstream te(out_dir / "test.csv", std::ios::binary);
  std::ofstream ix(out_dir / "test_index.txt");
  if (!tr || !te || !ix) throw DataError("cannot write MR split into " + out_dir.string());
  write_csv2(tr, train);
  write_csv2(te, test);
  for (std::size_t i : test_index) ix << i << '\n';
}

}  // namespace s2m
