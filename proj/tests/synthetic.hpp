// SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
//
// SPDX-License-Identifier: Apache-2.0

// Small labeled corpora for training tests.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "s2m/dataset.hpp"
#include "s2m/harness.hpp"

namespace s2m::testing {

// Label k sentences contain one cue word for class k among filler words.
inline std::vector<std::pair<std::size_t, std::string>> cue_corpus(std::size_t count,
                                                                   std::size_t classes,
                                                                   std::uint64_t seed) {
  static const char* kCues[] = {"great", "awful", "sport", "stock"};
  static const char* kFiller[] = {"the", "a",   "movie", "was", "it",    "plot",
                                  "and", "so",  "very",  "one", "story", "of"};
  std::mt19937_64 rng(seed);
  std::vector<std::pair<std::size_t, std::string>> rows;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t label = rng() % classes;
    const std::size_t len = 2 + rng() % 4;
    const std::size_t cue_at = rng() % len;
    std::string text;
    for (std::size_t w = 0; w < len; ++w) {
      if (!text.empty()) text += ' ';
      text += w == cue_at ? kCues[label] : kFiller[rng() % std::size(kFiller)];
    }
    rows.emplace_back(label + 1, text);
  }
  return rows;
}

inline std::filesystem::path write_cue_dataset(const std::filesystem::path& dir,
                                               std::size_t train, std::size_t test,
                                               std::size_t classes, std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream os(dir / "train.csv");
    write_csv2(os, cue_corpus(train, classes, seed));
  }
  {
    std::ofstream os(dir / "test.csv");
    write_csv2(os, cue_corpus(test, classes, seed + 1));
  }
  return dir;
}

// A small Sent2Matrix configuration over a cue dataset.
inline ExperimentConfig small_experiment(const std::filesystem::path& data_dir,
                                         std::size_t classes) {
  ExperimentConfig c;
  c.data.name = "cue";
  c.data.train_path = data_dir / "train.csv";
  c.data.test_path = data_dir / "test.csv";
  c.data.format = DatasetFormat::kCsv2;
  c.data.classes = classes;
  c.data.n = 6;
  c.data.m = 5;
  c.model.initial_filters = 6;
  c.model.blocks = 1;
  c.model.layers_per_block = 2;
  c.model.growth = 4;
  c.model.fc_hidden = 16;
  c.model.dropout_keep = 1.0;
  c.train.batch_size = 16;
  c.train.micro_batch = 8;
  c.train.epochs = 3;
  c.train.adam.lr = 0.01;
  c.train.seed = 1;
  c.sync_model_with_data();
  return c;
}

inline std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("s2m_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace s2m::testing
