// SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "s2m/dataset.hpp"
#include "s2m/models.hpp"
#include "s2m/optim.hpp"

namespace s2m {

struct TrainOptions {
  std::size_t epochs = 20;
  std::size_t batch_size = 512;
  /// Samples per forward/backward pass; gradients of the micro-batches of
  /// one batch are summed before the optimizer step.
  std::size_t micro_batch = 64;
  AdamOptions adam;
  std::uint64_t seed = 0;
  std::optional<std::size_t> subsample;
  double validation_fraction = 0.05;
  bool checkpoint_every_epoch = true;
  /// Stop once the training-set accuracy reaches this value.
  std::optional<double> stop_at_train_accuracy;
  std::size_t word_vocab_cap = 20000;
  /// When off, the per-epoch train accuracy is the running accuracy of the
  /// training-mode forward passes instead of a separate evaluation pass.
  bool eval_train_accuracy = true;
};

/// Sections [data], [model], [train] of an experiment file.
struct ExperimentConfig {
  DatasetSpec data;
  ModelConfig model;
  TrainOptions train;

  /// `section.key` form, e.g. "train.seed". Unknown keys throw ConfigError.
  void set(std::string_view dotted_key, std::string_view value);
  std::string to_ini() const;
  /// Applies a file on top of defaults. `data.dataset = <preset>` selects
  /// one of the known datasets under `data.data_dir`.
  static ExperimentConfig from_ini(std::istream& is);
  static ExperimentConfig from_file(const std::filesystem::path& path);
  /// Copies n, m and classes from the data section into the model.
  void sync_model_with_data();
  std::uint64_t digest() const;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  std::optional<double> validation_accuracy;
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
  double test_accuracy = 0.0;
  double wall_clock_seconds = 0.0;  ///< not part of the persisted report
  std::uint64_t seed = 0;
  std::string config_digest;
  std::size_t train_samples = 0;
  std::size_t validation_samples = 0;
  std::size_t test_samples = 0;
  std::size_t malformed_rows = 0;

  /// One `epoch ...` line per epoch and a closing `summary ...` line.
  std::string to_text() const;
};

struct Metrics {
  std::size_t correct = 0;
  std::size_t total = 0;
  double accuracy() const { return static_cast<double>(correct) / static_cast<double>(total); }
};

/// Exact accuracy over `samples` in evaluation mode. Predictions are
/// written to `predictions` when given. Throws ConfigError for an empty split.
Metrics evaluate(Model& model, std::span<const LabeledSentence> samples,
                 std::vector<std::size_t>* predictions = nullptr, std::size_t batch = 256);

/// `index,true,pred` per line with a header row.
void write_prediction_log(std::ostream& os, std::span<const LabeledSentence> samples,
                          std::span<const std::size_t> predictions);
/// Recounts accuracy from a prediction log.
Metrics recount_prediction_log(std::istream& is);

struct Dataset {
  LoadedSplit train;
  LoadedSplit test;
};
Dataset load_dataset(const DatasetSpec& spec);

/// Seeded split of the training pool: subsample prefix, validation tail.
struct SampleSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};
SampleSplit split_training_pool(std::size_t pool_size, const TrainOptions& options);

/// Seeded permutation used to order epoch `epoch` (1-based).
std::vector<std::size_t> epoch_order(std::size_t count, std::uint64_t seed, std::size_t epoch);

struct TrainResult {
  TrainReport report;
  std::unique_ptr<Model> model;
  std::filesystem::path run_dir;
};

/// Trains on already loaded data. With a non-empty run_dir, writes
/// model.ini, experiment.ini, per-epoch checkpoints, checkpoint.bin,
/// report.txt, timing.txt and predictions.csv (plus vocab.txt for the word
/// CNN). Throws ConfigError for epochs == 0.
TrainResult train(const ExperimentConfig& config, const Dataset& data,
                  const std::filesystem::path& run_dir);

/// Loads the dataset and trains into `<out_root>/<digest>-s<seed>`, refusing
/// to overwrite an existing run.
TrainResult train(const ExperimentConfig& config, const std::filesystem::path& out_root);

std::filesystem::path run_directory(const ExperimentConfig& config,
                                    const std::filesystem::path& out_root);

/// Rebuilds the model of a finished run and loads its final checkpoint.
std::unique_ptr<Model> load_trained_model(const std::filesystem::path& run_dir);

struct PaddingComparison {
  std::vector<std::uint64_t> seeds;
  /// accuracy[strategy][seed], strategies in zero, cyclic, serpentine order.
  std::vector<std::vector<double>> accuracy;

  double mean(PaddingStrategy strategy) const;
  std::string to_text() const;
};

inline constexpr PaddingStrategy kAllStrategies[] = {
    PaddingStrategy::kZero, PaddingStrategy::kCyclic, PaddingStrategy::kSerpentine};

/// Trains the same architecture under each padding strategy and seed.
PaddingComparison compare_paddings(const ExperimentConfig& base, const Dataset& data,
                                   std::span<const std::uint64_t> seeds,
                                   const std::filesystem::path& out_root);

}  // namespace s2m
