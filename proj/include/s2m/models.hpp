// SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "s2m/autograd.hpp"
#include "s2m/config.hpp"
#include "s2m/embedding.hpp"
#include "s2m/padding.hpp"
#include "s2m/text.hpp"

namespace s2m {

enum class Architecture { kSent2MatrixDense, kWordCnn, kCharCnn };

std::string_view to_string(Architecture arch) noexcept;
Architecture parse_architecture(std::string_view name);

/// Filters per kernel width in the word-level CNN.
inline constexpr std::size_t kWordCnnFilters = 100;
inline constexpr std::size_t kWordCnnWidths[] = {3, 4, 5};

struct ModelConfig {
  Architecture arch = Architecture::kSent2MatrixDense;
  std::size_t n = 49;
  std::size_t m = 18;
  PaddingStrategy strategy = PaddingStrategy::kSerpentine;
  bool use_position = false;
  std::size_t initial_filters = 64;
  std::size_t blocks = 2;
  std::size_t layers_per_block = 3;
  std::size_t growth = 32;
  std::size_t kernel_h = 3;  ///< along the character axis
  std::size_t kernel_w = 2;  ///< along the word axis
  std::size_t fc_hidden = 256;
  std::size_t classes = 4;
  double dropout_keep = 0.5;
  std::uint64_t seed = 0;
  std::size_t embed_dim = 128;     ///< word CNN only
  std::size_t vocab_size = 20000;  ///< word CNN only

  /// Throws ConfigError when an invariant is violated.
  void validate() const;

  EncoderConfig encoder() const { return {n, m, strategy, use_position}; }
  /// Characters per sentence for the character-level baseline: n * (m + 1).
  std::size_t char_capacity() const { return n * (m + 1); }

  /// Sets one key; unknown keys and bad values throw ConfigError.
  void set(std::string_view key, std::string_view value);
  /// All keys in a fixed order.
  KeyValues entries() const;
  /// Flat `key = value` lines.
  std::string to_ini() const;
  static ModelConfig from_entries(const KeyValues& entries);
  static ModelConfig from_ini(std::istream& is);

  std::uint64_t digest() const { return fnv1a64(to_ini()); }
};

/// A built network: immutable graph plus the parameters it owns.
class Model {
 public:
  explicit Model(ModelConfig config) : config_(std::move(config)) {}
  virtual ~Model() = default;
  Model(const Model&) = delete;
  Model& operator=(const Model&) = delete;

  const ModelConfig& config() const noexcept { return config_; }
  std::vector<Parameter*> parameters();
  const Parameter* find_parameter(std::string_view name) const;
  std::size_t parameter_count() const;

  /// Records the forward pass and returns [batch, classes] logits.
  virtual Var forward(Tape& tape, std::span<const TokenizedSentence> batch, bool training,
                      Rng& rng) = 0;

  /// Evaluation-mode logits.
  Tensor logits(std::span<const TokenizedSentence> batch);

 protected:
  Parameter& add_parameter(std::string name, Tensor value);
  /// Zero-mean uniform weights in [-1/sqrt(fan_in), 1/sqrt(fan_in)].
  Parameter& add_weight(std::string name, Shape shape, std::size_t fan_in, Rng& rng);
  Parameter& add_bias(std::string name, std::size_t size);

  ModelConfig config_;
  std::vector<std::unique_ptr<Parameter>> params_;
};

/// Dense block: each layer convolves the running feature stack (zero-padded
/// so the spatial size is preserved), applies ReLU and appends its output
/// channels. `layers` holds (filters, bias) pairs.
Var dense_block(Tape& tape, Var x, std::span<const std::pair<Parameter*, Parameter*>> layers);

/// Sent2Matrix dense network. Input [batch, channels, m, slices].
class Sent2MatrixModel final : public Model {
 public:
  explicit Sent2MatrixModel(ModelConfig config);

  Var forward(Tape& tape, std::span<const TokenizedSentence> batch, bool training,
              Rng& rng) override;
  /// Forward from an already encoded [batch, channels, m, slices] tensor.
  Var forward_encoded(Tape& tape, Tensor input, bool training, Rng& rng);

  /// Spatial size (character rows, word columns) after the strided stem.
  std::pair<std::size_t, std::size_t> stem_output_size() const;
  /// Channels leaving each dense block.
  std::vector<std::size_t> block_output_channels() const;

 private:
  Parameter* stem_w_ = nullptr;
  Parameter* stem_b_ = nullptr;
  std::vector<std::vector<std::pair<Parameter*, Parameter*>>> blocks_;
  Parameter* fc1_w_ = nullptr;
  Parameter* fc1_b_ = nullptr;
  Parameter* out_w_ = nullptr;
  Parameter* out_b_ = nullptr;
};

/// Word-level CNN: learned embedding, conv widths 3/4/5 with 100 filters
/// each, max over time, dropout, linear.
class WordCnnModel final : public Model {
 public:
  WordCnnModel(ModelConfig config, WordVocab vocab);

  Var forward(Tape& tape, std::span<const TokenizedSentence> batch, bool training,
              Rng& rng) override;
  /// Vocabulary indices per word position, -1 past the sentence end.
  std::vector<std::int64_t> word_indices(std::span<const TokenizedSentence> batch) const;

  const WordVocab& vocab() const noexcept { return vocab_; }

 private:
  WordVocab vocab_;
  Parameter* embedding_ = nullptr;
  std::vector<std::pair<Parameter*, Parameter*>> convs_;
  Parameter* out_w_ = nullptr;
  Parameter* out_b_ = nullptr;
};

/// Character-level CNN over the separator-joined character stream: six conv
/// layers (kernels 7,7,3,3,3,3; max-pool 3 after layers 1, 2 and 6), two
/// fully connected layers with dropout, then the classifier.
class CharCnnModel final : public Model {
 public:
  explicit CharCnnModel(ModelConfig config);

  Var forward(Tape& tape, std::span<const TokenizedSentence> batch, bool training,
              Rng& rng) override;
  /// Feature length after each conv layer (before its pooling).
  std::vector<std::size_t> conv_output_lengths() const;

 private:
  std::vector<std::pair<Parameter*, Parameter*>> convs_;
  std::vector<std::pair<Parameter*, Parameter*>> fcs_;
};

std::unique_ptr<Sent2MatrixModel> build_sent2matrix(const ModelConfig& config);
std::unique_ptr<WordCnnModel> build_word_cnn(const ModelConfig& config, WordVocab vocab);
std::unique_ptr<CharCnnModel> build_char_cnn(const ModelConfig& config);
/// Dispatches on config.arch; the word CNN requires a vocabulary.
std::unique_ptr<Model> build_model(const ModelConfig& config,
                                   const WordVocab* vocab = nullptr);

/// Argmax per row; ties go to the lowest class index.
std::vector<std::size_t> predict(const Tensor& logits);
std::vector<std::size_t> predict(Model& model, std::span<const TokenizedSentence> batch);

}  // namespace s2m
