// SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
//
// SPDX-License-Identifier: Apache-2.0

#include "s2m/models.hpp"

#include <cmath>
#include <sstream>

#include "s2m/error.hpp"

namespace s2m {

std::string_view to_string(Architecture arch) noexcept {
  switch (arch) {
    case Architecture::kSent2MatrixDense: return "sent2matrix_dense";
    case Architecture::kWordCnn: return "word_cnn";
    case Architecture::kCharCnn: return "char_cnn";
  }
  return "unknown";
}

Architecture parse_architecture(std::string_view name) {
  if (name == "sent2matrix_dense") return Architecture::kSent2MatrixDense;
  if (name == "word_cnn") return Architecture::kWordCnn;
  if (name == "char_cnn") return Architecture::kCharCnn;
  throw ConfigError("unknown architecture '" + std::string(name) +
                    "' (expected sent2matrix_dense, word_cnn or char_cnn)");
}

// ---------------------------------------------------------------------------
// ModelConfig
// ---------------------------------------------------------------------------

void ModelConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("model config: ") + what);
  };
  require(n >= 1, "n must be at least 1");
  require(m >= 1, "m must be at least 1");
  require(blocks >= 1, "blocks must be at least 1");
  require(layers_per_block >= 1, "layers_per_block must be at least 1");
  require(growth >= 1, "growth must be at least 1");
  require(initial_filters >= 1, "initial_filters must be at least 1");
  require(kernel_h >= 1 && kernel_w >= 1, "kernel sizes must be at least 1");
  require(fc_hidden >= 1, "fc_hidden must be at least 1");
  require(classes >= 2, "classes must be at least 2");
  require(dropout_keep > 0.0 && dropout_keep <= 1.0, "dropout_keep must be in (0, 1]");
  require(embed_dim >= 1, "embed_dim must be at least 1");
  require(vocab_size >= 2, "vocab_size must be at least 2");
}

void ModelConfig::set(std::string_view key, std::string_view value) {
  if (key == "arch") arch = parse_architecture(value);
  else if (key == "n") n = parse_count(key, value);
  else if (key == "m") m = parse_count(key, value);
  else if (key == "strategy") strategy = parse_padding_strategy(value);
  else if (key == "position") use_position = parse_flag(key, value);
  else if (key == "initial_filters") initial_filters = parse_count(key, value);
  else if (key == "blocks") blocks = parse_count(key, value);
  else if (key == "layers_per_block") layers_per_block = parse_count(key, value);
  else if (key == "growth") growth = parse_count(key, value);
  else if (key == "kernel_h") kernel_h = parse_count(key, value);
  else if (key == "kernel_w") kernel_w = parse_count(key, value);
  else if (key == "fc_hidden") fc_hidden = parse_count(key, value);
  else if (key == "classes") classes = parse_count(key, value);
  else if (key == "dropout_keep") dropout_keep = parse_real(key, value);
  else if (key == "seed") seed = parse_u64(key, value);
  else if (key == "embed_dim") embed_dim = parse_count(key, value);
  else if (key == "vocab_size") vocab_size = parse_count(key, value);
  else throw ConfigError("unknown model key '" + std::string(key) + "'");
}

namespace {

std::string format_real(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

KeyValues ModelConfig::entries() const {
  return {
      {"arch", std::string(to_string(arch))},
      {"n", std::to_string(n)},
      {"m", std::to_string(m)},
      {"strategy", std::string(to_string(strategy))},
      {"position", use_position ? "on" : "off"},
      {"initial_filters", std::to_string(initial_filters)},
      {"blocks", std::to_string(blocks)},
      {"layers_per_block", std::to_string(layers_per_block)},
      {"growth", std::to_string(growth)},
      {"kernel_h", std::to_string(kernel_h)},
      {"kernel_w", std::to_string(kernel_w)},
      {"fc_hidden", std::to_string(fc_hidden)},
      {"classes", std::to_string(classes)},
      {"dropout_keep", format_real(dropout_keep)},
      {"seed", std::to_string(seed)},
      {"embed_dim", std::to_string(embed_dim)},
      {"vocab_size", std::to_string(vocab_size)},
  };
}

std::string ModelConfig::to_ini() const {
  std::string out;
  for (const auto& [k, v] : entries()) out += k + " = " + v + "\n";
  return out;
}

ModelConfig ModelConfig::from_entries(const KeyValues& entries) {
  ModelConfig c;
  for (const auto& [k, v] : entries) c.set(k, v);
  c.validate();
  return c;
}

ModelConfig ModelConfig::from_ini(std::istream& is) {
  const auto sections = read_ini(is);
  KeyValues all;
  for (const auto& s : sections) {
    if (!s.name.empty()) throw ConfigError("model config is flat; unexpected section [" + s.name + "]");
    all.insert(all.end(), s.entries.begin(), s.entries.end());
  }
  return from_entries(all);
}

// ---------------------------------------------------------------------------
// Model
// ---------------------------------------------------------------------------

std::vector<Parameter*> Model::parameters() {
  std::vector<Parameter*> out;
  out.reserve(params_.size());
  for (auto& p : params_) out.push_back(p.get());
  return out;
}

const Parameter* Model::find_parameter(std::string_view name) const {
  for (const auto& p : params_) {
    if (p->name == name) return p.get();
  }
  return nullptr;
}

std::size_t Model::parameter_count() const {
  std::size_t total = 0;
  for (const auto& p : params_) total += p->value.size();
  return total;
}

Tensor Model::logits(std::span<const TokenizedSentence> batch) {
  Tape tape;
  Rng unused(0);
  return tape.value(forward(tape, batch, false, unused));
}

Parameter& Model::add_parameter(std::string name, Tensor value) {
  if (find_parameter(name)) throw ConfigError("duplicate parameter name " + name);
  params_.push_back(std::make_unique<Parameter>(std::move(name), std::move(value)));
  return *params_.back();
}

Parameter& Model::add_weight(std::string name, Shape shape, std::size_t fan_in, Rng& rng) {
  Tensor w(std::move(shape));
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (double& v : w.data()) v = dist(rng);
  return add_parameter(std::move(name), std::move(w));
}

Parameter& Model::add_bias(std::string name, std::size_t size) {
  return add_parameter(std::move(name), Tensor({size}));
}

Var dense_block(Tape& tape, Var x, std::span<const std::pair<Parameter*, Parameter*>> layers) {
  Var stack = x;
  for (const auto& [w, b] : layers) {
    const std::size_t kh = w->value.dim(2), kw = w->value.dim(3);
    const std::size_t top = (kh - 1) / 2, left = (kw - 1) / 2;
    Var padded = ops::pad2d(tape, stack, top, kh - 1 - top, left, kw - 1 - left);
    Var y = ops::relu(tape, ops::conv2d(tape, padded, tape.parameter(*w), tape.parameter(*b),
                                        {1, 1}));
    stack = ops::concat_channels(tape, stack, y);
  }
  return stack;
}

// ---------------------------------------------------------------------------
// Sent2Matrix dense network
// ---------------------------------------------------------------------------

Sent2MatrixModel::Sent2MatrixModel(ModelConfig config) : Model(std::move(config)) {
  const ModelConfig& c = config_;
  c.validate();
  if (c.arch != Architecture::kSent2MatrixDense) {
    throw ConfigError("build_sent2matrix needs arch = sent2matrix_dense");
  }
  const EncoderConfig enc = c.encoder();
  const std::size_t slices = enc.slices();
  if (c.kernel_h > c.m || c.kernel_w > slices) {
    throw ConfigError("kernel " + std::to_string(c.kernel_h) + "x" + std::to_string(c.kernel_w) +
                      " larger than the " + std::to_string(c.m) + "x" + std::to_string(slices) +
                      " input");
  }
  auto [h, w] = stem_output_size();
  for (std::size_t b = 1; b < c.blocks; ++b) {
    if (h < 2 || w < 2 || h % 2 != 0 || w % 2 != 0) {
      throw ConfigError("feature map " + std::to_string(h) + "x" + std::to_string(w) +
                        " before block " + std::to_string(b) +
                        " cannot be average-pooled by 2x2");
    }
    h /= 2;
    w /= 2;
  }

  Rng rng(c.seed);
  const std::size_t in_c = enc.channels();
  const std::size_t taps = c.kernel_h * c.kernel_w;
  stem_w_ = &add_weight("stem.w", {c.initial_filters, in_c, c.kernel_h, c.kernel_w},
                        in_c * taps, rng);
  stem_b_ = &add_bias("stem.b", c.initial_filters);
  std::size_t channels = c.initial_filters;
  for (std::size_t b = 0; b < c.blocks; ++b) {
    auto& layers = blocks_.emplace_back();
    for (std::size_t l = 0; l < c.layers_per_block; ++l) {
      const std::string prefix = "block" + std::to_string(b) + ".layer" + std::to_string(l);
      Parameter& lw = add_weight(prefix + ".w", {c.growth, channels, c.kernel_h, c.kernel_w},
                                 channels * taps, rng);
      Parameter& lb = add_bias(prefix + ".b", c.growth);
      layers.emplace_back(&lw, &lb);
      channels += c.growth;
    }
  }
  const std::size_t flat = channels * h * w;
  fc1_w_ = &add_weight("fc1.w", {c.fc_hidden, flat}, flat, rng);
  fc1_b_ = &add_bias("fc1.b", c.fc_hidden);
  out_w_ = &add_weight("out.w", {c.classes, c.fc_hidden}, c.fc_hidden, rng);
  out_b_ = &add_bias("out.b", c.classes);
}

std::pair<std::size_t, std::size_t> Sent2MatrixModel::stem_output_size() const {
  const std::size_t slices = config_.encoder().slices();
  return {config_.m - config_.kernel_h + 1, (slices - config_.kernel_w) / 2 + 1};
}

std::vector<std::size_t> Sent2MatrixModel::block_output_channels() const {
  std::vector<std::size_t> out;
  std::size_t channels = config_.initial_filters;
  for (std::size_t b = 0; b < config_.blocks; ++b) {
    channels += config_.layers_per_block * config_.growth;
    out.push_back(channels);
  }
  return out;
}

Var Sent2MatrixModel::forward(Tape& tape, std::span<const TokenizedSentence> batch,
                              bool training, Rng& rng) {
  return forward_encoded(tape, encode_batch(batch, config_.encoder()), training, rng);
}

Var Sent2MatrixModel::forward_encoded(Tape& tape, Tensor input, bool training, Rng& rng) {
  const EncoderConfig enc = config_.encoder();
  if (input.rank() != 4 || input.dim(1) != enc.channels() || input.dim(2) != enc.m ||
      input.dim(3) != enc.slices()) {
    throw ShapeError("sent2matrix input " + shape_string(input.shape()) + " does not match [N," +
                     std::to_string(enc.channels()) + "," + std::to_string(enc.m) + "," +
                     std::to_string(enc.slices()) + "]");
  }
  Var x = tape.constant(std::move(input));
  x = ops::relu(tape, ops::conv2d(tape, x, tape.parameter(*stem_w_), tape.parameter(*stem_b_),
                                  {1, 2}));
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (b > 0) x = ops::avg_pool2d(tape, x, 2, 2);
    x = dense_block(tape, x, blocks_[b]);
  }
  x = ops::flatten(tape, x);
  x = ops::relu(tape, ops::linear(tape, x, tape.parameter(*fc1_w_), tape.parameter(*fc1_b_)));
  x = ops::dropout(tape, x, config_.dropout_keep, rng, training);
  return ops::linear(tape, x, tape.parameter(*out_w_), tape.parameter(*out_b_));
}

// ---------------------------------------------------------------------------
// Word-level CNN
// ---------------------------------------------------------------------------

WordCnnModel::WordCnnModel(ModelConfig config, WordVocab vocab)
    : Model(std::move(config)), vocab_(std::move(vocab)) {
  const ModelConfig& c = config_;
  c.validate();
  if (c.arch != Architecture::kWordCnn) throw ConfigError("build_word_cnn needs arch = word_cnn");
  if (vocab_.size() == 0) throw ConfigError("word CNN needs a non-empty vocabulary");
  for (std::size_t k : kWordCnnWidths) {
    if (k > c.n) {
      throw ConfigError("word CNN kernel " + std::to_string(k) + " exceeds n = " +
                        std::to_string(c.n));
    }
  }
  Rng rng(c.seed);
  std::uniform_real_distribution<double> dist(-0.25, 0.25);
  Tensor e({c.embed_dim, vocab_.size()});
  for (double& v : e.data()) v = dist(rng);
  embedding_ = &add_parameter("embedding", std::move(e));
  for (std::size_t k : kWordCnnWidths) {
    const std::string prefix = "conv" + std::to_string(k);
    Parameter& w = add_weight(prefix + ".w", {kWordCnnFilters, c.embed_dim, k}, c.embed_dim * k, rng);
    Parameter& b = add_bias(prefix + ".b", kWordCnnFilters);
    convs_.emplace_back(&w, &b);
  }
  const std::size_t features = kWordCnnFilters * std::size(kWordCnnWidths);
  out_w_ = &add_weight("out.w", {c.classes, features}, features, rng);
  out_b_ = &add_bias("out.b", c.classes);
}

std::vector<std::int64_t> WordCnnModel::word_indices(
    std::span<const TokenizedSentence> batch) const {
  const std::size_t n = config_.n;
  std::vector<std::int64_t> idx(batch.size() * n, -1);
  for (std::size_t s = 0; s < batch.size(); ++s) {
    const std::size_t words = std::min(n, batch[s].size());
    for (std::size_t j = 0; j < words; ++j) {
      idx[s * n + j] = static_cast<std::int64_t>(vocab_.index_of(batch[s].words[j]));
    }
  }
  return idx;
}

Var WordCnnModel::forward(Tape& tape, std::span<const TokenizedSentence> batch, bool training,
                          Rng& rng) {
  if (batch.empty()) throw ConfigError("cannot run a model on an empty batch");
  const auto idx = word_indices(batch);
  Var x = ops::embedding_lookup(tape, tape.parameter(*embedding_), idx, batch.size(), config_.n);
  std::vector<Var> pooled;
  for (const auto& [w, b] : convs_) {
    Var y = ops::relu(tape, ops::conv1d(tape, x, tape.parameter(*w), tape.parameter(*b), 1));
    pooled.push_back(ops::global_max1d(tape, y));
  }
  Var h = ops::concat_channels(tape, pooled);
  h = ops::dropout(tape, h, config_.dropout_keep, rng, training);
  return ops::linear(tape, h, tape.parameter(*out_w_), tape.parameter(*out_b_));
}

// ---------------------------------------------------------------------------
// Character-level CNN
// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t kCharKernels[] = {7, 7, 3, 3, 3, 3};
constexpr bool kCharPoolAfter[] = {true, true, false, false, false, true};
constexpr std::size_t kCharPool = 3;

}  // namespace

std::vector<std::size_t> CharCnnModel::conv_output_lengths() const {
  std::vector<std::size_t> out;
  std::size_t len = config_.char_capacity();
  for (std::size_t l = 0; l < std::size(kCharKernels); ++l) {
    if (len < kCharKernels[l]) {
      throw ConfigError("character capacity " + std::to_string(config_.char_capacity()) +
                        " too short for the character CNN (layer " + std::to_string(l + 1) + ")");
    }
    len = len - kCharKernels[l] + 1;
    out.push_back(len);
    if (kCharPoolAfter[l]) {
      if (len < kCharPool) {
        throw ConfigError("character CNN feature length underflows at layer " +
                          std::to_string(l + 1));
      }
      len /= kCharPool;
    }
  }
  return out;
}

CharCnnModel::CharCnnModel(ModelConfig config) : Model(std::move(config)) {
  const ModelConfig& c = config_;
  c.validate();
  if (c.arch != Architecture::kCharCnn) throw ConfigError("build_char_cnn needs arch = char_cnn");
  const std::size_t final_len = conv_output_lengths().back() / kCharPool;
  Rng rng(c.seed);
  std::size_t channels = BaselineCharVocab::kSize;
  for (std::size_t l = 0; l < std::size(kCharKernels); ++l) {
    const std::string prefix = "conv" + std::to_string(l + 1);
    Parameter& w = add_weight(prefix + ".w", {c.initial_filters, channels, kCharKernels[l]},
                              channels * kCharKernels[l], rng);
    Parameter& b = add_bias(prefix + ".b", c.initial_filters);
    convs_.emplace_back(&w, &b);
    channels = c.initial_filters;
  }
  std::size_t width = channels * final_len;
  for (std::size_t f = 0; f < 2; ++f) {
    const std::string prefix = "fc" + std::to_string(f + 1);
    Parameter& w = add_weight(prefix + ".w", {c.fc_hidden, width}, width, rng);
    Parameter& b = add_bias(prefix + ".b", c.fc_hidden);
    fcs_.emplace_back(&w, &b);
    width = c.fc_hidden;
  }
  Parameter& w = add_weight("out.w", {c.classes, width}, width, rng);
  Parameter& b = add_bias("out.b", c.classes);
  fcs_.emplace_back(&w, &b);
}

Var CharCnnModel::forward(Tape& tape, std::span<const TokenizedSentence> batch, bool training,
                          Rng& rng) {
  if (batch.empty()) throw ConfigError("cannot run a model on an empty batch");
  const std::size_t len = config_.char_capacity();
  Tensor input({batch.size(), BaselineCharVocab::kSize, len});
  for (std::size_t s = 0; s < batch.size(); ++s) {
    const Tensor one = sentence_char_matrix(batch[s], len);
    std::copy(one.data().begin(), one.data().end(), input.raw() + s * one.size());
  }
  Var x = tape.constant(std::move(input));
  for (std::size_t l = 0; l < convs_.size(); ++l) {
    const auto& [w, b] = convs_[l];
    x = ops::relu(tape, ops::conv1d(tape, x, tape.parameter(*w), tape.parameter(*b), 1));
    if (kCharPoolAfter[l]) x = ops::max_pool1d(tape, x, kCharPool);
  }
  x = ops::flatten(tape, x);
  for (std::size_t f = 0; f + 1 < fcs_.size(); ++f) {
    const auto& [w, b] = fcs_[f];
    x = ops::relu(tape, ops::linear(tape, x, tape.parameter(*w), tape.parameter(*b)));
    x = ops::dropout(tape, x, config_.dropout_keep, rng, training);
  }
  const auto& [w, b] = fcs_.back();
  return ops::linear(tape, x, tape.parameter(*w), tape.parameter(*b));
}

// ---------------------------------------------------------------------------

std::unique_ptr<Sent2MatrixModel> build_sent2matrix(const ModelConfig& config) {
  return std::make_unique<Sent2MatrixModel>(config);
}

std::unique_ptr<WordCnnModel> build_word_cnn(const ModelConfig& config, WordVocab vocab) {
  return std::make_unique<WordCnnModel>(config, std::move(vocab));
}

std::unique_ptr<CharCnnModel> build_char_cnn(const ModelConfig& config) {
  return std::make_unique<CharCnnModel>(config);
}

std::unique_ptr<Model> build_model(const ModelConfig& config, const WordVocab* vocab) {
  switch (config.arch) {
    case Architecture::kSent2MatrixDense: return build_sent2matrix(config);
    case Architecture::kCharCnn: return build_char_cnn(config);
    case Architecture::kWordCnn:
      if (!vocab) throw ConfigError("the word CNN needs a word vocabulary");
      return build_word_cnn(config, *vocab);
  }
  throw ConfigError("unknown architecture");
}

std::vector<std::size_t> predict(const Tensor& logits) {
  if (logits.rank() != 2) {
    throw ShapeError("predict: logits must be [batch, classes], got " +
                     shape_string(logits.shape()));
  }
  const std::size_t n = logits.dim(0), k = logits.dim(1);
  std::vector<std::size_t> out(n);
  for (std::size_t s = 0; s < n; ++s) {
    const double* z = logits.raw() + s * k;
    std::size_t best = 0;
    for (std::size_t j = 1; j < k; ++j) {
      if (z[j] > z[best]) best = j;
    }
    out[s] = best;
  }
  return out;
}

std::vector<std::size_t> predict(Model& model, std::span<const TokenizedSentence> batch) {
  return predict(model.logits(batch));
}

}  // namespace s2m
