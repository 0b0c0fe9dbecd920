// SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
//
// SPDX-License-Identifier: Apache-2.0

#include "s2m/embedding.hpp"

#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "s2m/error.hpp"

namespace s2m {

Tensor word_one_hot(std::string_view word, const WordVocab& vocab) {
  if (vocab.size() == 0) throw ConfigError("empty word vocabulary");
  Tensor u({vocab.size()});
  u[vocab.index_of(word)] = 1.0;
  return u;
}

Tensor word_embed(const Tensor& one_hot, const Tensor& embedding) {
  if (embedding.rank() != 2 || one_hot.rank() != 1 || one_hot.dim(0) != embedding.dim(1)) {
    throw ShapeError("word_embed: one-hot " + shape_string(one_hot.shape()) +
                     " does not match embedding " + shape_string(embedding.shape()));
  }
  std::size_t hot = one_hot.size();
  for (std::size_t i = 0; i < one_hot.size(); ++i) {
    if (one_hot[i] == 0.0) continue;
    if (one_hot[i] != 1.0 || hot != one_hot.size()) {
      throw ShapeError("word_embed: input is not a one-hot vector");
    }
    hot = i;
  }
  if (hot == one_hot.size()) throw ShapeError("word_embed: input is not a one-hot vector");

  const std::size_t d = embedding.dim(0);
  Tensor out({d});
  for (std::size_t r = 0; r < d; ++r) out[r] = embedding.at({r, hot});
  return out;
}

Tensor sentence_word_matrix(const TokenizedSentence& sent, const WordVocab& vocab,
                            const Tensor& embedding, std::size_t n) {
  if (n == 0) throw ConfigError("word capacity n must be at least 1");
  if (embedding.rank() != 2 || embedding.dim(1) != vocab.size()) {
    throw ShapeError("embedding " + shape_string(embedding.shape()) +
                     " does not match vocabulary of size " + std::to_string(vocab.size()));
  }
  const std::size_t d = embedding.dim(0);
  Tensor out({d, n});
  const std::size_t words = std::min(n, sent.size());
  for (std::size_t col = 0; col < words; ++col) {
    const Tensor p = word_embed(word_one_hot(sent.words[col], vocab), embedding);
    for (std::size_t r = 0; r < d; ++r) out[r * n + col] = p[r];
  }
  return out;
}

Tensor char_one_hot(char c) {
  if (!CharVocab::contains(c)) {
    throw ConfigError("character code " + std::to_string(static_cast<unsigned char>(c)) +
                      " is not in the character vocabulary");
  }
  Tensor v({CharVocab::kSize});
  v[CharVocab::index_of(c)] = 1.0;
  return v;
}

Tensor sentence_char_matrix(const TokenizedSentence& sent, std::size_t m_s) {
  if (m_s == 0) throw ConfigError("character capacity must be at least 1");
  Tensor out({BaselineCharVocab::kSize, m_s});
  std::size_t col = 0;
  for (std::size_t w = 0; w < sent.size() && col < m_s; ++w) {
    if (w > 0) out[BaselineCharVocab::kSeparatorIndex * m_s + col++] = 1.0;
    for (char c : sent.words[w]) {
      if (col == m_s) break;
      out[BaselineCharVocab::index_of(c) * m_s + col++] = 1.0;
    }
  }
  return out;
}

Tensor word_matrix(std::string_view word, std::size_t m, PaddingStrategy strategy) {
  if (m == 0) throw ConfigError("m must be at least 1");
  const PaddedWordLayout layout = pad_word(word, m, strategy);
  Tensor out({CharVocab::kSize, m});
  for (std::size_t j = 0; j < m; ++j) {
    if (const auto c = layout.columns[j]) out[CharVocab::index_of(*c) * m + j] = 1.0;
  }
  return out;
}

namespace {

void check_config(const EncoderConfig& config) {
  if (config.n == 0) throw ConfigError("word capacity n must be at least 1");
  if (config.m == 0) throw ConfigError("word length m must be at least 1");
}

// Calls set(slice, column, channel) for every hot cell of the sentence tensor.
template <class SetFn>
void for_each_hot_cell(const TokenizedSentence& sent, const EncoderConfig& config, SetFn&& set) {
  const std::size_t m = config.m;
  const std::size_t words = std::min(config.n, sent.size());
  std::vector<std::string> kept;
  kept.reserve(words);
  for (std::size_t i = 0; i < words; ++i) kept.push_back(sent.words[i].substr(0, m));

  // Each slice is the character stream to lay out plus its within-word padding.
  std::vector<std::string> streams;
  PaddingStrategy word_padding = config.strategy;
  if (config.strategy == PaddingStrategy::kSerpentine) {
    word_padding = PaddingStrategy::kCyclic;
    for (const auto& s : serpentine_sequence(kept)) streams.push_back(s.stream());
  } else {
    streams = std::move(kept);
  }

  const SlicePadding plan =
      plan_sentence_padding(streams.size(), config.slices(), config.strategy);
  for (std::size_t k = 0; k < streams.size(); ++k) {
    const std::size_t slice = plan.left + k;
    const PaddedWordLayout layout = pad_word(streams[k], m, word_padding);
    for (std::size_t j = 0; j < m; ++j) {
      const auto c = layout.columns[j];
      if (!c) continue;
      set(slice, j, CharVocab::index_of(*c));
      if (config.use_position) set(slice, j, CharVocab::kSize + j);
    }
  }
}

}  // namespace

SentTensor sentence_tensor(const TokenizedSentence& sent, const EncoderConfig& config) {
  check_config(config);
  const std::size_t m = config.m;
  const std::size_t channels = config.channels();
  SentTensor out{Tensor({config.slices(), m, channels}), config.strategy, config.use_position};
  double* data = out.values.raw();
  for_each_hot_cell(sent, config, [&](std::size_t s, std::size_t j, std::size_t c) {
    data[(s * m + j) * channels + c] = 1.0;
  });
  return out;
}

SentTensor position_channels(const SentTensor& tensor) {
  if (tensor.channels() != CharVocab::kSize) {
    throw ShapeError("position_channels expects " + std::to_string(CharVocab::kSize) +
                     " channels, got " + std::to_string(tensor.channels()));
  }
  const std::size_t slices = tensor.slices();
  const std::size_t m = tensor.m();
  const std::size_t in_c = CharVocab::kSize;
  const std::size_t out_c = in_c + m;
  SentTensor out{Tensor({slices, m, out_c}), tensor.strategy, true};
  for (std::size_t s = 0; s < slices; ++s) {
    for (std::size_t j = 0; j < m; ++j) {
      const double* src = tensor.values.raw() + (s * m + j) * in_c;
      double* dst = out.values.raw() + (s * m + j) * out_c;
      bool any = false;
      for (std::size_t c = 0; c < in_c; ++c) {
        dst[c] = src[c];
        any = any || src[c] != 0.0;
      }
      if (any) dst[in_c + j] = 1.0;
    }
  }
  return out;
}

Tensor encode_batch(std::span<const TokenizedSentence> batch, const EncoderConfig& config) {
  check_config(config);
  if (batch.empty()) throw ConfigError("cannot encode an empty batch");
  const std::size_t slices = config.slices();
  const std::size_t m = config.m;
  const std::size_t channels = config.channels();
  Tensor out({batch.size(), channels, m, slices});
  const std::size_t per_sample = channels * m * slices;
  for (std::size_t b = 0; b < batch.size(); ++b) {
    double* data = out.raw() + b * per_sample;
    for_each_hot_cell(batch[b], config, [&](std::size_t s, std::size_t j, std::size_t c) {
      data[(c * m + j) * slices + s] = 1.0;
    });
  }
  return out;
}

namespace {

constexpr std::string_view kDumpMagic = "s2m1";

void put_f64(std::ostream& os, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xffu);
  os.write(bytes, 8);
}

double get_f64(std::istream& is) {
  unsigned char bytes[8];
  if (!is.read(reinterpret_cast<char*>(bytes), 8)) throw DataError("batch dump truncated");
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | bytes[i];
  return std::bit_cast<double>(bits);
}

}  // namespace

void write_batch_dump(std::ostream& os, std::span<const SentTensor> tensors) {
  if (tensors.empty()) throw ConfigError("nothing to dump");
  const Shape& shape = tensors.front().values.shape();
  for (const auto& t : tensors) {
    if (t.values.shape() != shape) throw ShapeError("batch dump requires uniform tensor shapes");
  }
  os << kDumpMagic << ' ' << shape[0] << ' ' << shape[1] << ' ' << shape[2] << ' '
     << tensors.size() << '\n';
  for (const auto& t : tensors) {
    for (double v : t.values.data()) put_f64(os, v);
  }
}

std::vector<SentTensor> read_batch_dump(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw DataError("batch dump: missing header");
  std::istringstream hs(header);
  std::string magic;
  std::size_t slices = 0, m = 0, channels = 0, count = 0;
  if (!(hs >> magic >> slices >> m >> channels >> count) || magic != kDumpMagic) {
    throw DataError("batch dump: bad header '" + header + "'");
  }
  if (channels != CharVocab::kSize && channels != CharVocab::kSize + m) {
    throw DataError("batch dump: unexpected channel count " + std::to_string(channels));
  }
  std::vector<SentTensor> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    SentTensor t{Tensor({slices, m, channels}), PaddingStrategy::kSerpentine,
                 channels != CharVocab::kSize};
    for (double& v : t.values.data()) v = get_f64(is);
    out.push_back(std::move(t));
  }
  if (is.peek() != std::char_traits<char>::eof()) throw DataError("batch dump: trailing bytes");
  return out;
}

}  // namespace s2m
