// SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "s2m/padding.hpp"
#include "s2m/tensor.hpp"
#include "s2m/text.hpp"

namespace s2m {

// ---------------------------------------------------------------------------
// Word-level baseline representation
// ---------------------------------------------------------------------------

/// One-hot over the word vocabulary; absent words hit the unk index.
Tensor word_one_hot(std::string_view word, const WordVocab& vocab);

/// Column of `embedding` ([d, |V|]) selected by the one-hot `one_hot`.
/// Throws ShapeError on a length mismatch or a vector that is not one-hot.
Tensor word_embed(const Tensor& one_hot, const Tensor& embedding);

/// [d, n] matrix of embedded words; columns past the sentence are zero and
/// sentences longer than n keep their first n words.
Tensor sentence_word_matrix(const TokenizedSentence& sent, const WordVocab& vocab,
                            const Tensor& embedding, std::size_t n);

// ---------------------------------------------------------------------------
// Character-level baseline representation
// ---------------------------------------------------------------------------

/// One-hot over the 26-letter vocabulary; throws ConfigError for other symbols.
Tensor char_one_hot(char c);

/// [27, m_s] one-hot matrix of the sentence's characters with single
/// separators between words, zero-padded or trimmed to m_s columns.
Tensor sentence_char_matrix(const TokenizedSentence& sent, std::size_t m_s);

// ---------------------------------------------------------------------------
// Sent2Matrix
// ---------------------------------------------------------------------------

/// [26, m] one-hot matrix of one padded word. Words longer than m keep their
/// first m characters. The serpentine strategy pads words cyclically.
Tensor word_matrix(std::string_view word, std::size_t m, PaddingStrategy strategy);

struct EncoderConfig {
  std::size_t n = 0;  ///< word capacity
  std::size_t m = 0;  ///< characters per word
  PaddingStrategy strategy = PaddingStrategy::kSerpentine;
  bool use_position = false;

  std::size_t slices() const { return slice_capacity(n, strategy); }
  std::size_t channels() const { return CharVocab::kSize + (use_position ? m : 0); }
};

/// Sentence tensor laid out slice x column x channel.
struct SentTensor {
  Tensor values;  ///< [slices, m, channels]
  PaddingStrategy strategy = PaddingStrategy::kSerpentine;
  bool use_position = false;

  std::size_t slices() const { return values.dim(0); }
  std::size_t m() const { return values.dim(1); }
  std::size_t channels() const { return values.dim(2); }
};

/// Stacks padded word matrices into a sentence tensor. Sentences longer than
/// n keep their first n words; short sentences are centered between zero
/// slices (phase-preserving for serpentine).
SentTensor sentence_tensor(const TokenizedSentence& sent, const EncoderConfig& config);

/// Appends m one-hot position channels; cells with no character stay zero.
/// Input must carry exactly 26 channels.
SentTensor position_channels(const SentTensor& tensor);

/// Network input for a batch: [batch, channels, m, slices], i.e. channel,
/// character axis, word axis. Entry (b, c, j, s) equals
/// sentence_tensor(batch[b]).values(s, j, c).
Tensor encode_batch(std::span<const TokenizedSentence> batch, const EncoderConfig& config);

// ---------------------------------------------------------------------------
// Encoded-batch dump
// ---------------------------------------------------------------------------

/// Text header `s2m1 <slices> <m> <channels> <count>` then little-endian
/// doubles, slice-major, one column at a time, channel innermost.
void write_batch_dump(std::ostream& os, std::span<const SentTensor> tensors);
std::vector<SentTensor> read_batch_dump(std::istream& is);

}  // namespace s2m
