// SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace s2m {

enum class PaddingStrategy { kZero, kCyclic, kSerpentine };

std::string_view to_string(PaddingStrategy strategy) noexcept;
/// Accepts "zero", "cyclic" or "serpentine"; throws ConfigError otherwise.
PaddingStrategy parse_padding_strategy(std::string_view name);

/// One word laid out over m columns. A disengaged column is padding.
struct PaddedWordLayout {
  std::vector<std::optional<char>> columns;
  PaddingStrategy strategy = PaddingStrategy::kZero;

  std::size_t pad_count() const;
  /// Columns as text, padding shown as `pad_char`.
  std::string render(char pad_char = '_') const;
};

/// Centers the word; left pad = floor((m - len) / 2), the extra column goes right.
/// Requires 1 <= len <= m.
PaddedWordLayout pad_zero(std::string_view word, std::size_t m);

/// Column j holds word[j mod len]. Requires 1 <= len <= m.
PaddedWordLayout pad_cyclic(std::string_view word, std::size_t m);

/// Zero or cyclic layout chosen by strategy (serpentine words use cyclic).
/// Words longer than m are trimmed to their first m characters.
PaddedWordLayout pad_word(std::string_view word, std::size_t m, PaddingStrategy strategy);

struct SerpentineSlice {
  std::string word;
  bool reversed = false;

  /// The characters in the order they are laid into the slice.
  std::string stream() const;
  bool operator==(const SerpentineSlice&) const = default;
};

/// x1, rev(x2), x2, rev(x3), x3, ..., rev(xn): length 2(n - 1) for n >= 2.
/// A single word yields one normal-order slice. Empty input yields nothing.
std::vector<SerpentineSlice> serpentine_sequence(std::span<const std::string> words);

/// Sentence-level padding plan: how many zero slices go before and after.
struct SlicePadding {
  std::size_t left = 0;
  std::size_t right = 0;
};

/// Splits (target - count) zero slices floor/ceil left/right. Under the
/// serpentine strategy the left count is rounded down to an even number so
/// normal-order slices keep even indices. Throws ConfigError if count > target.
SlicePadding plan_sentence_padding(std::size_t count, std::size_t target,
                                   PaddingStrategy strategy);

/// Applies plan_sentence_padding to a slice list; padding slices are
/// disengaged optionals.
template <class Slice>
std::vector<std::optional<Slice>> pad_sentence_slices(std::span<const Slice> slices,
                                                      std::size_t target,
                                                      PaddingStrategy strategy) {
  const SlicePadding plan = plan_sentence_padding(slices.size(), target, strategy);
  std::vector<std::optional<Slice>> out;
  out.reserve(target);
  out.resize(plan.left);
  for (const auto& s : slices) out.emplace_back(s);
  out.resize(target);
  return out;
}

/// Number of word slices a sentence tensor holds for word capacity n.
std::size_t slice_capacity(std::size_t n, PaddingStrategy strategy);

/// ASCII rendering of the serpentine fold: one row per slice, each word
/// cyclically padded to m, reversed rows drawn right-to-left so that reading
/// the rows boustrophedon-style gives one continuous character stream.
std::string fold_render(std::span<const std::string> words, std::size_t m);

/// fold_render for serpentine; otherwise one row per word in its zero or
/// cyclic layout, padding drawn as '_'.
std::string render_word_grid(std::span<const std::string> words, std::size_t m,
                             PaddingStrategy strategy);

}  // namespace s2m
