// SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
//
// SPDX-License-Identifier: Apache-2.0

#include "s2m/padding.hpp"

#include <algorithm>

#include "s2m/error.hpp"

namespace s2m {

std::string_view to_string(PaddingStrategy strategy) noexcept {
  switch (strategy) {
    case PaddingStrategy::kZero: return "zero";
    case PaddingStrategy::kCyclic: return "cyclic";
    case PaddingStrategy::kSerpentine: return "serpentine";
  }
  return "unknown";
}

PaddingStrategy parse_padding_strategy(std::string_view name) {
  if (name == "zero") return PaddingStrategy::kZero;
  if (name == "cyclic") return PaddingStrategy::kCyclic;
  if (name == "serpentine") return PaddingStrategy::kSerpentine;
  throw ConfigError("unknown padding strategy '" + std::string(name) +
                    "' (expected zero, cyclic or serpentine)");
}

std::size_t PaddedWordLayout::pad_count() const {
  return static_cast<std::size_t>(
      std::count_if(columns.begin(), columns.end(), [](const auto& c) { return !c; }));
}

std::string PaddedWordLayout::render(char pad_char) const {
  std::string out;
  out.reserve(columns.size());
  for (const auto& c : columns) out.push_back(c.value_or(pad_char));
  return out;
}

namespace {

void check_word_fits(std::string_view word, std::size_t m) {
  if (word.empty()) throw ConfigError("cannot pad an empty word");
  if (word.size() > m) {
    throw ConfigError("word '" + std::string(word) + "' longer than m=" + std::to_string(m));
  }
}

}  // namespace

PaddedWordLayout pad_zero(std::string_view word, std::size_t m) {
  check_word_fits(word, m);
  PaddedWordLayout layout;
  layout.strategy = PaddingStrategy::kZero;
  layout.columns.resize(m);
  const std::size_t left = (m - word.size()) / 2;
  for (std::size_t i = 0; i < word.size(); ++i) layout.columns[left + i] = word[i];
  return layout;
}

PaddedWordLayout pad_cyclic(std::string_view word, std::size_t m) {
  check_word_fits(word, m);
  PaddedWordLayout layout;
  layout.strategy = PaddingStrategy::kCyclic;
  layout.columns.reserve(m);
  for (std::size_t j = 0; j < m; ++j) layout.columns.emplace_back(word[j % word.size()]);
  return layout;
}

PaddedWordLayout pad_word(std::string_view word, std::size_t m, PaddingStrategy strategy) {
  const std::string_view trimmed = word.substr(0, m);
  if (strategy == PaddingStrategy::kZero) return pad_zero(trimmed, m);
  return pad_cyclic(trimmed, m);
}

std::string SerpentineSlice::stream() const {
  return reversed ? std::string(word.rbegin(), word.rend()) : word;
}

std::vector<SerpentineSlice> serpentine_sequence(std::span<const std::string> words) {
  std::vector<SerpentineSlice> out;
  if (words.empty()) return out;
  if (words.size() == 1) {
    out.push_back({words[0], false});
    return out;
  }
  out.reserve(2 * (words.size() - 1));
  out.push_back({words[0], false});
  for (std::size_t i = 1; i < words.size(); ++i) {
    out.push_back({words[i], true});
    if (i + 1 < words.size()) out.push_back({words[i], false});
  }
  return out;
}

SlicePadding plan_sentence_padding(std::size_t count, std::size_t target,
                                   PaddingStrategy strategy) {
  if (count > target) {
    throw ConfigError(std::to_string(count) + " slices exceed the capacity of " +
                      std::to_string(target));
  }
  const std::size_t total = target - count;
  std::size_t left = total / 2;
  if (strategy == PaddingStrategy::kSerpentine) left -= left % 2;
  return {left, total - left};
}

std::size_t slice_capacity(std::size_t n, PaddingStrategy strategy) {
  if (n == 0) throw ConfigError("word capacity n must be at least 1");
  if (strategy != PaddingStrategy::kSerpentine) return n;
  // n = 1 still needs one slice for the degenerate single-word sentence.
  return std::max<std::size_t>(1, 2 * (n - 1));
}

std::string fold_render(std::span<const std::string> words, std::size_t m) {
  if (m == 0) throw ConfigError("m must be at least 1");
  std::vector<std::string> trimmed;
  trimmed.reserve(words.size());
  for (const auto& w : words) trimmed.push_back(w.substr(0, m));
  std::string out;
  for (const auto& slice : serpentine_sequence(trimmed)) {
    out += pad_cyclic(slice.stream(), m).render();
    out.push_back('\n');
  }
  return out;
}

std::string render_word_grid(std::span<const std::string> words, std::size_t m,
                             PaddingStrategy strategy) {
  if (strategy == PaddingStrategy::kSerpentine) return fold_render(words, m);
  if (m == 0) throw ConfigError("m must be at least 1");
  std::string out;
  for (const auto& w : words) {
    out += pad_word(w, m, strategy).render();
    out.push_back('\n');
  }
  return out;
}

}  // namespace s2m
