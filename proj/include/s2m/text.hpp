// SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace s2m {

/// Fixed 26-letter character inventory. Index of 'a' is 0, 'z' is 25.
/// The word separator is deliberately absent.
class CharVocab {
 public:
  static constexpr std::size_t kSize = 26;

  static constexpr bool contains(char c) noexcept { return c >= 'a' && c <= 'z'; }
  /// Throws std::out_of_range for symbols outside 'a'..'z'.
  static std::size_t index_of(char c);
  static constexpr char symbol(std::size_t index) noexcept {
    return static_cast<char>('a' + index);
  }
  static constexpr std::size_t size() noexcept { return kSize; }
};

/// Character inventory of the character-level baseline: the 26 letters plus
/// the separator (space) at index 26.
class BaselineCharVocab {
 public:
  static constexpr std::size_t kSize = 27;
  static constexpr char kSeparator = ' ';
  static constexpr std::size_t kSeparatorIndex = 26;

  static std::size_t index_of(char c);
  static constexpr std::size_t size() noexcept { return kSize; }
};

struct TokenizedSentence {
  std::vector<std::string> words;
  std::string source_id;

  std::size_t size() const noexcept { return words.size(); }
  bool operator==(const TokenizedSentence&) const = default;
};

/// Lower-case letters survive, upper-case letters are lowered and every
/// other byte becomes a space. Space runs collapse; ends are trimmed.
std::string normalize(std::string_view text);

/// Splits normalized text on spaces.
TokenizedSentence tokenize(std::string_view normalized, std::string source_id = {});

/// normalize + tokenize.
TokenizedSentence sentence_from_text(std::string_view text, std::string source_id = {});

/// Frequency-ordered word inventory with a trailing unk entry.
class WordVocab {
 public:
  static constexpr std::string_view kUnkToken = "<unk>";

  struct Entry {
    std::string word;
    std::uint64_t count = 0;
  };

  WordVocab() = default;
  /// Builds from already-ordered entries; the unk entry must be last.
  explicit WordVocab(std::vector<Entry> entries);

  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t unk_index() const noexcept { return entries_.size() - 1; }
  /// Index of `word`, or unk_index() when absent.
  std::size_t index_of(std::string_view word) const;
  std::optional<std::size_t> find(std::string_view word) const;
  const std::string& word(std::size_t index) const { return entries_.at(index).word; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  /// `index<TAB>word<TAB>count` per line.
  void write(std::ostream& os) const;
  static WordVocab read(std::istream& is);

  bool operator==(const WordVocab& other) const;

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Keeps the (size_cap - 1) most frequent words, ties broken
/// lexicographically, then appends unk. Throws ConfigError when size_cap < 2
/// and DataError for an empty corpus.
WordVocab build_word_vocab(std::span<const TokenizedSentence> corpus, std::size_t size_cap);

}  // namespace s2m
