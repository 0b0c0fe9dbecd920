// SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
//
// SPDX-License-Identifier: Apache-2.0

#include "s2m/text.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

#include "s2m/error.hpp"

namespace s2m {

std::size_t CharVocab::index_of(char c) {
  if (!contains(c)) {
    throw std::out_of_range("character not in vocabulary: code " +
                            std::to_string(static_cast<unsigned char>(c)));
  }
  return static_cast<std::size_t>(c - 'a');
}

std::size_t BaselineCharVocab::index_of(char c) {
  if (c == kSeparator) return kSeparatorIndex;
  return CharVocab::index_of(c);
}

std::string normalize(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char raw : text) {
    char c = raw;
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (CharVocab::contains(c)) {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      out.push_back(c);
    } else {
      pending_space = true;
    }
  }
  return out;
}

TokenizedSentence tokenize(std::string_view normalized, std::string source_id) {
  TokenizedSentence sent;
  sent.source_id = std::move(source_id);
  std::size_t pos = 0;
  while (pos < normalized.size()) {
    const std::size_t start = normalized.find_first_not_of(' ', pos);
    if (start == std::string_view::npos) break;
    std::size_t end = normalized.find(' ', start);
    if (end == std::string_view::npos) end = normalized.size();
    sent.words.emplace_back(normalized.substr(start, end - start));
    pos = end;
  }
  return sent;
}

TokenizedSentence sentence_from_text(std::string_view text, std::string source_id) {
  return tokenize(normalize(text), std::move(source_id));
}

WordVocab::WordVocab(std::vector<Entry> entries) : entries_(std::move(entries)) {
  if (entries_.empty() || entries_.back().word != kUnkToken) {
    throw DataError("word vocabulary must end with the unk entry");
  }
  index_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!index_.emplace(entries_[i].word, i).second) {
      throw DataError("duplicate word in vocabulary: " + entries_[i].word);
    }
  }
}

std::optional<std::size_t> WordVocab::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t WordVocab::index_of(std::string_view word) const {
  return find(word).value_or(unk_index());
}

void WordVocab::write(std::ostream& os) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    os << i << '\t' << entries_[i].word << '\t' << entries_[i].count << '\n';
  }
}

WordVocab WordVocab::read(std::istream& is) {
  std::vector<Entry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) {
      throw DataError("vocabulary line " + std::to_string(line_no) + ": expected 3 fields");
    }
    try {
      const auto index = std::stoull(line.substr(0, t1));
      if (index != entries.size()) {
        throw DataError("vocabulary line " + std::to_string(line_no) + ": index out of order");
      }
      entries.push_back({line.substr(t1 + 1, t2 - t1 - 1), std::stoull(line.substr(t2 + 1))});
    } catch (const std::logic_error&) {
      throw DataError("vocabulary line " + std::to_string(line_no) + ": bad number");
    }
  }
  return WordVocab(std::move(entries));
}

bool WordVocab::operator==(const WordVocab& other) const {
  if (entries_.size() != other.entries_.size()) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].word != other.entries_[i].word ||
        entries_[i].count != other.entries_[i].count) {
      return false;
    }
  }
  return true;
}

WordVocab build_word_vocab(std::span<const TokenizedSentence> corpus, std::size_t size_cap) {
  if (size_cap < 2) throw ConfigError("word vocabulary size cap must be at least 2");
  std::map<std::string, std::uint64_t, std::less<>> counts;
  for (const auto& sent : corpus) {
    for (const auto& w : sent.words) ++counts[w];
  }
  if (counts.empty()) throw DataError("cannot build a word vocabulary from an empty corpus");

  std::vector<WordVocab::Entry> ranked;
  ranked.reserve(counts.size());
  for (const auto& [word, count] : counts) ranked.push_back({word, count});
  // std::map iteration is lexicographic, so a stable sort by count keeps ties ordered.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.count > b.count; });

  const std::size_t keep = std::min(ranked.size(), size_cap - 1);
  std::uint64_t unk_count = 0;
  for (std::size_t i = keep; i < ranked.size(); ++i) unk_count += ranked[i].count;
  ranked.resize(keep);
  ranked.push_back({std::string(WordVocab::kUnkToken), unk_count});
  return WordVocab(std::move(ranked));
}

}  // namespace s2m
