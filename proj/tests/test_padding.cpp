// SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
//
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "s2m/error.hpp"
#include "s2m/padding.hpp"

using namespace s2m;

namespace {

using Words = std::vector<std::string>;

std::string random_word(std::mt19937_64& rng, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::uniform_int_distribution<int> ch('a', 'z');
  std::string w(len(rng), 'a');
  for (char& c : w) c = static_cast<char>(ch(rng));
  return w;
}

Words random_sentence(std::mt19937_64& rng, std::size_t max_words, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> count(1, max_words);
  Words w(count(rng));
  for (auto& x : w) x = random_word(rng, max_len);
  return w;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("pad_zero centers with the extra pad on the right") {
  CHECK(pad_zero("cat", 7).render() == "__cat__");
  CHECK(pad_zero("cat", 6).render() == "_cat__");
  CHECK(pad_zero("abcdef", 6).render() == "abcdef");
  CHECK(pad_zero("cat", 6).pad_count() == 3);
  CHECK_THROWS_AS(pad_zero("", 3), ConfigError);
  CHECK_THROWS_AS(pad_zero("abcd", 3), ConfigError);
}

TEST_CASE("pad_cyclic repeats the word") {
  CHECK(pad_cyclic("i", 4).render() == "iiii");
  CHECK(pad_cyclic("cat", 7).render() == "catcatc");
  CHECK(pad_cyclic("cat", 3).render() == "cat");
  CHECK(pad_word("abcdefgh", 3, PaddingStrategy::kZero).render() == "abc");
}

TEST_CASE("word padding properties") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const std::size_t m = 1 + rng() % 20;
    const std::string w = random_word(rng, m);
    const auto z = pad_zero(w, m);
    const auto c = pad_cyclic(w, m);
    REQUIRE(z.columns.size() == m);
    CHECK(z.pad_count() == m - w.size());
    CHECK(c.pad_count() == 0);
    const std::size_t left = (m - w.size()) / 2;
    for (std::size_t j = 0; j < m; ++j) {
      CHECK(c.columns[j] == w[j % w.size()]);
      if (j >= left && j < left + w.size()) {
        CHECK(z.columns[j] == w[j - left]);
      } else {
        CHECK_FALSE(z.columns[j].has_value());
      }
    }
  }
}

TEST_CASE("serpentine sequence") {
  const Words s{"the", "cat", "sat"};
  const auto seq = serpentine_sequence(s);
  REQUIRE(seq.size() == 4);
  std::vector<std::string> streams;
  for (const auto& x : seq) streams.push_back(x.stream());
  CHECK(streams == std::vector<std::string>{"the", "tac", "cat", "tas"});

  const Words ab{"a", "b"};
  const auto two = serpentine_sequence(ab);
  REQUIRE(two.size() == 2);
  CHECK(two[0] == SerpentineSlice{"a", false});
  CHECK(two[1] == SerpentineSlice{"b", true});

  const Words hi{"hi"};
  const auto one = serpentine_sequence(hi);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == SerpentineSlice{"hi", false});
}

TEST_CASE("serpentine length and parity laws") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 1000; ++i) {
    const Words s = random_sentence(rng, 30, 10);
    const auto seq = serpentine_sequence(s);
    if (s.size() < 2) continue;
    REQUIRE(seq.size() == 2 * (s.size() - 1));
    CHECK(seq[0] == SerpentineSlice{s[0], false});
    for (std::size_t k = 1; k < s.size(); ++k) {
      CHECK(seq[2 * k - 1] == SerpentineSlice{s[k], true});
      if (k + 1 < s.size()) CHECK(seq[2 * k] == SerpentineSlice{s[k], false});
    }
    for (std::size_t j = 0; j < seq.size(); ++j) CHECK(seq[j].reversed == (j % 2 == 1));
  }
}

TEST_CASE("sentence slice padding") {
  auto plan = plan_sentence_padding(4, 8, PaddingStrategy::kZero);
  CHECK(plan.left == 2);
  CHECK(plan.right == 2);
  plan = plan_sentence_padding(4, 7, PaddingStrategy::kSerpentine);
  CHECK(plan.left == 0);
  CHECK(plan.right == 3);
  plan = plan_sentence_padding(1, 4, PaddingStrategy::kZero);
  CHECK(plan.left == 1);
  CHECK(plan.right == 2);
  plan = plan_sentence_padding(0, 4, PaddingStrategy::kCyclic);
  CHECK(plan.left + plan.right == 4);
  CHECK_THROWS_AS(plan_sentence_padding(5, 4, PaddingStrategy::kZero), ConfigError);

  const std::vector<int> none;
  const auto empty = pad_sentence_slices<int>(none, 4, PaddingStrategy::kZero);
  CHECK(empty.size() == 4);
  CHECK(std::none_of(empty.begin(), empty.end(), [](const auto& x) { return x.has_value(); }));
}

TEST_CASE("phase law: normal-order words stay on even indices after padding") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 2 + rng() % 30;
    Words s = random_sentence(rng, n, 8);
    const auto seq = serpentine_sequence(s);
    const std::size_t target = slice_capacity(n, PaddingStrategy::kSerpentine);
    const auto padded = pad_sentence_slices<SerpentineSlice>(seq, target, PaddingStrategy::kSerpentine);
    REQUIRE(padded.size() == target);
    for (std::size_t j = 0; j < padded.size(); ++j) {
      if (padded[j]) CHECK(padded[j]->reversed == (j % 2 == 1));
    }
    // Every stride-2 window of width 2 pairs x_i with reversed x_{i+1}.
    for (std::size_t j = 0; j + 1 < padded.size(); j += 2) {
      if (padded[j] && padded[j + 1]) {
        CHECK_FALSE(padded[j]->reversed);
        CHECK(padded[j + 1]->reversed);
      }
    }
  }
}

TEST_CASE("slice capacity") {
  CHECK(slice_capacity(49, PaddingStrategy::kSerpentine) == 96);
  CHECK(slice_capacity(49, PaddingStrategy::kZero) == 49);
  CHECK(slice_capacity(1, PaddingStrategy::kSerpentine) == 1);
  CHECK_THROWS_AS(slice_capacity(0, PaddingStrategy::kZero), ConfigError);
}

TEST_CASE("fold render") {
  const Words ab{"ab", "cd"};
  CHECK(fold_render(ab, 2) == "ab\ndc\n");
  const Words one{"hi"};
  CHECK(fold_render(one, 2) == "hi\n");
  const Words s{"the", "cat", "sat"};
  CHECK(fold_render(s, 3) == "the\ntac\ncat\ntas\n");
}

TEST_CASE("fold continuity reproduces the repeated sentence") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 300; ++i) {
    const std::size_t m = 3 + rng() % 10;
    const Words s = random_sentence(rng, 12, m);
    if (s.size() < 2) continue;
    const auto rows = lines(fold_render(s, m));
    REQUIRE(rows.size() == 2 * (s.size() - 1));
    std::string read;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      // Only the first len characters carry the word; the rest is cyclic fill.
      const std::size_t len = s[(r + 1) / 2].size();
      std::string part = rows[r].substr(0, len);
      if (r % 2 == 1) std::reverse(part.begin(), part.end());
      read += part;
    }
    std::string expect = s.front();
    for (std::size_t k = 1; k + 1 < s.size(); ++k) expect += s[k] + s[k];
    expect += s.back();
    CHECK(read == expect);
  }
}

TEST_CASE("strategy names") {
  for (auto st : {PaddingStrategy::kZero, PaddingStrategy::kCyclic, PaddingStrategy::kSerpentine}) {
    CHECK(parse_padding_strategy(to_string(st)) == st);
  }
  CHECK_THROWS_AS(parse_padding_strategy("diagonal"), ConfigError);
}
