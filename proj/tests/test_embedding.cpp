// SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
//
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "s2m/embedding.hpp"
#include "s2m/error.hpp"

using namespace s2m;

namespace {

TokenizedSentence words(std::vector<std::string> w) { return TokenizedSentence{std::move(w), {}}; }

WordVocab abc_vocab() {
  return WordVocab({{"a", 2}, {"b", 1}, {std::string(WordVocab::kUnkToken), 0}});
}

// Reads column j of a [26, m] word matrix; '_' for an all-zero column.
std::string decode_word_matrix(const Tensor& wm) {
  std::string out;
  for (std::size_t j = 0; j < wm.dim(1); ++j) {
    char c = '_';
    for (std::size_t ch = 0; ch < 26; ++ch) {
      if (wm.at({ch, j}) == 1.0) c = CharVocab::symbol(ch);
    }
    out += c;
  }
  return out;
}

std::string decode_slice(const Tensor& t, std::size_t slice) {
  std::string out;
  for (std::size_t j = 0; j < t.dim(1); ++j) {
    char c = '_';
    for (std::size_t ch = 0; ch < 26; ++ch) {
      if (t.at({slice, j, ch}) == 1.0) c = CharVocab::symbol(ch);
    }
    out += c;
  }
  return out;
}

}  // namespace

TEST_CASE("word one-hot and embedding") {
  const WordVocab v = abc_vocab();
  CHECK(word_one_hot("a", v).data()[0] == 1.0);
  CHECK(word_one_hot("b", v).data()[1] == 1.0);
  const Tensor unk = word_one_hot("zzz", v);
  CHECK(unk == Tensor({3}, {0, 0, 1}));

  Tensor eye({3, 3});
  for (std::size_t i = 0; i < 3; ++i) eye.at({i, i}) = 1.0;
  CHECK(word_embed(word_one_hot("b", v), eye) == Tensor({3}, {0, 1, 0}));

  Tensor m({2, 3});
  m.at({0, 0}) = 2.0;
  m.at({1, 0}) = -1.0;
  CHECK(word_embed(word_one_hot("a", v), m) == Tensor({2}, {2, -1}));
  CHECK_THROWS_AS(word_embed(Tensor({4}), m), ShapeError);
}

TEST_CASE("word embed equals a dense matvec") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 1 + rng() % 6, vsize = 2 + rng() % 8;
    Tensor m({d, vsize});
    for (double& x : m.data()) x = g(rng);
    Tensor u({vsize});
    const std::size_t hot = rng() % vsize;
    u[hot] = 1.0;
    const Tensor p = word_embed(u, m);
    for (std::size_t r = 0; r < d; ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < vsize; ++c) acc += m.at({r, c}) * u[c];
      CHECK(p[r] == acc);
    }
  }
}

TEST_CASE("sentence word matrix pads and trims") {
  const WordVocab v = abc_vocab();
  Tensor eye({3, 3});
  for (std::size_t i = 0; i < 3; ++i) eye.at({i, i}) = 1.0;
  const Tensor two = sentence_word_matrix(words({"a", "b"}), v, eye, 4);
  CHECK(two.shape() == Shape{3, 4});
  for (std::size_t r = 0; r < 3; ++r) {
    CHECK(two.at({r, 2}) == 0.0);
    CHECK(two.at({r, 3}) == 0.0);
  }
  const Tensor trimmed = sentence_word_matrix(words({"b", "a", "a", "a", "b"}), v, eye, 4);
  CHECK(trimmed.at({1, 0}) == 1.0);
  CHECK(trimmed.at({0, 3}) == 1.0);
  const Tensor three = sentence_word_matrix(words({"a", "zz", "b"}), v, eye, 3);
  CHECK(three.at({0, 0}) == 1.0);
  CHECK(three.at({2, 1}) == 1.0);
  CHECK(three.at({1, 2}) == 1.0);
}

TEST_CASE("char one-hot and char matrix") {
  CHECK(char_one_hot('a')[0] == 1.0);
  CHECK(char_one_hot('z')[25] == 1.0);
  CHECK(char_one_hot('z').size() == 26);
  CHECK_THROWS_AS(char_one_hot('3'), ConfigError);

  const Tensor t = sentence_char_matrix(words({"a", "b"}), 3);
  CHECK(t.shape() == Shape{27, 3});
  CHECK(t.at({0, 0}) == 1.0);
  CHECK(t.at({26, 1}) == 1.0);
  CHECK(t.at({1, 2}) == 1.0);
  const Tensor padded = sentence_char_matrix(words({"a", "b"}), 5);
  double tail = 0.0;
  for (std::size_t r = 0; r < 27; ++r) tail += padded.at({r, 3}) + padded.at({r, 4});
  CHECK(tail == 0.0);
  const Tensor cut = sentence_char_matrix(words({"abcd"}), 2);
  CHECK(cut.at({0, 0}) == 1.0);
  CHECK(cut.at({1, 1}) == 1.0);
}

TEST_CASE("word matrix layouts") {
  for (auto st : {PaddingStrategy::kZero, PaddingStrategy::kCyclic, PaddingStrategy::kSerpentine}) {
    CHECK(decode_word_matrix(word_matrix("ab", 2, st)) == "ab");
  }
  CHECK(decode_word_matrix(word_matrix("cat", 7, PaddingStrategy::kCyclic)) == "catcatc");
  CHECK(decode_word_matrix(word_matrix("cat", 7, PaddingStrategy::kZero)) == "__cat__");
}

TEST_CASE("cyclic decode round-trips") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 500; ++i) {
    const std::size_t m = 1 + rng() % 18;
    std::string w(1 + rng() % m, 'a');
    for (char& c : w) c = static_cast<char>('a' + rng() % 26);
    CHECK(decode_word_matrix(word_matrix(w, m, PaddingStrategy::kCyclic)).substr(0, w.size()) == w);
  }
}

TEST_CASE("sentence tensor") {
  const auto serp = sentence_tensor(words({"the", "cat", "sat"}), {3, 3, PaddingStrategy::kSerpentine, false});
  REQUIRE(serp.values.shape() == Shape{4, 3, 26});
  CHECK(decode_slice(serp.values, 0) == "the");
  CHECK(decode_slice(serp.values, 1) == "tac");
  CHECK(decode_slice(serp.values, 2) == "cat");
  CHECK(decode_slice(serp.values, 3) == "tas");

  const auto zero = sentence_tensor(words({"hi"}), {4, 2, PaddingStrategy::kZero, false});
  REQUIRE(zero.values.shape() == Shape{4, 2, 26});
  CHECK(decode_slice(zero.values, 0) == "__");
  CHECK(decode_slice(zero.values, 1) == "hi");
  CHECK(decode_slice(zero.values, 2) == "__");
  CHECK(decode_slice(zero.values, 3) == "__");

  const auto empty = sentence_tensor(words({}), {3, 4, PaddingStrategy::kSerpentine, false});
  for (double x : empty.values.data()) CHECK(x == 0.0);

  const auto trimmed = sentence_tensor(words({"abcdef", "g"}), {2, 3, PaddingStrategy::kSerpentine, false});
  CHECK(decode_slice(trimmed.values, 0) == "abc");
  CHECK(decode_slice(trimmed.values, 1) == "ggg");
}

TEST_CASE("position channels") {
  const auto ab = sentence_tensor(words({"ab"}), {1, 2, PaddingStrategy::kZero, true});
  REQUIRE(ab.channels() == 28);
  CHECK(ab.values.at({0, 0, 26}) == 1.0);
  CHECK(ab.values.at({0, 0, 27}) == 0.0);
  CHECK(ab.values.at({0, 1, 27}) == 1.0);

  const auto i3 = sentence_tensor(words({"i"}), {1, 3, PaddingStrategy::kCyclic, true});
  for (std::size_t j = 0; j < 3; ++j) {
    for (std::size_t p = 0; p < 3; ++p) CHECK(i3.values.at({0, j, 26 + p}) == (p == j ? 1.0 : 0.0));
  }

  const auto z = sentence_tensor(words({"a"}), {3, 3, PaddingStrategy::kZero, false});
  const auto zp = position_channels(z);
  for (std::size_t s = 0; s < 3; ++s) {
    for (std::size_t j = 0; j < 3; ++j) {
      double chars = 0.0, pos = 0.0;
      for (std::size_t c = 0; c < 26; ++c) chars += zp.values.at({s, j, c});
      for (std::size_t c = 26; c < 29; ++c) pos += zp.values.at({s, j, c});
      CHECK(pos == chars);
    }
  }
  CHECK_THROWS(position_channels(zp));
}

TEST_CASE("encoding is total over pipeline output and channel sums stay in {0,1}") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 300; ++i) {
    std::string raw(rng() % 120, ' ');
    for (char& c : raw) c = static_cast<char>(rng() % 128);
    const TokenizedSentence s = sentence_from_text(raw);
    for (auto st : {PaddingStrategy::kZero, PaddingStrategy::kCyclic, PaddingStrategy::kSerpentine}) {
      const EncoderConfig cfg{1 + rng() % 12, 1 + rng() % 10, st, (rng() & 1) != 0};
      const SentTensor t = sentence_tensor(s, cfg);
      REQUIRE(t.values.shape() == Shape{cfg.slices(), cfg.m, cfg.channels()});
      for (std::size_t a = 0; a < t.slices(); ++a) {
        for (std::size_t j = 0; j < t.m(); ++j) {
          double sum = 0.0;
          for (std::size_t c = 0; c < 26; ++c) sum += t.values.at({a, j, c});
          CHECK((sum == 0.0 || sum == 1.0));
          if (st != PaddingStrategy::kZero && sum == 0.0) {
            // Cyclic layouts fill every column of a word slice.
            for (std::size_t jj = 0; jj < t.m(); ++jj) {
              double other = 0.0;
              for (std::size_t c = 0; c < 26; ++c) other += t.values.at({a, jj, c});
              CHECK(other == 0.0);
            }
          }
        }
      }
    }
  }
}

TEST_CASE("encode batch layout and dump round-trip") {
  const std::vector<TokenizedSentence> batch{words({"the", "cat"}), words({"a"})};
  const EncoderConfig cfg{3, 4, PaddingStrategy::kSerpentine, false};
  const Tensor x = encode_batch(batch, cfg);
  REQUIRE(x.shape() == Shape{2, 26, 4, 4});
  const SentTensor t0 = sentence_tensor(batch[0], cfg);
  for (std::size_t s = 0; s < 4; ++s) {
    for (std::size_t j = 0; j < 4; ++j) {
      for (std::size_t c = 0; c < 26; ++c) CHECK(x.at({0, c, j, s}) == t0.values.at({s, j, c}));
    }
  }

  std::vector<SentTensor> ts{t0, sentence_tensor(batch[1], cfg)};
  std::stringstream ss;
  write_batch_dump(ss, ts);
  CHECK(ss.str().rfind("s2m1 4 4 26 2\n", 0) == 0);
  const auto back = read_batch_dump(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[0].values == ts[0].values);
  CHECK(back[1].values == ts[1].values);
}
