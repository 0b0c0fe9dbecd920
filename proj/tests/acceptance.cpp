// SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
//
// SPDX-License-Identifier: Apache-2.0

// Acceptance checks. Usage: s2m_acceptance [criterion...]; no argument runs
// all seven. Prints one PASS/FAIL line per criterion and exits nonzero if
// any fails. Criteria 4-6 read datasets from $S2M_DATA_DIR (default ./data).

#include <fmt/core.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "s2m/embedding.hpp"
#include "s2m/gradcheck.hpp"
#include "s2m/harness.hpp"
#include "s2m/kernels.hpp"
#include "synthetic.hpp"

using namespace s2m;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---- 1: encoding oracle suite ----------------------------------------------

Outcome encoding_suite() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2026);
  std::size_t failures = 0;
  auto expect = [&](bool ok) { failures += ok ? 0 : 1; };
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 2 + rng() % 40;
    const std::size_t m = 1 + rng() % 18;
    TokenizedSentence s;
    const std::size_t count = 1 + rng() % n;
    for (std::size_t k = 0; k < count; ++k) {
      std::string w(1 + rng() % 12, 'a');
      for (char& c : w) c = static_cast<char>('a' + rng() % 26);
      s.words.push_back(w);
    }
    const auto seq = serpentine_sequence(s.words);
    expect(count < 2 || seq.size() == 2 * (count - 1));
    const auto padded = pad_sentence_slices<SerpentineSlice>(
        seq, slice_capacity(n, PaddingStrategy::kSerpentine), PaddingStrategy::kSerpentine);
    for (std::size_t j = 0; j < padded.size(); ++j) {
      if (padded[j]) expect(padded[j]->reversed == (j % 2 == 1));
    }
    for (const auto& w : s.words) {
      const std::string word = w.substr(0, m);
      const Tensor wm = word_matrix(word, m, PaddingStrategy::kCyclic);
      std::string decoded;
      for (std::size_t j = 0; j < word.size(); ++j) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < 26; ++c) {
          if (wm.at({c, j}) > wm.at({best, j})) best = c;
        }
        decoded += CharVocab::symbol(best);
      }
      expect(decoded == word);
    }
    for (auto st : kAllStrategies) {
      const SentTensor t = sentence_tensor(s, {n, m, st, false});
      for (std::size_t a = 0; a < t.slices(); ++a) {
        for (std::size_t j = 0; j < m; ++j) {
          double sum = 0.0;
          for (std::size_t c = 0; c < 26; ++c) sum += t.values.at({a, j, c});
          expect(sum == 0.0 || sum == 1.0);
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  return {failures == 0 && secs < 10.0,
          fmt::format("{} failures over 1000 sentences, {:.2f}s (limit 10s)", failures, secs)};
}

// ---- 2: convolution equivalence --------------------------------------------

Outcome conv_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto fill = [&](Tensor t) {
    for (double& x : t.data()) x = u(rng);
    return t;
  };
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const bool one_d = trial % 2 == 1;
    const std::size_t c = 1 + rng() % 4, o = 1 + rng() % 5;
    const std::size_t h = one_d ? 1 : 1 + rng() % 10, w = 2 + rng() % 16;
    const std::size_t kh = one_d ? 1 : 1 + rng() % h, kw = 1 + rng() % std::min<std::size_t>(w, 5);
    const std::size_t sh = one_d ? 1 : 1 + rng() % 2, sw = 1 + rng() % 2;
    const Tensor x = fill(Tensor({c, h, w}));
    const Tensor f = fill(Tensor({o, c, kh, kw}));
    const Tensor b = fill(Tensor({o}));
    const Tensor y = one_d ? kernels::conv1d(x.reshaped({c, w}), f.reshaped({o, c, kw}), b, sw)
                           : kernels::conv2d(x, f, b, {sh, sw});
    const std::size_t oh = (h - kh) / sh + 1, ow = (w - kw) / sw + 1;
    if (y.size() != o * oh * ow) return {false, fmt::format("shape mismatch at trial {}", trial)};
    for (std::size_t q = 0; q < o; ++q)
      for (std::size_t i = 0; i < oh; ++i)
        for (std::size_t j = 0; j < ow; ++j) {
          double acc = b[q];
          for (std::size_t ch = 0; ch < c; ++ch)
            for (std::size_t a = 0; a < kh; ++a)
              for (std::size_t e = 0; e < kw; ++e)
                acc += f.at({q, ch, a, e}) * x.at({ch, i * sh + a, j * sw + e});
          worst = std::max(worst, std::abs(acc - y[(q * oh + i) * ow + j]));
        }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-12 && secs < 30.0,
          fmt::format("max abs error {:.3e} over 200 shapes (limit 1e-12), {:.2f}s", worst, secs)};
}

// ---- 3: gradient checks ------------------------------------------------------

Outcome gradient_checks() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::string worst_family;
  std::size_t families = 0;
  for (const auto& r : run_gradcheck_suite(3)) {
    ++families;
    if (r.max_rel_error >= worst) {
      worst = r.max_rel_error;
      worst_family = r.family;
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-4 && secs < 120.0,
          fmt::format("{} families, worst {} at {:.3e} (limit 1e-4), {:.2f}s", families,
                      worst_family, worst, secs)};
}

// ---- 4-6: dataset experiments --------------------------------------------------

fs::path data_dir() { return default_data_dir(); }

// Finds data/mr/{train,test}.csv, building them from rt-polarity files if needed.
std::optional<ExperimentConfig> mr_experiment(std::string& why) {
  const fs::path root = data_dir();
  auto spec = *dataset_preset("mr", root);
  if (!fs::exists(spec.train_path)) {
    const fs::path neg = root / "mr" / "rt-polarity.neg", pos = root / "mr" / "rt-polarity.pos";
    if (!fs::exists(neg) || !fs::exists(pos)) {
      why = fmt::format("MR data not found: need {} or {} and {}", spec.train_path.string(),
                        neg.string(), pos.string());
      return std::nullopt;
    }
    prepare_mr_split(neg, pos, 0, root / "mr");
  }
  ExperimentConfig c;
  c.data = spec;
  c.sync_model_with_data();
  return c;
}

Outcome mr_overfit() {
  std::string why;
  auto c = mr_experiment(why);
  if (!c) return {false, why};
  const auto t0 = Clock::now();
  c->train.subsample = 32;
  c->train.validation_fraction = 0.0;
  c->train.epochs = 200;
  c->train.batch_size = 32;
  c->train.micro_batch = 32;
  c->train.checkpoint_every_epoch = false;
  c->train.stop_at_train_accuracy = 1.0;
  const Dataset data = load_dataset(c->data);
  const TrainResult r = train(*c, data, {});
  const double acc = r.report.epochs.back().train_accuracy;
  const double secs = seconds_since(t0);
  return {acc == 1.0 && secs < 300.0,
          fmt::format("train accuracy {:.4f} after {} epochs, {:.1f}s (limit 300s)", acc,
                      r.report.epochs.size(), secs)};
}

Outcome mr_end_to_end() {
  std::string why;
  auto c = mr_experiment(why);
  if (!c) return {false, why};
  const auto t0 = Clock::now();
  // Epoch budget sized to the one-hour limit on a single core.
  c->train.epochs = 8;
  c->train.checkpoint_every_epoch = false;
  const Dataset data = load_dataset(c->data);
  const TrainResult r = train(*c, data, {});
  const double secs = seconds_since(t0);
  return {r.report.test_accuracy >= 0.70 && secs <= 3600.0,
          fmt::format("test accuracy {:.4f} on {} samples (threshold 0.70), {:.0f}s",
                      r.report.test_accuracy, r.report.test_samples, secs)};
}

Outcome ag_padding_order() {
  const fs::path root = data_dir();
  auto spec = *dataset_preset("ag_news", root);
  if (!fs::exists(spec.train_path) || !fs::exists(spec.test_path)) {
    return {false, fmt::format("AG's News data not found: need {} and {}",
                               spec.train_path.string(), spec.test_path.string())};
  }
  const auto t0 = Clock::now();
  ExperimentConfig c;
  c.data = spec;
  c.train.subsample = 10000;
  // Budget sized to the two-hour limit for nine runs on a single core.
  c.train.epochs = 2;
  c.train.eval_train_accuracy = false;
  c.train.checkpoint_every_epoch = false;
  c.sync_model_with_data();
  const Dataset data = load_dataset(c.data);
  const std::uint64_t seeds[] = {1, 2, 3};
  const auto cmp = compare_paddings(c, data, seeds, {});
  const double zero = cmp.mean(PaddingStrategy::kZero);
  const double cyclic = cmp.mean(PaddingStrategy::kCyclic);
  const double serp = cmp.mean(PaddingStrategy::kSerpentine);
  const double secs = seconds_since(t0);
  return {serp >= zero && secs <= 7200.0,
          fmt::format("mean accuracy zero {:.4f}, cyclic {:.4f} (not gated), serpentine {:.4f}, "
                      "{:.0f}s",
                      zero, cyclic, serp, secs)};
}

// ---- 7: determinism ------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome determinism() {
  const auto root = testing::fresh_dir("acceptance_determinism");
  const auto data_dir = testing::write_cue_dataset(root / "data", 200, 50, 3, 21);
  ExperimentConfig c = testing::small_experiment(data_dir, 3);
  c.model.dropout_keep = 0.5;
  c.train.seed = 12345;
  const TrainResult a = train(c, root / "first");
  const TrainResult b = train(c, root / "second");
  std::size_t files = 0, differing = 0;
  for (const auto& entry : fs::directory_iterator(a.run_dir)) {
    const auto name = entry.path().filename();
    if (name == "timing.txt") continue;
    ++files;
    if (slurp(entry.path()) != slurp(b.run_dir / name)) ++differing;
  }
  return {differing == 0 && files >= 5,
          fmt::format("{} artifacts compared (checkpoints, report, predictions), {} differ", files,
                      differing)};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const Criterion criteria[] = {
      {"encoding oracle suite", encoding_suite},
      {"convolution equivalence", conv_equivalence},
      {"gradient checks", gradient_checks},
      {"MR 32-sample overfit", mr_overfit},
      {"MR end-to-end accuracy", mr_end_to_end},
      {"AG padding ordering", ag_padding_order},
      {"training determinism", determinism},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty()) {
    for (int i = 1; i <= 7; ++i) selected.push_back(i);
  }
  int failed = 0;
  for (int k : selected) {
    if (k < 1 || k > 7) {
      fmt::print(stderr, "unknown criterion {}\n", k);
      return 2;
    }
    Outcome o;
    try {
      o = criteria[k - 1].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    fmt::print("criterion {} [{}]: {} - {}\n", k, criteria[k - 1].name, o.pass ? "PASS" : "FAIL",
               o.detail);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
