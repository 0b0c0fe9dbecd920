// SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
//
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <numeric>
#include <sstream>

#include "s2m/error.hpp"
#include "s2m/harness.hpp"
#include "synthetic.hpp"

using namespace s2m;
using namespace s2m::testing;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// Always predicts class 0.
class ConstantModel final : public Model {
 public:
  ConstantModel() : Model(ModelConfig{}) {}
  Var forward(Tape& tape, std::span<const TokenizedSentence> batch, bool, Rng&) override {
    Tensor logits({batch.size(), config_.classes});
    for (std::size_t i = 0; i < batch.size(); ++i) logits.at({i, 0}) = 1.0;
    return tape.constant(std::move(logits));
  }
};

}  // namespace

TEST_CASE("csv records") {
  std::istringstream is("\"3\",\"a \"\"quoted\"\", title\",\"desc\"\r\n1,plain,x\n");
  std::vector<std::string> f;
  REQUIRE(read_csv_record(is, f));
  CHECK(f == std::vector<std::string>{"3", "a \"quoted\", title", "desc"});
  REQUIRE(read_csv_record(is, f));
  CHECK(f.size() == 3);
  CHECK_FALSE(read_csv_record(is, f));
}

TEST_CASE("load split") {
  std::istringstream ag("\"3\",\"Wall St.\",\"Bears claw back!\"\n\"1\",\"\",\"\"\nnot,a\n\"x\",\"t\",\"d\"\n");
  const LoadedSplit s = load_split(ag, DatasetFormat::kCsv3, 4);
  REQUIRE(s.samples.size() == 2);
  CHECK(s.samples[0].label == 2);
  CHECK(s.samples[0].sentence.words == std::vector<std::string>{"wall", "st", "bears", "claw", "back"});
  CHECK(s.samples[1].sentence.size() == 0);
  CHECK(s.malformed == 2);

  std::istringstream bad("\"9\",\"t\",\"d\"\n");
  CHECK_THROWS_AS(load_split(bad, DatasetFormat::kCsv3, 4), DataError);
  CHECK_THROWS_AS(load_split(std::filesystem::path("/nonexistent/x.csv"), DatasetFormat::kCsv2, 2),
                  DataError);
}

TEST_CASE("dataset presets") {
  const auto ag = dataset_preset("ag_news", "d");
  REQUIRE(ag);
  CHECK(ag->classes == 4);
  CHECK(ag->n == 49);
  CHECK(ag->m == 18);
  CHECK(dataset_preset("yelp_full", "d")->n == 67);
  CHECK(dataset_preset("mr", "d")->n == 51);
  CHECK_FALSE(dataset_preset("imdb", "d"));
}

TEST_CASE("seeded split: subsets are prefixes, validation is the tail") {
  TrainOptions o;
  o.seed = 9;
  const auto full = split_training_pool(1000, o);
  CHECK(full.validation.size() == 50);
  std::vector<std::size_t> pool = full.train;
  pool.insert(pool.end(), full.validation.begin(), full.validation.end());
  std::vector<std::size_t> sorted = pool;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> iota(1000);
  std::iota(iota.begin(), iota.end(), std::size_t{0});
  CHECK(sorted == iota);

  o.subsample = 200;
  const auto sub = split_training_pool(1000, o);
  std::vector<std::size_t> sub_pool = sub.train;
  sub_pool.insert(sub_pool.end(), sub.validation.begin(), sub.validation.end());
  CHECK(std::equal(sub_pool.begin(), sub_pool.end(), pool.begin()));
  CHECK(sub.validation.size() == 10);

  o.subsample = 2000;
  CHECK_THROWS_AS(split_training_pool(1000, o), ConfigError);
}

TEST_CASE("epoch order is a seeded permutation") {
  for (std::size_t e = 1; e <= 5; ++e) {
    auto order = epoch_order(257, 4, e);
    CHECK(order == epoch_order(257, 4, e));
    std::sort(order.begin(), order.end());
    for (std::size_t i = 0; i < order.size(); ++i) CHECK(order[i] == i);
  }
  CHECK(epoch_order(100, 4, 1) != epoch_order(100, 4, 2));
}

TEST_CASE("evaluate and the prediction log") {
  ConstantModel model;
  std::mt19937_64 rng(77);
  std::vector<LabeledSentence> samples(7600);
  for (auto& s : samples) s.label = rng() % 4;
  std::vector<std::size_t> pred;
  const Metrics m = evaluate(model, samples, &pred);
  CHECK(m.total == 7600);
  CHECK(m.accuracy() == doctest::Approx(0.25).epsilon(0.08));
  CHECK(std::abs(m.accuracy() - 0.25) <= 0.02);

  std::stringstream log;
  write_prediction_log(log, samples, pred);
  const Metrics back = recount_prediction_log(log);
  CHECK(back.correct == m.correct);
  CHECK(back.total == m.total);

  std::vector<LabeledSentence> zeros(10);
  CHECK(evaluate(model, zeros).accuracy() == 1.0);
  CHECK_THROWS_AS(evaluate(model, std::span<const LabeledSentence>{}), ConfigError);
}

TEST_CASE("experiment config") {
  ExperimentConfig c;
  c.set("train.seed", "5");
  c.set("model.strategy", "cyclic");
  c.set("data.n", "12");
  CHECK_THROWS_AS(c.set("model.n", "3"), ConfigError);
  CHECK_THROWS_AS(c.set("train.speed", "3"), ConfigError);
  CHECK_THROWS_AS(c.set("seed", "3"), ConfigError);
  std::istringstream is(c.to_ini());
  const ExperimentConfig back = ExperimentConfig::from_ini(is);
  CHECK(back.to_ini() == c.to_ini());
  CHECK(back.model.n == 12);
  CHECK(back.model.seed == 5);

  ExperimentConfig other = c;
  other.train.seed = 6;
  CHECK(other.digest() == c.digest());

  std::istringstream preset("[data]\ndataset = mr\ndata_dir = /x\n[train]\nepochs = 50\n");
  const ExperimentConfig mr = ExperimentConfig::from_ini(preset);
  CHECK(mr.model.n == 51);
  CHECK(mr.model.classes == 2);
  CHECK(mr.data.train_path == std::filesystem::path("/x/mr/train.csv"));

  std::istringstream section("[optim]\nlr = 1\n");
  CHECK_THROWS_AS(ExperimentConfig::from_ini(section), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_file("missing.ini"), ConfigError);
}

TEST_CASE("training writes a deterministic, auditable run") {
  const auto root = fresh_dir("harness_run");
  const auto data_dir = write_cue_dataset(root / "data", 120, 40, 2, 3);
  ExperimentConfig c = small_experiment(data_dir, 2);

  const TrainResult a = train(c, root / "a");
  const auto dir = a.run_dir;
  CHECK(dir == run_directory(c, root / "a"));
  CHECK(std::filesystem::exists(dir / "checkpoint_epoch003.bin"));
  CHECK(a.report.epochs.size() == 3);
  CHECK(a.report.train_samples == 114);
  CHECK(a.report.validation_samples == 6);
  for (const auto& e : a.report.epochs) {
    CHECK(e.train_accuracy >= 0.0);
    CHECK(e.train_accuracy <= 1.0);
  }

  std::ifstream log(dir / "predictions.csv");
  const Metrics recount = recount_prediction_log(log);
  CHECK(recount.total == 40);
  CHECK(recount.accuracy() == a.report.test_accuracy);

  const TrainResult b = train(c, root / "b");
  CHECK(slurp(dir / "report.txt") == slurp(b.run_dir / "report.txt"));
  CHECK(slurp(dir / "checkpoint.bin") == slurp(b.run_dir / "checkpoint.bin"));
  CHECK_THROWS_AS(train(c, root / "a"), ConfigError);

  auto reloaded = load_trained_model(dir);
  const Dataset data = load_dataset(c.data);
  CHECK(evaluate(*reloaded, data.test.samples).accuracy() == a.report.test_accuracy);

  ExperimentConfig other = c;
  other.train.seed = 2;
  CHECK(run_directory(other, root) != run_directory(c, root));
  other.train.epochs = 0;
  CHECK_THROWS_AS(train(other, data, {}), ConfigError);
}

TEST_CASE("a small model memorizes 32 samples") {
  const auto root = fresh_dir("harness_overfit");
  const auto data_dir = write_cue_dataset(root, 32, 8, 2, 5);
  ExperimentConfig c = small_experiment(data_dir, 2);
  c.train.validation_fraction = 0.0;
  c.train.epochs = 200;
  c.train.batch_size = 32;
  c.train.stop_at_train_accuracy = 1.0;
  c.train.checkpoint_every_epoch = false;
  const TrainResult r = train(c, load_dataset(c.data), {});
  CHECK(r.report.epochs.back().train_accuracy == 1.0);

  c.train.eval_train_accuracy = false;
  c.train.stop_at_train_accuracy.reset();
  c.train.epochs = 3;
  const TrainResult running = train(c, load_dataset(c.data), {});
  for (const auto& e : running.report.epochs) {
    CHECK(e.train_accuracy >= 0.0);
    CHECK(e.train_accuracy <= 1.0);
  }
}

TEST_CASE("word CNN and char CNN train through the same loop") {
  const auto root = fresh_dir("harness_baselines");
  const auto data_dir = write_cue_dataset(root, 64, 16, 2, 8);
  const Dataset data = load_dataset(small_experiment(data_dir, 2).data);
  for (auto arch : {Architecture::kWordCnn, Architecture::kCharCnn}) {
    ExperimentConfig c = small_experiment(data_dir, 2);
    c.model.arch = arch;
    c.model.embed_dim = 8;
    c.model.initial_filters = 4;
    c.data.n = 30;
    c.data.m = 10;
    c.train.epochs = 2;
    const TrainResult r = train(c, data, root / to_string(arch));
    CHECK(r.report.epochs.size() == 2);
    CHECK(std::isfinite(r.report.epochs.back().train_loss));
    auto reloaded = load_trained_model(r.run_dir);
    CHECK(evaluate(*reloaded, data.test.samples).accuracy() == r.report.test_accuracy);
  }
}

TEST_CASE("padding comparison table") {
  const auto root = fresh_dir("harness_compare");
  const auto data_dir = write_cue_dataset(root / "data", 48, 16, 2, 11);
  ExperimentConfig c = small_experiment(data_dir, 2);
  c.train.epochs = 1;
  const std::uint64_t seeds[] = {1, 2};
  const auto cmp = compare_paddings(c, load_dataset(c.data), seeds, root / "runs");
  CHECK(cmp.accuracy.size() == 3);
  CHECK(cmp.accuracy[0].size() == 2);
  const std::string table = slurp(root / "runs" / "padding_comparison.txt");
  CHECK(table.find("Serpentine Padding") != std::string::npos);
  CHECK(table.find("Zero Padding") != std::string::npos);
}

TEST_CASE("mr split preparation") {
  const auto root = fresh_dir("harness_mr");
  {
    std::ofstream neg(root / "neg.txt"), pos(root / "pos.txt");
    for (int i = 0; i < 30; ++i) neg << "bad film " << i << "\n";
    for (int i = 0; i < 30; ++i) pos << "good film " << i << "\n";
  }
  prepare_mr_split(root / "neg.txt", root / "pos.txt", 3, root / "a", {50, 10});
  prepare_mr_split(root / "neg.txt", root / "pos.txt", 3, root / "b", {50, 10});
  CHECK(slurp(root / "a" / "train.csv") == slurp(root / "b" / "train.csv"));
  CHECK(slurp(root / "a" / "test_index.txt") == slurp(root / "b" / "test_index.txt"));
  CHECK(load_split(root / "a" / "train.csv", DatasetFormat::kCsv2, 2).samples.size() == 50);
  CHECK(load_split(root / "a" / "test.csv", DatasetFormat::kCsv2, 2).samples.size() == 10);
  CHECK_THROWS_AS(prepare_mr_split(root / "neg.txt", root / "pos.txt", 3, root / "c", {50, 20}),
                  DataError);
}
