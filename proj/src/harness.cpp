// SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
//
// SPDX-License-Identifier: Apache-2.0

#include "s2m/harness.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <numeric>
#include <sstream>

#include "s2m/checkpoint.hpp"
#include "s2m/error.hpp"

namespace s2m {

// ---------------------------------------------------------------------------
// ExperimentConfig
// ---------------------------------------------------------------------------

namespace {

std::string real(double v) { return fmt::format("{:.17g}", v); }

void set_data_key(ExperimentConfig& c, std::string_view key, std::string_view value) {
  DatasetSpec& d = c.data;
  if (key == "name") d.name = value;
  else if (key == "train") d.train_path = std::string(value);
  else if (key == "test") d.test_path = std::string(value);
  else if (key == "format") d.format = parse_dataset_format(value);
  else if (key == "classes") d.classes = parse_count(key, value);
  else if (key == "n") d.n = parse_count(key, value);
  else if (key == "m") d.m = parse_count(key, value);
  else throw ConfigError("unknown [data] key '" + std::string(key) + "'");
}

void set_train_key(TrainOptions& t, std::string_view key, std::string_view value) {
  if (key == "epochs") t.epochs = parse_count(key, value);
  else if (key == "batch_size") t.batch_size = parse_count(key, value);
  else if (key == "micro_batch") t.micro_batch = parse_count(key, value);
  else if (key == "lr") t.adam.lr = parse_real(key, value);
  else if (key == "beta1") t.adam.beta1 = parse_real(key, value);
  else if (key == "beta2") t.adam.beta2 = parse_real(key, value);
  else if (key == "eps") t.adam.eps = parse_real(key, value);
  else if (key == "seed") t.seed = parse_u64(key, value);
  else if (key == "subsample") {
    if (value == "none" || value == "0") t.subsample.reset();
    else t.subsample = parse_count(key, value);
  } else if (key == "validation_fraction") t.validation_fraction = parse_real(key, value);
  else if (key == "checkpoint_every_epoch") t.checkpoint_every_epoch = parse_flag(key, value);
  else if (key == "stop_at_train_accuracy") {
    if (value == "none") t.stop_at_train_accuracy.reset();
    else t.stop_at_train_accuracy = parse_real(key, value);
  } else if (key == "word_vocab_cap") t.word_vocab_cap = parse_count(key, value);
  else if (key == "eval_train_accuracy") t.eval_train_accuracy = parse_flag(key, value);
  else throw ConfigError("unknown [train] key '" + std::string(key) + "'");
}

}  // namespace

void ExperimentConfig::set(std::string_view dotted_key, std::string_view value) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string_view::npos) {
    throw ConfigError("config key '" + std::string(dotted_key) + "' needs a section prefix");
  }
  const std::string_view section = dotted_key.substr(0, dot);
  const std::string_view key = dotted_key.substr(dot + 1);
  if (section == "data") {
    set_data_key(*this, key, value);
  } else if (section == "model") {
    if (key == "n" || key == "m" || key == "classes" || key == "seed") {
      throw ConfigError("model." + std::string(key) + " is derived; set it in [data] or [train]");
    }
    model.set(key, value);
  } else if (section == "train") {
    set_train_key(train, key, value);
  } else {
    throw ConfigError("unknown config section [" + std::string(section) + "]");
  }
}

void ExperimentConfig::sync_model_with_data() {
  model.n = data.n;
  model.m = data.m;
  model.classes = data.classes;
  model.seed = train.seed;
}

std::string ExperimentConfig::to_ini() const {
  std::string out = "[data]\n";
  out += "name = " + data.name + "\n";
  out += "train = " + data.train_path.string() + "\n";
  out += "test = " + data.test_path.string() + "\n";
  out += "format = " + std::string(to_string(data.format)) + "\n";
  out += fmt::format("classes = {}\nn = {}\nm = {}\n", data.classes, data.n, data.m);
  out += "\n[model]\n";
  for (const auto& [k, v] : model.entries()) {
    if (k == "n" || k == "m" || k == "classes" || k == "seed") continue;
    out += k + " = " + v + "\n";
  }
  out += "\n[train]\n";
  out += fmt::format("epochs = {}\nbatch_size = {}\nmicro_batch = {}\n", train.epochs,
                     train.batch_size, train.micro_batch);
  out += "lr = " + real(train.adam.lr) + "\n";
  out += "beta1 = " + real(train.adam.beta1) + "\n";
  out += "beta2 = " + real(train.adam.beta2) + "\n";
  out += "eps = " + real(train.adam.eps) + "\n";
  out += fmt::format("seed = {}\n", train.seed);
  out += "subsample = " + (train.subsample ? std::to_string(*train.subsample) : "none") + "\n";
  out += "validation_fraction = " + real(train.validation_fraction) + "\n";
  out += std::string("checkpoint_every_epoch = ") + (train.checkpoint_every_epoch ? "on" : "off") +
         "\n";
  out += "stop_at_train_accuracy = " +
         (train.stop_at_train_accuracy ? real(*train.stop_at_train_accuracy) : "none") + "\n";
  out += fmt::format("word_vocab_cap = {}\n", train.word_vocab_cap);
  out += std::string("eval_train_accuracy = ") + (train.eval_train_accuracy ? "on" : "off") + "\n";
  return out;
}

ExperimentConfig ExperimentConfig::from_ini(std::istream& is) {
  ExperimentConfig c;
  const auto sections = read_ini(is);
  for (const auto& s : sections) {
    if (s.name != "data" && s.name != "model" && s.name != "train") {
      throw ConfigError("unknown config section [" + s.name + "]");
    }
  }
  // Presets go first so explicit keys override them.
  for (const auto& s : sections) {
    if (s.name != "data") continue;
    std::filesystem::path data_dir = default_data_dir();
    for (const auto& [k, v] : s.entries) {
      if (k == "data_dir") data_dir = v;
    }
    for (const auto& [k, v] : s.entries) {
      if (k != "dataset") continue;
      auto preset = dataset_preset(v, data_dir);
      if (!preset) throw ConfigError("unknown dataset preset '" + v + "'");
      c.data = *preset;
    }
  }
  for (const auto& s : sections) {
    for (const auto& [k, v] : s.entries) {
      if (s.name == "data" && (k == "dataset" || k == "data_dir")) continue;
      c.set(s.name + "." + k, v);
    }
  }
  c.sync_model_with_data();
  c.model.validate();
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return from_ini(in);
}

std::uint64_t ExperimentConfig::digest() const {
  ExperimentConfig unseeded = *this;
  unseeded.train.seed = 0;
  unseeded.model.seed = 0;
  return fnv1a64(unseeded.to_ini());
}

// ---------------------------------------------------------------------------
// Reports and metrics
// ---------------------------------------------------------------------------

std::string TrainReport::to_text() const {
  std::string out;
  for (const auto& e : epochs) {
    out += fmt::format("epoch={} train_loss={:.17g} train_accuracy={:.17g} validation_accuracy={}\n",
                       e.epoch, e.train_loss, e.train_accuracy,
                       e.validation_accuracy ? real(*e.validation_accuracy) : "none");
  }
  out += fmt::format(
      "summary seed={} config_digest={} train_samples={} validation_samples={} test_samples={} "
      "malformed_rows={} epochs_run={} test_accuracy={:.17g}\n",
      seed, config_digest, train_samples, validation_samples, test_samples, malformed_rows,
      epochs.size(), test_accuracy);
  return out;
}

Metrics evaluate(Model& model, std::span<const LabeledSentence> samples,
                 std::vector<std::size_t>* predictions, std::size_t batch) {
  if (samples.empty()) throw ConfigError("cannot evaluate on an empty split");
  Metrics metrics;
  if (predictions) predictions->clear();
  std::vector<TokenizedSentence> sentences;
  for (std::size_t start = 0; start < samples.size(); start += batch) {
    const std::size_t end = std::min(samples.size(), start + batch);
    sentences.clear();
    for (std::size_t i = start; i < end; ++i) sentences.push_back(samples[i].sentence);
    const auto pred = predict(model, sentences);
    for (std::size_t i = start; i < end; ++i) {
      if (pred[i - start] == samples[i].label) ++metrics.correct;
    }
    if (predictions) predictions->insert(predictions->end(), pred.begin(), pred.end());
  }
  metrics.total = samples.size();
  return metrics;
}

void write_prediction_log(std::ostream& os, std::span<const LabeledSentence> samples,
                          std::span<const std::size_t> predictions) {
  if (samples.size() != predictions.size()) {
    throw ConfigError("prediction log: sample and prediction counts differ");
  }
  os << "index,true,pred\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    os << i << ',' << samples[i].label << ',' << predictions[i] << '\n';
  }
}

Metrics recount_prediction_log(std::istream& is) {
  Metrics m;
  std::string line;
  if (!std::getline(is, line) || line != "index,true,pred") {
    throw DataError("prediction log: missing header");
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto a = line.find(','), b = line.rfind(',');
    if (a == std::string::npos || a == b) throw DataError("prediction log: bad line " + line);
    ++m.total;
    if (line.substr(a + 1, b - a - 1) == line.substr(b + 1)) ++m.correct;
  }
  return m;
}

Dataset load_dataset(const DatasetSpec& spec) {
  Dataset d{load_split(spec.train_path, spec.format, spec.classes),
            load_split(spec.test_path, spec.format, spec.classes)};
  return d;
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

SampleSplit split_training_pool(std::size_t pool_size, const TrainOptions& options) {
  if (!(options.validation_fraction >= 0.0 && options.validation_fraction < 1.0)) {
    throw ConfigError("validation_fraction must be in [0, 1)");
  }
  std::vector<std::size_t> perm(pool_size);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(options.seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  if (options.subsample) {
    if (*options.subsample > pool_size) {
      throw ConfigError("subsample of " + std::to_string(*options.subsample) +
                        " exceeds the " + std::to_string(pool_size) + " training samples");
    }
    perm.resize(*options.subsample);
  }
  const auto held_out = static_cast<std::size_t>(options.validation_fraction *
                                                 static_cast<double>(perm.size()));
  SampleSplit split;
  split.train.assign(perm.begin(), perm.end() - static_cast<std::ptrdiff_t>(held_out));
  split.validation.assign(perm.end() - static_cast<std::ptrdiff_t>(held_out), perm.end());
  return split;
}

std::vector<std::size_t> epoch_order(std::size_t count, std::uint64_t seed, std::size_t epoch) {
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed * 0x9e3779b97f4a7c15ull + epoch);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

namespace {

std::vector<LabeledSentence> gather(const std::vector<LabeledSentence>& pool,
                                    const std::vector<std::size_t>& idx) {
  std::vector<LabeledSentence> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(pool[i]);
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

std::vector<const Parameter*> const_params(Model& model) {
  auto ps = model.parameters();
  return {ps.begin(), ps.end()};
}

}  // namespace

TrainResult train(const ExperimentConfig& config_in, const Dataset& data,
                  const std::filesystem::path& run_dir) {
  ExperimentConfig config = config_in;
  config.sync_model_with_data();
  config.model.validate();
  const TrainOptions& opt = config.train;
  if (opt.epochs == 0) throw ConfigError("epochs must be at least 1");
  if (opt.batch_size == 0 || opt.micro_batch == 0) {
    throw ConfigError("batch_size and micro_batch must be at least 1");
  }
  const auto started = std::chrono::steady_clock::now();

  const SampleSplit split = split_training_pool(data.train.samples.size(), opt);
  if (split.train.empty()) throw ConfigError("no training samples left after the split");
  const auto train_set = gather(data.train.samples, split.train);
  const auto val_set = gather(data.train.samples, split.validation);

  TrainResult result;
  std::unique_ptr<WordVocab> vocab;
  if (config.model.arch == Architecture::kWordCnn) {
    std::vector<TokenizedSentence> corpus;
    for (const auto& s : train_set) corpus.push_back(s.sentence);
    vocab = std::make_unique<WordVocab>(build_word_vocab(corpus, opt.word_vocab_cap));
  }
  result.model = build_model(config.model, vocab.get());
  Model& model = *result.model;
  const auto params = model.parameters();

  const std::string digest = hex64(config.digest());
  if (!run_dir.empty()) {
    std::filesystem::create_directories(run_dir);
    write_text(run_dir / "model.ini", config.model.to_ini());
    write_text(run_dir / "experiment.ini", config.to_ini());
    if (vocab) {
      std::ofstream v(run_dir / "vocab.txt");
      vocab->write(v);
    }
  }

  TrainReport& report = result.report;
  report.seed = opt.seed;
  report.config_digest = digest;
  report.train_samples = train_set.size();
  report.validation_samples = val_set.size();
  report.test_samples = data.test.samples.size();
  report.malformed_rows = data.train.malformed + data.test.malformed;

  Rng dropout_rng(opt.seed ^ 0xd1b54a32d192ed03ull);
  std::vector<TokenizedSentence> micro_sentences;
  std::vector<std::size_t> micro_labels;
  for (std::size_t epoch = 1; epoch <= opt.epochs; ++epoch) {
    const auto order = epoch_order(train_set.size(), opt.seed, epoch);
    double loss_sum = 0.0;
    std::size_t running_correct = 0;
    for (std::size_t b0 = 0; b0 < order.size(); b0 += opt.batch_size) {
      const std::size_t b1 = std::min(order.size(), b0 + opt.batch_size);
      const double batch_len = static_cast<double>(b1 - b0);
      zero_grads(params);
      for (std::size_t u0 = b0; u0 < b1; u0 += opt.micro_batch) {
        const std::size_t u1 = std::min(b1, u0 + opt.micro_batch);
        micro_sentences.clear();
        micro_labels.clear();
        for (std::size_t i = u0; i < u1; ++i) {
          micro_sentences.push_back(train_set[order[i]].sentence);
          micro_labels.push_back(train_set[order[i]].label);
        }
        Tape tape;
        Var logits = model.forward(tape, micro_sentences, true, dropout_rng);
        Var loss = ops::softmax_xent(tape, logits, micro_labels);
        const double micro_len = static_cast<double>(u1 - u0);
        loss_sum += tape.value(loss)[0] * micro_len;
        const auto pred = predict(tape.value(logits));
        for (std::size_t i = 0; i < pred.size(); ++i) running_correct += pred[i] == micro_labels[i];
        tape.backward(loss, micro_len / batch_len);
      }
      adam_step(params, opt.adam);
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(train_set.size());
    rec.train_accuracy = opt.eval_train_accuracy
                             ? evaluate(model, train_set).accuracy()
                             : static_cast<double>(running_correct) /
                                   static_cast<double>(train_set.size());
    if (!val_set.empty()) rec.validation_accuracy = evaluate(model, val_set).accuracy();
    report.epochs.push_back(rec);

    if (!run_dir.empty() && opt.checkpoint_every_epoch) {
      save_checkpoint(run_dir / fmt::format("checkpoint_epoch{:03}.bin", epoch),
                      {digest, params.front()->step_count}, const_params(model));
    }
    if (opt.stop_at_train_accuracy && rec.train_accuracy >= *opt.stop_at_train_accuracy) break;
  }

  std::vector<std::size_t> predictions;
  if (!data.test.samples.empty()) {
    report.test_accuracy = evaluate(model, data.test.samples, &predictions).accuracy();
  }
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  if (!run_dir.empty()) {
    save_checkpoint(run_dir / "checkpoint.bin", {digest, params.front()->step_count},
                    const_params(model));
    write_text(run_dir / "report.txt", report.to_text());
    write_text(run_dir / "timing.txt", fmt::format("wall_clock_seconds={:.3f}\n",
                                                   report.wall_clock_seconds));
    if (!predictions.empty()) {
      std::ofstream log(run_dir / "predictions.csv");
      write_prediction_log(log, data.test.samples, predictions);
    }
  }
  result.run_dir = run_dir;
  return result;
}

std::filesystem::path run_directory(const ExperimentConfig& config,
                                    const std::filesystem::path& out_root) {
  return out_root / fmt::format("{}-s{}", hex64(config.digest()), config.train.seed);
}

TrainResult train(const ExperimentConfig& config, const std::filesystem::path& out_root) {
  const auto dir = run_directory(config, out_root);
  if (std::filesystem::exists(dir / "report.txt")) {
    throw ConfigError("run directory " + dir.string() + " already holds a finished run");
  }
  const Dataset data = load_dataset(config.data);
  return train(config, data, dir);
}

std::unique_ptr<Model> load_trained_model(const std::filesystem::path& run_dir) {
  std::ifstream mi(run_dir / "model.ini");
  if (!mi) throw DataError("no model.ini in " + run_dir.string());
  const ModelConfig mc = ModelConfig::from_ini(mi);
  std::unique_ptr<Model> model;
  if (mc.arch == Architecture::kWordCnn) {
    std::ifstream vi(run_dir / "vocab.txt");
    if (!vi) throw DataError("no vocab.txt in " + run_dir.string());
    const WordVocab vocab = WordVocab::read(vi);
    model = build_model(mc, &vocab);
  } else {
    model = build_model(mc);
  }
  auto params = model->parameters();
  load_checkpoint(run_dir / "checkpoint.bin", params);
  return model;
}

// ---------------------------------------------------------------------------
// Padding comparison
// ---------------------------------------------------------------------------

double PaddingComparison::mean(PaddingStrategy strategy) const {
  const auto& row = accuracy.at(static_cast<std::size_t>(strategy));
  return std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(row.size());
}

std::string PaddingComparison::to_text() const {
  static constexpr const char* kNames[] = {"Zero Padding", "Cyclic Padding",
                                           "Serpentine Padding"};
  std::string out = fmt::format("{:<20}", "Padding Method");
  for (auto s : seeds) out += fmt::format(" | {:>9}", fmt::format("seed {}", s));
  out += fmt::format(" | {:>9}\n", "mean");
  for (PaddingStrategy st : kAllStrategies) {
    const auto k = static_cast<std::size_t>(st);
    out += fmt::format("{:<20}", kNames[k]);
    for (double a : accuracy[k]) out += fmt::format(" | {:>8.2f}%", 100.0 * a);
    out += fmt::format(" | {:>8.2f}%\n", 100.0 * mean(st));
  }
  return out;
}

PaddingComparison compare_paddings(const ExperimentConfig& base, const Dataset& data,
                                   std::span<const std::uint64_t> seeds,
                                   const std::filesystem::path& out_root) {
  if (seeds.empty()) throw ConfigError("compare_paddings needs at least one seed");
  PaddingComparison cmp;
  cmp.seeds.assign(seeds.begin(), seeds.end());
  cmp.accuracy.assign(std::size(kAllStrategies), {});
  for (PaddingStrategy st : kAllStrategies) {
    for (std::uint64_t seed : seeds) {
      ExperimentConfig c = base;
      c.model.strategy = st;
      c.train.seed = seed;
      const auto dir = out_root.empty() ? std::filesystem::path() : run_directory(c, out_root);
      auto result = train(c, data, dir);
      cmp.accuracy[static_cast<std::size_t>(st)].push_back(result.report.test_accuracy);
    }
  }
  if (!out_root.empty()) {
    std::filesystem::create_directories(out_root);
    write_text(out_root / "padding_comparison.txt", cmp.to_text());
  }
  return cmp;
}

}  // namespace s2m
