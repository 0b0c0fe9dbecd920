// SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
//
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Talks to the library exclusively through s2m.h.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "s2m/s2m.h"

namespace {

struct Flags {
  std::string config;
  std::string dataset;
  std::string data_dir;
  std::string strategy;
  std::string position;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> subsample;
  std::optional<std::size_t> epochs;
  std::optional<std::size_t> m;
  std::size_t seeds = 3;
  std::string out = "runs";
  std::string text;
  std::string neg;
  std::string pos;
};

int report(s2m_status status) {
  if (status != S2M_OK) std::cerr << "error: " << s2m_last_error() << "\n";
  return static_cast<int>(status);
}

class Experiment {
 public:
  ~Experiment() { s2m_experiment_free(exp_); }
  s2m_experiment* get() const { return exp_; }

  s2m_status init(const Flags& f) {
    s2m_status st = f.config.empty() ? s2m_experiment_new(&exp_)
                                     : s2m_experiment_load(f.config.c_str(), &exp_);
    if (st != S2M_OK) return st;
    if (!f.dataset.empty()) {
      st = s2m_experiment_use_dataset(exp_, f.dataset.c_str(),
                                      f.data_dir.empty() ? nullptr : f.data_dir.c_str());
      if (st != S2M_OK) return st;
    }
    if (!f.strategy.empty() && (st = set("model.strategy", f.strategy)) != S2M_OK) return st;
    if (!f.position.empty() && (st = set("model.position", f.position)) != S2M_OK) return st;
    if (f.m && (st = set("data.m", std::to_string(*f.m))) != S2M_OK) return st;
    if (f.seed && (st = set("train.seed", std::to_string(*f.seed))) != S2M_OK) return st;
    if (f.subsample && (st = set("train.subsample", std::to_string(*f.subsample))) != S2M_OK) {
      return st;
    }
    if (f.epochs && (st = set("train.epochs", std::to_string(*f.epochs))) != S2M_OK) return st;
    return S2M_OK;
  }

  std::string run_dir(const std::string& out_root) const {
    std::size_t needed = 0;
    if (s2m_experiment_run_dir(exp_, out_root.c_str(), nullptr, 0, &needed) != S2M_OK) return {};
    std::string buf(needed, '\0');
    s2m_experiment_run_dir(exp_, out_root.c_str(), buf.data(), buf.size(), &needed);
    buf.resize(needed - 1);
    return buf;
  }

 private:
  s2m_status set(const char* key, const std::string& value) {
    return s2m_experiment_set(exp_, key, value.c_str());
  }

  s2m_experiment* exp_ = nullptr;
};

void add_experiment_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "Experiment INI file");
  cmd->add_option("--dataset", f.dataset, "Preset (ag_news, yelp_full, mr) or directory");
  cmd->add_option("--data-dir", f.data_dir, "Root of the dataset presets");
  cmd->add_option("--strategy", f.strategy, "zero | cyclic | serpentine")
      ->check(CLI::IsMember({"zero", "cyclic", "serpentine"}));
  cmd->add_option("--position", f.position, "Position channels: on | off")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--seed", f.seed, "Random seed");
  cmd->add_option("--out", f.out, "Output root directory");
}

int run_encode(const Flags& f) {
  Experiment exp;
  if (auto st = exp.init(f); st != S2M_OK) return report(st);
  const std::string path = exp.run_dir(f.out) + (f.text.empty() ? "/encoded_train.s2m"
                                                                 : "/encoded_text.s2m");
  std::size_t count = 0;
  if (auto st = s2m_encode(exp.get(), f.text.empty() ? nullptr : f.text.c_str(), path.c_str(),
                           &count);
      st != S2M_OK) {
    return report(st);
  }
  std::cout << "encoded " << count << " sentence(s) to " << path << "\n";
  return 0;
}

int run_train(const Flags& f) {
  Experiment exp;
  if (auto st = exp.init(f); st != S2M_OK) return report(st);
  double acc = 0.0;
  if (auto st = s2m_train(exp.get(), f.out.c_str(), &acc); st != S2M_OK) return report(st);
  const std::string dir = exp.run_dir(f.out);
  std::ifstream rep(dir + "/report.txt");
  std::cout << rep.rdbuf();
  std::printf("run directory: %s\ntest accuracy: %.4f\n", dir.c_str(), acc);
  return 0;
}

int run_eval(const Flags& f) {
  Experiment exp;
  if (auto st = exp.init(f); st != S2M_OK) return report(st);
  double acc = 0.0;
  std::size_t correct = 0, total = 0;
  if (auto st = s2m_eval(exp.get(), f.out.c_str(), &acc, &correct, &total); st != S2M_OK) {
    return report(st);
  }
  std::printf("accuracy=%.17g correct=%zu total=%zu\n", acc, correct, total);
  return 0;
}

int run_compare(const Flags& f) {
  Experiment exp;
  if (auto st = exp.init(f); st != S2M_OK) return report(st);
  if (f.seeds == 0) {
    std::cerr << "error: --seeds must be at least 1\n";
    return S2M_ERR_USAGE;
  }
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < f.seeds; ++i) seeds.push_back(f.seed.value_or(1) + i);
  std::size_t needed = 0;
  if (auto st = s2m_compare_paddings(exp.get(), seeds.data(), seeds.size(), f.out.c_str(),
                                     nullptr, 0, &needed);
      st != S2M_OK) {
    return report(st);
  }
  std::ifstream table(f.out + "/padding_comparison.txt");
  std::cout << table.rdbuf();
  return 0;
}

int run_gradcheck(const Flags& f) {
  constexpr double kTolerance = 1e-4;
  s2m_gradcheck_entry entries[32];
  std::size_t count = 0;
  const s2m_status st = s2m_gradcheck(f.seed.value_or(0), kTolerance, entries, 32, &count);
  if (st != S2M_OK && st != S2M_ERR_NUMERIC) return report(st);
  for (std::size_t i = 0; i < count && i < 32; ++i) {
    std::printf("%-22s max_rel_error=%.3e %s\n", entries[i].family, entries[i].max_rel_error,
                entries[i].max_rel_error <= kTolerance ? "ok" : "FAIL");
  }
  return report(st);
}

int run_fold(const Flags& f) {
  const std::size_t m = f.m.value_or(18);
  const char* strategy = f.strategy.empty() ? "serpentine" : f.strategy.c_str();
  std::size_t needed = 0;
  if (auto st = s2m_fold_render(f.text.c_str(), m, strategy, nullptr, 0, &needed); st != S2M_OK) {
    return report(st);
  }
  std::string buf(needed, '\0');
  if (auto st = s2m_fold_render(f.text.c_str(), m, strategy, buf.data(), buf.size(), &needed);
      st != S2M_OK) {
    return report(st);
  }
  std::cout << buf.c_str();
  return 0;
}

int run_prepare_mr(const Flags& f) {
  return report(s2m_prepare_mr(f.neg.c_str(), f.pos.c_str(), f.seed.value_or(0), f.out.c_str()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sent2Matrix text encoding, training and evaluation"};
  app.require_subcommand(1);
  Flags f;

  auto* encode = app.add_subcommand("encode", "Write the encoded-batch dump");
  add_experiment_flags(encode, f);
  encode->add_option("--m", f.m, "Characters per word");
  encode->add_option("--text", f.text, "Encode this sentence instead of the training split");

  auto* train = app.add_subcommand("train", "Train a model; writes checkpoints and a report");
  add_experiment_flags(train, f);
  train->add_option("--subsample", f.subsample, "Train on a seeded subset of this size");
  train->add_option("--epochs", f.epochs, "Number of epochs");

  auto* eval = app.add_subcommand("eval", "Evaluate a trained run on its test split");
  add_experiment_flags(eval, f);
  eval->add_option("--subsample", f.subsample, "As given to train");
  eval->add_option("--epochs", f.epochs, "As given to train");

  auto* compare = app.add_subcommand("compare-paddings", "Zero vs cyclic vs serpentine");
  add_experiment_flags(compare, f);
  compare->add_option("--subsample", f.subsample, "Train on a seeded subset of this size");
  compare->add_option("--epochs", f.epochs, "Number of epochs");
  compare->add_option("--seeds", f.seeds, "Number of consecutive seeds starting at --seed");

  auto* grad = app.add_subcommand("gradcheck", "Finite-difference gradient checks");
  grad->add_option("--seed", f.seed, "Random seed");

  auto* fold = app.add_subcommand("fold-visualize", "Print the padded word grid");
  fold->add_option("--text", f.text, "Sentence to fold")->required();
  fold->add_option("--m", f.m, "Characters per word");
  fold->add_option("--strategy", f.strategy, "zero | cyclic | serpentine")
      ->check(CLI::IsMember({"zero", "cyclic", "serpentine"}));

  auto* mr = app.add_subcommand("prepare-mr", "Build the seeded MR train/test split");
  mr->add_option("--neg", f.neg, "Negative reviews, one per line")->required();
  mr->add_option("--pos", f.pos, "Positive reviews, one per line")->required();
  mr->add_option("--seed", f.seed, "Random seed");
  mr->add_option("--out", f.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return S2M_ERR_USAGE;
  }

  if (*encode) return run_encode(f);
  if (*train) return run_train(f);
  if (*eval) return run_eval(f);
  if (*compare) return run_compare(f);
  if (*grad) return run_gradcheck(f);
  if (*fold) return run_fold(f);
  if (*mr) return run_prepare_mr(f);
  return S2M_ERR_USAGE;
}
