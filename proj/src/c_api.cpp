// SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
//
// SPDX-License-Identifier: Apache-2.0

#include "s2m/s2m.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <string>

#include "s2m/embedding.hpp"
#include "s2m/error.hpp"
#include "s2m/gradcheck.hpp"
#include "s2m/harness.hpp"

struct s2m_experiment {
  s2m::ExperimentConfig config;
};

struct s2m_model {
  std::unique_ptr<s2m::Model> model;
};

namespace {

thread_local std::string g_last_error;

s2m_status fail(s2m_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Maps the library's exception types onto status codes.
template <class Fn>
s2m_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const s2m::ConfigError& e) {
    return fail(S2M_ERR_USAGE, e.what());
  } catch (const s2m::ShapeError& e) {
    return fail(S2M_ERR_USAGE, e.what());
  } catch (const s2m::DataError& e) {
    return fail(S2M_ERR_DATA, e.what());
  } catch (const s2m::NumericError& e) {
    return fail(S2M_ERR_NUMERIC, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(S2M_ERR_DATA, e.what());
  } catch (const std::exception& e) {
    return fail(S2M_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(S2M_ERR_INTERNAL, "unknown error");
  }
}

s2m_status copy_out(const std::string& text, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = text.size() + 1;
  if (!buf) return S2M_OK;
  if (cap < text.size() + 1) return fail(S2M_ERR_USAGE, "output buffer too small");
  std::memcpy(buf, text.data(), text.size());
  buf[text.size()] = '\0';
  return S2M_OK;
}

s2m_status null_arg(const char* what) {
  return fail(S2M_ERR_USAGE, std::string(what) + " must not be NULL");
}

std::vector<std::string> words_of(const char* text) {
  return s2m::sentence_from_text(text ? text : "").words;
}

}  // namespace

extern "C" {

const char* s2m_version(void) { return "0.1.0"; }

const char* s2m_last_error(void) { return g_last_error.c_str(); }

s2m_status s2m_fold_render(const char* text, size_t m, const char* strategy, char* buf,
                           size_t cap, size_t* needed) {
  return guarded([&] {
    if (!text) return null_arg("text");
    const auto st = s2m::parse_padding_strategy(strategy ? strategy : "serpentine");
    return copy_out(s2m::render_word_grid(words_of(text), m, st), buf, cap, needed);
  });
}

s2m_status s2m_encode_sentence(const char* text, size_t n, size_t m, const char* strategy,
                               int use_position, double* values, size_t cap, size_t shape[3]) {
  return guarded([&] {
    if (!shape) return null_arg("shape");
    const s2m::EncoderConfig cfg{n, m,
                                 s2m::parse_padding_strategy(strategy ? strategy : "serpentine"),
                                 use_position != 0};
    const auto t = s2m::sentence_tensor(s2m::sentence_from_text(text ? text : ""), cfg);
    shape[0] = t.slices();
    shape[1] = t.m();
    shape[2] = t.channels();
    if (values) {
      if (cap < t.values.size()) return fail(S2M_ERR_USAGE, "output buffer too small");
      std::memcpy(values, t.values.raw(), t.values.size() * sizeof(double));
    }
    return S2M_OK;
  });
}

s2m_status s2m_experiment_new(s2m_experiment** out) {
  return guarded([&] {
    if (!out) return null_arg("out");
    *out = new s2m_experiment{};
    (*out)->config.sync_model_with_data();
    return S2M_OK;
  });
}

s2m_status s2m_experiment_load(const char* ini_path, s2m_experiment** out) {
  return guarded([&] {
    if (!out) return null_arg("out");
    if (!ini_path) return null_arg("ini_path");
    auto exp = std::make_unique<s2m_experiment>();
    exp->config = s2m::ExperimentConfig::from_file(ini_path);
    *out = exp.release();
    return S2M_OK;
  });
}

void s2m_experiment_free(s2m_experiment* exp) { delete exp; }

s2m_status s2m_experiment_set(s2m_experiment* exp, const char* key, const char* value) {
  return guarded([&] {
    if (!exp || !key || !value) return null_arg("experiment, key and value");
    exp->config.set(key, value);
    exp->config.sync_model_with_data();
    exp->config.model.validate();
    return S2M_OK;
  });
}

s2m_status s2m_experiment_use_dataset(s2m_experiment* exp, const char* name_or_dir,
                                      const char* data_dir) {
  return guarded([&] {
    if (!exp || !name_or_dir) return null_arg("experiment and dataset");
    const std::filesystem::path root = data_dir ? data_dir : s2m::default_data_dir();
    if (auto preset = s2m::dataset_preset(name_or_dir, root)) {
      exp->config.data = *preset;
    } else {
      const std::filesystem::path dir = name_or_dir;
      if (!std::filesystem::is_directory(dir)) {
        return fail(S2M_ERR_DATA, "dataset '" + dir.string() +
                                      "' is neither a known preset nor a directory");
      }
      exp->config.data.name = dir.filename().string();
      exp->config.data.train_path = dir / "train.csv";
      exp->config.data.test_path = dir / "test.csv";
    }
    exp->config.sync_model_with_data();
    return S2M_OK;
  });
}

s2m_status s2m_experiment_to_ini(const s2m_experiment* exp, char* buf, size_t cap,
                                 size_t* needed) {
  return guarded([&] {
    if (!exp) return null_arg("experiment");
    return copy_out(exp->config.to_ini(), buf, cap, needed);
  });
}

s2m_status s2m_experiment_run_dir(const s2m_experiment* exp, const char* out_root, char* buf,
                                  size_t cap, size_t* needed) {
  return guarded([&] {
    if (!exp || !out_root) return null_arg("experiment and out_root");
    return copy_out(s2m::run_directory(exp->config, out_root).string(), buf, cap, needed);
  });
}

s2m_status s2m_encode(const s2m_experiment* exp, const char* text, const char* out_path,
                      size_t* count) {
  return guarded([&] {
    if (!exp || !out_path) return null_arg("experiment and out_path");
    const auto& c = exp->config;
    std::vector<s2m::TokenizedSentence> sentences;
    if (text) {
      sentences.push_back(s2m::sentence_from_text(text));
    } else {
      for (auto& s : s2m::load_split(c.data.train_path, c.data.format, c.data.classes).samples) {
        sentences.push_back(std::move(s.sentence));
      }
    }
    if (sentences.empty()) return fail(S2M_ERR_DATA, "nothing to encode");
    const s2m::EncoderConfig enc = c.model.encoder();
    std::vector<s2m::SentTensor> tensors;
    tensors.reserve(sentences.size());
    for (const auto& s : sentences) tensors.push_back(s2m::sentence_tensor(s, enc));
    const std::filesystem::path path = out_path;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) return fail(S2M_ERR_DATA, "cannot write " + path.string());
    s2m::write_batch_dump(out, tensors);
    if (count) *count = tensors.size();
    return S2M_OK;
  });
}

s2m_status s2m_train(const s2m_experiment* exp, const char* out_root, double* test_accuracy) {
  return guarded([&] {
    if (!exp || !out_root) return null_arg("experiment and out_root");
    const auto result = s2m::train(exp->config, out_root);
    if (test_accuracy) *test_accuracy = result.report.test_accuracy;
    return S2M_OK;
  });
}

s2m_status s2m_eval(const s2m_experiment* exp, const char* out_root, double* accuracy,
                    size_t* correct, size_t* total) {
  return guarded([&] {
    if (!exp || !out_root) return null_arg("experiment and out_root");
    const auto dir = s2m::run_directory(exp->config, out_root);
    if (!std::filesystem::exists(dir / "checkpoint.bin")) {
      return fail(S2M_ERR_DATA, "no trained run at " + dir.string());
    }
    auto model = s2m::load_trained_model(dir);
    const auto& d = exp->config.data;
    const auto test = s2m::load_split(d.test_path, d.format, d.classes);
    std::vector<std::size_t> predictions;
    const auto metrics = s2m::evaluate(*model, test.samples, &predictions);
    std::ofstream log(dir / "predictions_eval.csv");
    s2m::write_prediction_log(log, test.samples, predictions);
    if (accuracy) *accuracy = metrics.accuracy();
    if (correct) *correct = metrics.correct;
    if (total) *total = metrics.total;
    return S2M_OK;
  });
}

s2m_status s2m_compare_paddings(const s2m_experiment* exp, const uint64_t* seeds, size_t n_seeds,
                                const char* out_root, char* report, size_t cap, size_t* needed) {
  return guarded([&] {
    if (!exp || !seeds || !out_root) return null_arg("experiment, seeds and out_root");
    const auto data = s2m::load_dataset(exp->config.data);
    const auto cmp = s2m::compare_paddings(exp->config, data, {seeds, n_seeds}, out_root);
    return copy_out(cmp.to_text(), report, cap, needed);
  });
}

s2m_status s2m_prepare_mr(const char* negative_path, const char* positive_path, uint64_t seed,
                          const char* out_dir) {
  return guarded([&] {
    if (!negative_path || !positive_path || !out_dir) return null_arg("paths");
    s2m::prepare_mr_split(negative_path, positive_path, seed, out_dir);
    return S2M_OK;
  });
}

s2m_status s2m_model_load(const char* run_dir, s2m_model** out) {
  return guarded([&] {
    if (!run_dir || !out) return null_arg("run_dir and out");
    auto m = std::make_unique<s2m_model>();
    m->model = s2m::load_trained_model(run_dir);
    *out = m.release();
    return S2M_OK;
  });
}

void s2m_model_free(s2m_model* model) { delete model; }

s2m_status s2m_model_predict(s2m_model* model, const char* text, size_t* label) {
  return guarded([&] {
    if (!model || !text || !label) return null_arg("model, text and label");
    const s2m::TokenizedSentence sent = s2m::sentence_from_text(text);
    *label = s2m::predict(*model->model, {&sent, 1}).front();
    return S2M_OK;
  });
}

s2m_status s2m_gradcheck(uint64_t seed, double tolerance, s2m_gradcheck_entry* entries,
                         size_t cap, size_t* count) {
  return guarded([&] {
    const auto reports = s2m::run_gradcheck_suite(seed);
    if (count) *count = reports.size();
    bool ok = true;
    std::string worst;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      if (entries && i < cap) {
        std::memset(entries[i].family, 0, sizeof entries[i].family);
        std::strncpy(entries[i].family, reports[i].family.c_str(), sizeof entries[i].family - 1);
        entries[i].max_rel_error = reports[i].max_rel_error;
      }
      if (!(reports[i].max_rel_error <= tolerance)) {
        ok = false;
        worst += " " + reports[i].family;
      }
    }
    if (!ok) return fail(S2M_ERR_NUMERIC, "gradient check above tolerance:" + worst);
    return S2M_OK;
  });
}

}  // extern "C"
