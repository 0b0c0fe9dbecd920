// SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
//
// SPDX-License-Identifier: Apache-2.0

#include "s2m/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "s2m/models.hpp"
#include "s2m/optim.hpp"

namespace s2m {

namespace {

double evaluate(const LossBuilder& loss) {
  Tape tape;
  return tape.value(loss(tape))[0];
}

}  // namespace

double grad_check(const LossBuilder& loss, std::span<Parameter* const> params,
                  const GradCheckOptions& options) {
  zero_grads(params);
  {
    Tape tape;
    tape.backward(loss(tape));
  }
  Rng rng(options.seed);
  double worst = 0.0;
  for (Parameter* p : params) {
    std::vector<std::size_t> probe(p->value.size());
    std::iota(probe.begin(), probe.end(), std::size_t{0});
    if (probe.size() > options.samples_per_param) {
      std::shuffle(probe.begin(), probe.end(), rng);
      probe.resize(options.samples_per_param);
    }
    for (std::size_t i : probe) {
      const double saved = p->value[i];
      p->value[i] = saved + options.h;
      const double plus = evaluate(loss);
      p->value[i] = saved - options.h;
      const double minus = evaluate(loss);
      p->value[i] = saved;
      const double numeric = (plus - minus) / (2.0 * options.h);
      const double analytic = p->grad[i];
      const double denom = std::max(1e-8, std::abs(analytic) + std::abs(numeric));
      worst = std::max(worst, std::abs(analytic - numeric) / denom);
    }
  }
  return worst;
}

namespace {

Tensor random_tensor(Shape shape, Rng& rng, double scale = 1.0) {
  Tensor t(std::move(shape));
  std::uniform_real_distribution<double> dist(-scale, scale);
  for (double& v : t.data()) v = dist(rng);
  return t;
}

struct Fixture {
  std::vector<std::unique_ptr<Parameter>> owned;
  Rng rng;

  explicit Fixture(std::uint64_t seed) : rng(seed) {}

  Parameter& param(const char* name, Shape shape, double scale = 1.0) {
    owned.push_back(std::make_unique<Parameter>(name, random_tensor(std::move(shape), rng, scale)));
    return *owned.back();
  }
  std::vector<Parameter*> all() {
    std::vector<Parameter*> out;
    for (auto& p : owned) out.push_back(p.get());
    return out;
  }
  // Random projection turning any output into a scalar.
  Tensor weights_like(const Tensor& t) { return random_tensor(t.shape(), rng); }
};

// Checks `fn` (which reads parameters from `fx`) after projecting its output
// onto fixed random weights.
template <class Fn>
double check_projected(Fixture& fx, Fn fn, std::uint64_t seed) {
  Tensor weights;
  {
    Tape probe;
    weights = fx.weights_like(probe.value(fn(probe)));
  }
  auto loss = [&](Tape& t) { return ops::weighted_sum(t, fn(t), weights); };
  auto params = fx.all();
  return grad_check(loss, params, {1e-6, 64, seed});
}

}  // namespace

std::vector<GradCheckReport> run_gradcheck_suite(std::uint64_t seed) {
  std::vector<GradCheckReport> out;
  auto add = [&](std::string family, double err) { out.push_back({std::move(family), err}); };

  {
    Fixture fx(seed + 1);
    auto& x = fx.param("x", {2, 3, 9});
    auto& w = fx.param("w", {4, 3, 3});
    auto& b = fx.param("b", {4});
    add("conv1d", check_projected(fx, [&](Tape& t) {
          return ops::conv1d(t, t.parameter(x), t.parameter(w), t.parameter(b), 2);
        }, seed));
  }
  for (std::size_t sw : {1u, 2u}) {
    Fixture fx(seed + 2 + sw);
    auto& x = fx.param("x", {2, 3, 5, 8});
    auto& w = fx.param("w", {4, 3, 3, 2});
    auto& b = fx.param("b", {4});
    add("conv2d_stride" + std::to_string(sw), check_projected(fx, [&](Tape& t) {
          return ops::conv2d(t, t.parameter(x), t.parameter(w), t.parameter(b), {1, sw});
        }, seed));
  }
  {
    Fixture fx(seed + 5);
    auto& x = fx.param("x", {3, 7});
    auto& w = fx.param("w", {5, 7});
    auto& b = fx.param("b", {5});
    add("linear", check_projected(fx, [&](Tape& t) {
          return ops::linear(t, t.parameter(x), t.parameter(w), t.parameter(b));
        }, seed));
  }
  {
    Fixture fx(seed + 6);
    auto& x = fx.param("x", {2, 3, 4, 6});
    add("relu", check_projected(fx, [&](Tape& t) { return ops::relu(t, t.parameter(x)); }, seed));
  }
  {
    Fixture fx(seed + 7);
    auto& x = fx.param("x", {2, 3, 4, 6});
    add("avg_pool2d", check_projected(fx, [&](Tape& t) {
          return ops::avg_pool2d(t, t.parameter(x), 2, 2);
        }, seed));
  }
  {
    Fixture fx(seed + 8);
    auto& x = fx.param("x", {2, 3, 10});
    add("max_pool1d", check_projected(fx, [&](Tape& t) {
          return ops::max_pool1d(t, t.parameter(x), 3);
        }, seed));
    add("global_max1d", check_projected(fx, [&](Tape& t) {
          return ops::global_max1d(t, t.parameter(x));
        }, seed));
  }
  {
    Fixture fx(seed + 9);
    auto& a = fx.param("a", {2, 3, 3, 4});
    auto& c = fx.param("c", {2, 2, 3, 4});
    add("pad2d_concat_flatten", check_projected(fx, [&](Tape& t) {
          Var y = ops::concat_channels(t, t.parameter(a), t.parameter(c));
          return ops::flatten(t, ops::pad2d(t, y, 1, 1, 0, 1));
        }, seed));
  }
  {
    Fixture fx(seed + 10);
    auto& x = fx.param("x", {4, 6});
    add("dropout", check_projected(fx, [&](Tape& t) {
          Rng mask_rng(seed);  // same mask on every evaluation
          return ops::dropout(t, t.parameter(x), 0.5, mask_rng, true);
        }, seed));
  }
  {
    Fixture fx(seed + 11);
    auto& e = fx.param("embedding", {4, 6});
    const std::vector<std::int64_t> idx = {0, 5, 2, -1, 3, 3, 1, -1};
    add("embedding_lookup", check_projected(fx, [&](Tape& t) {
          return ops::embedding_lookup(t, t.parameter(e), idx, 2, 4);
        }, seed));
  }
  {
    Fixture fx(seed + 12);
    auto& z = fx.param("logits", {3, 4}, 3.0);
    const std::vector<std::size_t> labels = {0, 3, 1};
    auto loss = [&](Tape& t) { return ops::softmax_xent(t, t.parameter(z), labels); };
    auto params = fx.all();
    add("softmax_xent", grad_check(loss, params, {1e-6, 64, seed}));
  }
  {
    // Stem conv with word stride 2, one dense block, classifier head.
    Fixture fx(seed + 13);
    auto& x = fx.param("x", {2, 5, 6, 8});
    auto& stem_w = fx.param("stem.w", {4, 5, 3, 2}, 0.5);
    auto& stem_b = fx.param("stem.b", {4}, 0.1);
    auto& l0w = fx.param("l0.w", {3, 4, 3, 2}, 0.5);
    auto& l0b = fx.param("l0.b", {3}, 0.1);
    auto& l1w = fx.param("l1.w", {3, 7, 3, 2}, 0.5);
    auto& l1b = fx.param("l1.b", {3}, 0.1);
    auto& fw = fx.param("fc.w", {3, 10 * 2 * 2}, 0.3);
    auto& fb = fx.param("fc.b", {3}, 0.1);
    const std::vector<std::pair<Parameter*, Parameter*>> layers = {{&l0w, &l0b}, {&l1w, &l1b}};
    const std::vector<std::size_t> labels = {1, 2};
    auto loss = [&](Tape& t) {
      Var y = ops::relu(t, ops::conv2d(t, t.parameter(x), t.parameter(stem_w),
                                       t.parameter(stem_b), {1, 2}));
      y = dense_block(t, y, layers);
      y = ops::avg_pool2d(t, y, 2, 2);
      y = ops::linear(t, ops::flatten(t, y), t.parameter(fw), t.parameter(fb));
      return ops::softmax_xent(t, y, labels);
    };
    auto params = fx.all();
    add("dense_block", grad_check(loss, params, {1e-6, 64, seed}));
  }
  return out;
}

}  // namespace s2m
