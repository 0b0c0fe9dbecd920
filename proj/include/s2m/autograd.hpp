// SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "s2m/kernels.hpp"
#include "s2m/tensor.hpp"

namespace s2m {

/// A learnable tensor together with its gradient and Adam moments.
struct Parameter {
  Parameter(std::string name, Tensor value);

  std::string name;
  Tensor value;
  Tensor grad;
  Tensor m1;
  Tensor m2;
  std::uint64_t step_count = 0;

  void zero_grad() { grad.fill(0.0); }
};

using Rng = std::mt19937_64;

/// Handle to a value recorded on a Tape.
struct Var {
  std::size_t id = 0;
};

/// Everything a backward rule sees: its own output and upstream gradient,
/// its input values, and gradient slots for the inputs that need one
/// (nullptr otherwise).
struct BackwardContext {
  const Tensor& out;
  const Tensor& dout;
  std::span<const Tensor* const> in;
  std::span<Tensor* const> din;
};

using BackwardFn = std::function<void(const BackwardContext&)>;

/// Records operations in execution order and replays their adjoints in
/// reverse. Single owner; not thread-safe.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor value);
  /// Leaf bound to `p`; backward() accumulates into p.grad.
  Var parameter(Parameter& p);
  Var record(Tensor value, std::vector<Var> inputs, BackwardFn backward);

  const Tensor& value(Var v) const { return nodes_.at(v.id).value; }
  bool requires_grad(Var v) const { return nodes_.at(v.id).requires_grad; }
  std::size_t size() const noexcept { return nodes_.size(); }

  /// Seeds d(loss)/d(loss) = seed and propagates to every parameter leaf,
  /// accumulating into Parameter::grad. Throws ShapeError if `loss` is not
  /// a single value.
  void backward(Var loss, double seed = 1.0);

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    bool requires_grad = false;
    bool has_grad = false;
    Parameter* param = nullptr;
    std::vector<std::size_t> inputs;
    BackwardFn backward;
  };

  Tensor& grad_slot(Node& node);

  std::vector<Node> nodes_;
};

namespace ops {

Var conv2d(Tape& t, Var x, Var filters, Var bias, kernels::Stride2d stride);
Var conv1d(Tape& t, Var x, Var filters, Var bias, std::size_t stride);
Var relu(Tape& t, Var x);
/// Non-overlapping mean over pool_h x pool_w windows of [N, C, H, W]; H and
/// W must be divisible by the window.
Var avg_pool2d(Tape& t, Var x, std::size_t pool_h, std::size_t pool_w);
/// Non-overlapping max over windows of [N, C, L]; a trailing remainder
/// shorter than the window is dropped.
Var max_pool1d(Tape& t, Var x, std::size_t window);
/// Max over the last axis of [N, C, L], giving [N, C].
Var global_max1d(Tape& t, Var x);
/// Explicit zero padding of [N, C, H, W] feature maps.
Var pad2d(Tape& t, Var x, std::size_t top, std::size_t bottom, std::size_t left,
          std::size_t right);
/// Concatenates along axis 1; all other axes must agree.
Var concat_channels(Tape& t, std::span<const Var> parts);
Var concat_channels(Tape& t, Var a, Var b);
/// [N, ...] -> [N, rest].
Var flatten(Tape& t, Var x);
/// x: [N, D], weight: [O, D], bias: [O] -> [N, O].
Var linear(Tape& t, Var x, Var weight, Var bias);
/// Inverted dropout: keeps each entry with probability keep_rate and scales
/// by 1/keep_rate. Identity when not training or keep_rate == 1.
Var dropout(Tape& t, Var x, double keep_rate, Rng& rng, bool training);
/// embedding: [d, V]; indices: N*n entries, -1 marks an empty position.
/// Returns [N, d, n].
Var embedding_lookup(Tape& t, Var embedding, std::span<const std::int64_t> indices,
                     std::size_t batch, std::size_t n);
/// Mean cross-entropy over the batch; labels in 0..classes-1.
Var softmax_xent(Tape& t, Var logits, std::span<const std::size_t> labels);
/// Sum of weights * x; weights must match x's shape.
Var weighted_sum(Tape& t, Var x, const Tensor& weights);

}  // namespace ops

struct XentResult {
  double loss = 0.0;
  Tensor grad;  ///< (softmax - one_hot) / batch
};

/// Numerically stable mean softmax cross-entropy and its logit gradient.
XentResult softmax_xent(const Tensor& logits, std::span<const std::size_t> labels);

}  // namespace s2m
