// SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
//
// SPDX-License-Identifier: Apache-2.0

#include "s2m/autograd.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>

#include "s2m/error.hpp"

namespace s2m {

Parameter::Parameter(std::string name_, Tensor value_)
    : name(std::move(name_)),
      value(std::move(value_)),
      grad(value.shape()),
      m1(value.shape()),
      m2(value.shape()) {}

Var Tape::constant(Tensor value) {
  Node node;
  node.value = std::move(value);
  nodes_.push_back(std::move(node));
  return {nodes_.size() - 1};
}

Var Tape::parameter(Parameter& p) {
  Node node;
  node.value = p.value;
  node.requires_grad = true;
  node.param = &p;
  nodes_.push_back(std::move(node));
  return {nodes_.size() - 1};
}

Var Tape::record(Tensor value, std::vector<Var> inputs, BackwardFn backward) {
  Node node;
  node.value = std::move(value);
  node.inputs.reserve(inputs.size());
  for (Var v : inputs) {
    if (v.id >= nodes_.size()) throw ShapeError("tape: input recorded on another tape");
    node.inputs.push_back(v.id);
    node.requires_grad = node.requires_grad || nodes_[v.id].requires_grad;
  }
  if (node.requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return {nodes_.size() - 1};
}

Tensor& Tape::grad_slot(Node& node) {
  if (!node.has_grad) {
    node.grad = Tensor(node.value.shape());
    node.has_grad = true;
  }
  return node.grad;
}

void Tape::backward(Var loss, double seed) {
  Node& root = nodes_.at(loss.id);
  if (root.value.size() != 1) {
    throw ShapeError("backward needs a scalar loss, got shape " +
                     shape_string(root.value.shape()));
  }
  for (auto& node : nodes_) node.has_grad = false;
  grad_slot(root)[0] = seed;

  std::vector<const Tensor*> in;
  std::vector<Tensor*> din;
  for (std::size_t id = loss.id + 1; id-- > 0;) {
    Node& node = nodes_[id];
    if (!node.has_grad || !node.requires_grad) continue;
    if (node.param) {
      Tensor& g = node.param->grad;
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += node.grad[i];
      continue;
    }
    if (!node.backward) continue;
    in.clear();
    din.clear();
    for (std::size_t input : node.inputs) {
      Node& src = nodes_[input];
      in.push_back(&src.value);
      din.push_back(src.requires_grad ? &grad_slot(src) : nullptr);
    }
    node.backward(BackwardContext{node.value, node.grad, in, din});
    // Intermediate gradients are no longer needed.
    node.grad = Tensor();
    node.has_grad = false;
  }
}

namespace ops {
namespace {

void expect_rank(const Tensor& x, std::size_t rank, const char* op) {
  if (x.rank() != rank) {
    throw ShapeError(std::string(op) + ": expected rank " + std::to_string(rank) + ", got " +
                     shape_string(x.shape()));
  }
}

}  // namespace

Var conv2d(Tape& t, Var x, Var filters, Var bias, kernels::Stride2d stride) {
  Tensor y = kernels::conv2d(t.value(x), t.value(filters), t.value(bias), stride);
  return t.record(std::move(y), {x, filters, bias}, [stride](const BackwardContext& c) {
    kernels::conv2d_backward(*c.in[0], *c.in[1], c.dout, stride, c.din[0], c.din[1], c.din[2]);
  });
}

Var conv1d(Tape& t, Var x, Var filters, Var bias, std::size_t stride) {
  Tensor y = kernels::conv1d(t.value(x), t.value(filters), t.value(bias), stride);
  return t.record(std::move(y), {x, filters, bias}, [stride](const BackwardContext& c) {
    kernels::conv1d_backward(*c.in[0], *c.in[1], c.dout, stride, c.din[0], c.din[1], c.din[2]);
  });
}

Var relu(Tape& t, Var x) {
  Tensor y = t.value(x);
  for (double& v : y.data()) v = v > 0.0 ? v : 0.0;
  return t.record(std::move(y), {x}, [](const BackwardContext& c) {
    Tensor& dx = *c.din[0];
    for (std::size_t i = 0; i < dx.size(); ++i) {
      if (c.out[i] > 0.0) dx[i] += c.dout[i];
    }
  });
}

Var avg_pool2d(Tape& t, Var x, std::size_t pool_h, std::size_t pool_w) {
  const Tensor& in = t.value(x);
  expect_rank(in, 4, "avg_pool2d");
  const std::size_t n = in.dim(0), ch = in.dim(1), h = in.dim(2), w = in.dim(3);
  if (pool_h == 0 || pool_w == 0 || h % pool_h != 0 || w % pool_w != 0) {
    throw ShapeError("avg_pool2d: " + std::to_string(h) + "x" + std::to_string(w) +
                     " not divisible by window " + std::to_string(pool_h) + "x" +
                     std::to_string(pool_w));
  }
  const std::size_t ho = h / pool_h, wo = w / pool_w;
  const double scale = 1.0 / static_cast<double>(pool_h * pool_w);
  Tensor y({n, ch, ho, wo});
  for (std::size_t p = 0; p < n * ch; ++p) {
    const double* src = in.raw() + p * h * w;
    double* dst = y.raw() + p * ho * wo;
    for (std::size_t r = 0; r < h; ++r) {
      for (std::size_t q = 0; q < w; ++q) dst[(r / pool_h) * wo + q / pool_w] += src[r * w + q];
    }
    for (std::size_t i = 0; i < ho * wo; ++i) dst[i] *= scale;
  }
  return t.record(std::move(y), {x}, [=](const BackwardContext& c) {
    Tensor& dx = *c.din[0];
    for (std::size_t p = 0; p < n * ch; ++p) {
      const double* g = c.dout.raw() + p * ho * wo;
      double* dst = dx.raw() + p * h * w;
      for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t q = 0; q < w; ++q) dst[r * w + q] += g[(r / pool_h) * wo + q / pool_w] * scale;
      }
    }
  });
}

namespace {

// Shared by max_pool1d and global_max1d: out[p, k] = max of in[p, k*window ..]
Var max_over_windows(Tape& t, Var x, std::size_t window, std::size_t windows, Shape out_shape) {
  const Tensor& in = t.value(x);
  const std::size_t rows = in.dim(0) * in.dim(1);
  const std::size_t len = in.dim(2);
  Tensor y(std::move(out_shape));
  std::vector<std::size_t> argmax(rows * windows);
  for (std::size_t p = 0; p < rows; ++p) {
    const double* src = in.raw() + p * len;
    for (std::size_t k = 0; k < windows; ++k) {
      std::size_t best = k * window;
      for (std::size_t i = best + 1; i < (k + 1) * window; ++i) {
        if (src[i] > src[best]) best = i;
      }
      y[p * windows + k] = src[best];
      argmax[p * windows + k] = p * len + best;
    }
  }
  return t.record(std::move(y), {x}, [argmax = std::move(argmax)](const BackwardContext& c) {
    Tensor& dx = *c.din[0];
    for (std::size_t i = 0; i < argmax.size(); ++i) dx[argmax[i]] += c.dout[i];
  });
}

}  // namespace

Var max_pool1d(Tape& t, Var x, std::size_t window) {
  const Tensor& in = t.value(x);
  expect_rank(in, 3, "max_pool1d");
  if (window == 0 || window > in.dim(2)) {
    throw ShapeError("max_pool1d: window " + std::to_string(window) + " does not fit length " +
                     std::to_string(in.dim(2)));
  }
  const std::size_t windows = in.dim(2) / window;
  return max_over_windows(t, x, window, windows, {in.dim(0), in.dim(1), windows});
}

Var global_max1d(Tape& t, Var x) {
  const Tensor& in = t.value(x);
  expect_rank(in, 3, "global_max1d");
  return max_over_windows(t, x, in.dim(2), 1, {in.dim(0), in.dim(1)});
}

Var pad2d(Tape& t, Var x, std::size_t top, std::size_t bottom, std::size_t left,
          std::size_t right) {
  const Tensor& in = t.value(x);
  expect_rank(in, 4, "pad2d");
  const std::size_t n = in.dim(0), ch = in.dim(1), h = in.dim(2), w = in.dim(3);
  const std::size_t hp = h + top + bottom, wp = w + left + right;
  Tensor y({n, ch, hp, wp});
  for (std::size_t p = 0; p < n * ch; ++p) {
    for (std::size_t r = 0; r < h; ++r) {
      std::copy_n(in.raw() + (p * h + r) * w, w, y.raw() + (p * hp + r + top) * wp + left);
    }
  }
  return t.record(std::move(y), {x}, [=](const BackwardContext& c) {
    Tensor& dx = *c.din[0];
    for (std::size_t p = 0; p < n * ch; ++p) {
      for (std::size_t r = 0; r < h; ++r) {
        const double* g = c.dout.raw() + (p * hp + r + top) * wp + left;
        double* dst = dx.raw() + (p * h + r) * w;
        for (std::size_t q = 0; q < w; ++q) dst[q] += g[q];
      }
    }
  });
}

Var concat_channels(Tape& t, std::span<const Var> parts) {
  if (parts.empty()) throw ShapeError("concat_channels: nothing to concatenate");
  const Tensor& first = t.value(parts[0]);
  if (first.rank() < 2) throw ShapeError("concat_channels: inputs need a channel axis");
  const std::size_t n = first.dim(0);
  std::size_t inner = 1;
  for (std::size_t a = 2; a < first.rank(); ++a) inner *= first.dim(a);

  std::vector<std::size_t> widths;  // channels * inner per part
  std::size_t total_channels = 0;
  std::vector<Var> inputs(parts.begin(), parts.end());
  for (Var v : parts) {
    const Tensor& p = t.value(v);
    bool ok = p.rank() == first.rank() && p.dim(0) == n;
    for (std::size_t a = 2; ok && a < p.rank(); ++a) ok = p.dim(a) == first.dim(a);
    if (!ok) {
      throw ShapeError("concat_channels: " + shape_string(p.shape()) + " incompatible with " +
                       shape_string(first.shape()));
    }
    total_channels += p.dim(1);
    widths.push_back(p.dim(1) * inner);
  }
  Shape shape = first.shape();
  shape[1] = total_channels;
  Tensor y(shape);
  const std::size_t row = total_channels * inner;
  std::size_t offset = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const Tensor& p = t.value(parts[k]);
    for (std::size_t s = 0; s < n; ++s) {
      std::copy_n(p.raw() + s * widths[k], widths[k], y.raw() + s * row + offset);
    }
    offset += widths[k];
  }
  return t.record(std::move(y), std::move(inputs), [widths, n, row](const BackwardContext& c) {
    std::size_t off = 0;
    for (std::size_t k = 0; k < widths.size(); ++k) {
      if (Tensor* dx = c.din[k]) {
        for (std::size_t s = 0; s < n; ++s) {
          const double* g = c.dout.raw() + s * row + off;
          double* dst = dx->raw() + s * widths[k];
          for (std::size_t i = 0; i < widths[k]; ++i) dst[i] += g[i];
        }
      }
      off += widths[k];
    }
  });
}

Var concat_channels(Tape& t, Var a, Var b) {
  const Var parts[] = {a, b};
  return concat_channels(t, parts);
}

Var flatten(Tape& t, Var x) {
  const Tensor& in = t.value(x);
  if (in.rank() < 1) throw ShapeError("flatten: scalar input");
  const std::size_t n = in.dim(0);
  return t.record(in.reshaped({n, in.size() / n}), {x}, [](const BackwardContext& c) {
    Tensor& dx = *c.din[0];
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += c.dout[i];
  });
}

Var linear(Tape& t, Var x, Var weight, Var bias) {
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Tensor& in = t.value(x);
  const Tensor& w = t.value(weight);
  const Tensor& b = t.value(bias);
  expect_rank(in, 2, "linear");
  expect_rank(w, 2, "linear weight");
  const std::size_t n = in.dim(0), d = in.dim(1), o = w.dim(0);
  if (w.dim(1) != d || b.rank() != 1 || b.dim(0) != o) {
    throw ShapeError("linear: input " + shape_string(in.shape()) + ", weight " +
                     shape_string(w.shape()) + ", bias " + shape_string(b.shape()));
  }
  Tensor y({n, o});
  {
    Eigen::Map<const RowMat> xm(in.raw(), n, d), wm(w.raw(), o, d);
    Eigen::Map<RowMat> ym(y.raw(), n, o);
    ym.noalias() = xm * wm.transpose();
    ym.rowwise() += Eigen::Map<const Eigen::RowVectorXd>(b.raw(), o);
  }
  return t.record(std::move(y), {x, weight, bias}, [n, d, o](const BackwardContext& c) {
    Eigen::Map<const RowMat> g(c.dout.raw(), n, o);
    if (Tensor* dx = c.din[0]) {
      Eigen::Map<RowMat>(dx->raw(), n, d).noalias() +=
          g * Eigen::Map<const RowMat>(c.in[1]->raw(), o, d);
    }
    if (Tensor* dw = c.din[1]) {
      Eigen::Map<RowMat>(dw->raw(), o, d).noalias() +=
          g.transpose() * Eigen::Map<const RowMat>(c.in[0]->raw(), n, d);
    }
    if (Tensor* db = c.din[2]) {
      Eigen::Map<Eigen::RowVectorXd>(db->raw(), o) += g.colwise().sum();
    }
  });
}

Var dropout(Tape& t, Var x, double keep_rate, Rng& rng, bool training) {
  if (!(keep_rate > 0.0 && keep_rate <= 1.0)) {
    throw ConfigError("dropout keep rate must be in (0, 1], got " + std::to_string(keep_rate));
  }
  if (!training || keep_rate == 1.0) return x;
  const Tensor& in = t.value(x);
  Tensor mask(in.shape());
  std::bernoulli_distribution keep(keep_rate);
  const double scale = 1.0 / keep_rate;
  Tensor y(in.shape());
  for (std::size_t i = 0; i < in.size(); ++i) {
    mask[i] = keep(rng) ? scale : 0.0;
    y[i] = in[i] * mask[i];
  }
  return t.record(std::move(y), {x}, [mask = std::move(mask)](const BackwardContext& c) {
    Tensor& dx = *c.din[0];
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += c.dout[i] * mask[i];
  });
}

Var embedding_lookup(Tape& t, Var embedding, std::span<const std::int64_t> indices,
                     std::size_t batch, std::size_t n) {
  const Tensor& e = t.value(embedding);
  expect_rank(e, 2, "embedding_lookup");
  if (indices.size() != batch * n) {
    throw ShapeError("embedding_lookup: " + std::to_string(indices.size()) +
                     " indices for a " + std::to_string(batch) + "x" + std::to_string(n) +
                     " batch");
  }
  const std::size_t d = e.dim(0);
  const auto vocab = static_cast<std::int64_t>(e.dim(1));
  for (std::int64_t idx : indices) {
    if (idx < -1 || idx >= vocab) throw ShapeError("embedding_lookup: index out of range");
  }
  Tensor y({batch, d, n});
  for (std::size_t s = 0; s < batch; ++s) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::int64_t idx = indices[s * n + j];
      if (idx < 0) continue;
      for (std::size_t r = 0; r < d; ++r) y[(s * d + r) * n + j] = e[r * vocab + idx];
    }
  }
  std::vector<std::int64_t> idx_copy(indices.begin(), indices.end());
  return t.record(std::move(y), {embedding},
                  [idx_copy = std::move(idx_copy), batch, n, d, vocab](const BackwardContext& c) {
                    Tensor& de = *c.din[0];
                    for (std::size_t s = 0; s < batch; ++s) {
                      for (std::size_t j = 0; j < n; ++j) {
                        const std::int64_t idx = idx_copy[s * n + j];
                        if (idx < 0) continue;
                        for (std::size_t r = 0; r < d; ++r) {
                          de[r * vocab + idx] += c.dout[(s * d + r) * n + j];
                        }
                      }
                    }
                  });
}

Var softmax_xent(Tape& t, Var logits, std::span<const std::size_t> labels) {
  XentResult r = s2m::softmax_xent(t.value(logits), labels);
  return t.record(Tensor::scalar(r.loss), {logits},
                  [grad = std::move(r.grad)](const BackwardContext& c) {
                    Tensor& dx = *c.din[0];
                    const double g = c.dout[0];
                    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += g * grad[i];
                  });
}

Var weighted_sum(Tape& t, Var x, const Tensor& weights) {
  const Tensor& in = t.value(x);
  if (in.shape() != weights.shape()) {
    throw ShapeError("weighted_sum: weights " + shape_string(weights.shape()) +
                     " do not match " + shape_string(in.shape()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < in.size(); ++i) s += in[i] * weights[i];
  return t.record(Tensor::scalar(s), {x}, [weights](const BackwardContext& c) {
    Tensor& dx = *c.din[0];
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += c.dout[0] * weights[i];
  });
}

}  // namespace ops

XentResult softmax_xent(const Tensor& logits, std::span<const std::size_t> labels) {
  if (logits.rank() != 2) {
    throw ShapeError("softmax_xent: logits must be [batch, classes], got " +
                     shape_string(logits.shape()));
  }
  const std::size_t n = logits.dim(0), k = logits.dim(1);
  if (labels.size() != n) {
    throw ShapeError("softmax_xent: " + std::to_string(labels.size()) + " labels for batch of " +
                     std::to_string(n));
  }
  XentResult r{0.0, Tensor(logits.shape())};
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t s = 0; s < n; ++s) {
    if (labels[s] >= k) {
      throw ConfigError("label " + std::to_string(labels[s]) + " out of range for " +
                        std::to_string(k) + " classes");
    }
    const double* z = logits.raw() + s * k;
    const double zmax = *std::max_element(z, z + k);
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) sum += std::exp(z[j] - zmax);
    const double log_sum = zmax + std::log(sum);
    r.loss += (log_sum - z[labels[s]]) * inv_n;
    double* g = r.grad.raw() + s * k;
    for (std::size_t j = 0; j < k; ++j) {
      g[j] = (std::exp(z[j] - log_sum) - (j == labels[s] ? 1.0 : 0.0)) * inv_n;
    }
  }
  return r;
}

}  // namespace s2m
