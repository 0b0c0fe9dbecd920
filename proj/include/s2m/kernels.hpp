// SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

#include "s2m/tensor.hpp"

/// Raw forward/backward kernels. No implicit spatial padding anywhere: output
/// sizes are valid-convolution sizes floor((in - k) / stride) + 1.
namespace s2m::kernels {

struct Stride2d {
  std::size_t h = 1;  ///< along the character axis
  std::size_t w = 1;  ///< along the word axis
};

/// x: [N, C, H, W] or unbatched [C, H, W]; filters: [O, C, KH, KW]; bias: [O].
/// Returns [N, O, H', W'] (or [O, H', W'] for unbatched input).
Tensor conv2d(const Tensor& x, const Tensor& filters, const Tensor& bias, Stride2d stride);

/// Accumulates gradients of conv2d into the non-null outputs, which must be
/// shaped like x, filters and bias.
void conv2d_backward(const Tensor& x, const Tensor& filters, const Tensor& dy, Stride2d stride,
                     Tensor* dx, Tensor* dfilters, Tensor* dbias);

/// x: [N, C, L] or [C, L]; filters: [O, C, K]; bias: [O].
Tensor conv1d(const Tensor& x, const Tensor& filters, const Tensor& bias, std::size_t stride);

void conv1d_backward(const Tensor& x, const Tensor& filters, const Tensor& dy,
                     std::size_t stride, Tensor* dx, Tensor* dfilters, Tensor* dbias);

}  // namespace s2m::kernels
