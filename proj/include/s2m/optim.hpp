// SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include "s2m/autograd.hpp"

namespace s2m {

struct AdamOptions {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Bias-corrected Adam update of every parameter from its populated grad.
/// Increments each parameter's step_count. Gradients are left in place.
void adam_step(std::span<Parameter* const> params, const AdamOptions& options);

void zero_grads(std::span<Parameter* const> params);

}  // namespace s2m
