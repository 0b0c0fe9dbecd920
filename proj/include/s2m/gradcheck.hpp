// SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "s2m/autograd.hpp"

namespace s2m {

/// Builds a scalar loss on a fresh tape from the current parameter values.
using LossBuilder = std::function<Var(Tape&)>;

struct GradCheckOptions {
  double h = 1e-6;
  /// Entries probed per parameter; all entries when the parameter is smaller.
  std::size_t samples_per_param = 64;
  std::uint64_t seed = 0;
};

/// Max over probed entries of |analytic - numeric| / max(1e-8, |analytic| + |numeric|),
/// numeric being the central difference with step h.
double grad_check(const LossBuilder& loss, std::span<Parameter* const> params,
                  const GradCheckOptions& options = {});

struct GradCheckReport {
  std::string family;
  double max_rel_error = 0.0;
};

/// Finite-difference check of every layer family plus a small dense block.
std::vector<GradCheckReport> run_gradcheck_suite(std::uint64_t seed);

}  // namespace s2m
