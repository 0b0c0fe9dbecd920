// SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
//
// SPDX-License-Identifier: Apache-2.0

#include "s2m/optim.hpp"

#include <cmath>

namespace s2m {

void adam_step(std::span<Parameter* const> params, const AdamOptions& o) {
  for (Parameter* p : params) {
    ++p->step_count;
    const double t = static_cast<double>(p->step_count);
    const double c1 = 1.0 - std::pow(o.beta1, t);
    const double c2 = 1.0 - std::pow(o.beta2, t);
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      const double g = p->grad[i];
      p->m1[i] = o.beta1 * p->m1[i] + (1.0 - o.beta1) * g;
      p->m2[i] = o.beta2 * p->m2[i] + (1.0 - o.beta2) * g * g;
      const double m_hat = p->m1[i] / c1;
      const double v_hat = p->m2[i] / c2;
      p->value[i] -= o.lr * m_hat / (std::sqrt(v_hat) + o.eps);
    }
  }
}

void zero_grads(std::span<Parameter* const> params) {
  for (Parameter* p : params) p->zero_grad();
}

}  // namespace s2m
