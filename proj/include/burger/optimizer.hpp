/*
 * Copyright 2026 The Burger Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cmath>
#include <cstdint>

#include <Eigen/Dense>

#include "burger/error.hpp"
#include "burger/propagation.hpp"

namespace burger {

template <typename Scalar>
struct AdamConfig {
  Scalar learning_rate = Scalar(1e-3);
  Scalar beta1 = Scalar(0.9);
  Scalar beta2 = Scalar(0.999);
  Scalar epsilon = Scalar(1e-8);
};

/// Gradients for every trainable block of an EmbeddingState.
template <typename Scalar>
struct EmbeddingGradients {
  Matrix<Scalar> users;
  Matrix<Scalar> items;
  AggParams<Scalar> agg;
};

/// First/second moments mirroring EmbeddingState.
template <typename Scalar>
struct OptimizerState {
  Matrix<Scalar> m_users, v_users;
  Matrix<Scalar> m_items, v_items;
  Vector<Scalar> m_agg, v_agg;
  Scalar m_bias = 0, v_bias = 0;
  std::int64_t step = 0;

  static OptimizerState zeros_like(const EmbeddingState<Scalar>& s) {
    OptimizerState o;
    o.m_users = o.v_users = Matrix<Scalar>::Zero(s.users.rows(), s.users.cols());
    o.m_items = o.v_items = Matrix<Scalar>::Zero(s.items.rows(), s.items.cols());
    o.m_agg = o.v_agg = Vector<Scalar>::Zero(s.agg.weights.size());
    return o;
  }
};

/// Bias-corrected Adam update of one block. `step` is the 1-based step index.
template <typename P, typename G, typename M, typename V, typename Scalar>
void adam_update(Eigen::MatrixBase<P>& param, const Eigen::MatrixBase<G>& grad, Eigen::MatrixBase<M>& m,
                 Eigen::MatrixBase<V>& v, std::int64_t step, const AdamConfig<Scalar>& cfg) {
  const Scalar c1 = Scalar(1) - std::pow(cfg.beta1, Scalar(step));
  const Scalar c2 = Scalar(1) - std::pow(cfg.beta2, Scalar(step));
  m.array() = cfg.beta1 * m.array() + (Scalar(1) - cfg.beta1) * grad.array();
  v.array() = cfg.beta2 * v.array() + (Scalar(1) - cfg.beta2) * grad.array().square();
  param.array() -= cfg.learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + cfg.epsilon);
}

/// One optimizer step over all blocks. `update_agg` is false in mean-AGG
/// mode where the aggregation weights are unused. Throws NumericalError on
/// non-finite gradients (parameters are left untouched in that case).
template <typename Scalar>
void adam_step(EmbeddingState<Scalar>& params, const EmbeddingGradients<Scalar>& grads,
               OptimizerState<Scalar>& state, const AdamConfig<Scalar>& cfg, bool update_agg = false) {
  if (grads.users.rows() != params.users.rows() || grads.users.cols() != params.users.cols() ||
      grads.items.rows() != params.items.rows() || grads.items.cols() != params.items.cols() ||
      state.m_users.rows() != params.users.rows() || state.m_items.rows() != params.items.rows())
    throw InvalidInput("trainer", "adam_step", "gradient or moment shape differs from parameters");
  if (!grads.users.allFinite() || !grads.items.allFinite() ||
      (update_agg && (!grads.agg.weights.allFinite() || !std::isfinite(grads.agg.bias))))
    throw NumericalError("trainer", "adam_step",
                         "non-finite gradient at step " + std::to_string(state.step + 1));

  ++state.step;
  adam_update(params.users, grads.users, state.m_users, state.v_users, state.step, cfg);
  adam_update(params.items, grads.items, state.m_items, state.v_items, state.step, cfg);
  if (update_agg) {
    adam_update(params.agg.weights, grads.agg.weights, state.m_agg, state.v_agg, state.step, cfg);
    Eigen::Matrix<Scalar, 1, 1> b{params.agg.bias}, gb{grads.agg.bias}, mb{state.m_bias},
        vb{state.v_bias};
    adam_update(b, gb, mb, vb, state.step, cfg);
    params.agg.bias = b(0);
    state.m_bias = mb(0);
    state.v_bias = vb(0);
  }
}

}  // namespace burger
