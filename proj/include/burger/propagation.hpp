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
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "burger/error.hpp"
#include "burger/graph.hpp"
#include "burger/random.hpp"

namespace burger {

/// Embedding matrices are row-major so a user's or item's vector is contiguous.
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

enum class AggMode { kMean, kMlp };

/// Affine map over the slice axis: out = tanh(sum_t w_t * slice_t + b).
/// The weights are shared across embedding dimensions.
template <typename Scalar>
struct AggParams {
  Vector<Scalar> weights;
  Scalar bias = 0;

  /// w_t = 1/tau, b = 0. For tau = 1 this is the identity before tanh.
  static AggParams identity(std::size_t tau) {
    AggParams p;
    p.weights = Vector<Scalar>::Constant(static_cast<Eigen::Index>(tau), Scalar(1) / Scalar(tau));
    return p;
  }
};

template <typename Scalar>
struct EmbeddingState {
  Matrix<Scalar> users;
  Matrix<Scalar> items;
  AggParams<Scalar> agg;

  Eigen::Index dim() const { return users.cols(); }

  bool all_finite() const {
    return users.allFinite() && items.allFinite() && agg.weights.allFinite() &&
           std::isfinite(agg.bias);
  }

  /// i.i.d. N(0, std_dev^2) entries.
  static EmbeddingState gaussian(int num_users, int num_items, int dim, double std_dev,
                                 std::uint64_t seed, std::size_t tau = 1) {
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, std_dev);
    EmbeddingState s;
    s.users.resize(num_users, dim);
    s.items.resize(num_items, dim);
    for (Eigen::Index k = 0; k < s.users.size(); ++k) s.users.data()[k] = Scalar(normal(rng));
    for (Eigen::Index k = 0; k < s.items.size(); ++k) s.items.data()[k] = Scalar(normal(rng));
    s.agg = AggParams<Scalar>::identity(tau);
    return s;
  }
};

template <typename Scalar>
struct PropagationOutput {
  std::vector<Matrix<Scalar>> user_layers;
  std::vector<Matrix<Scalar>> item_layers;
  Matrix<Scalar> pooled_users;
  Matrix<Scalar> pooled_items;
};

template <typename Scalar>
struct SocialPropagationOutput {
  /// Per-slice layer-mean matrices, oldest slice first.
  std::vector<Matrix<Scalar>> slice_pooled;
  Matrix<Scalar> aggregated;
  AggMode mode = AggMode::kMean;
  AggParams<Scalar> params;
};

/// Light graph convolution on the user-item graph followed by layer mean
/// pooling. Layer k+1 users are A * items_k, items are A^T * users_k.
template <typename Scalar>
PropagationOutput<Scalar> propagate_user_item(const NormalizedAdjacency<Scalar>& adj,
                                              const Matrix<Scalar>& users,
                                              const Matrix<Scalar>& items, int layers) {
  if (adj.rows() != users.rows() || adj.cols() != items.rows() || users.cols() != items.cols())
    throw InvalidInput("propagation", "propagate_user_item",
                       "adjacency is " + std::to_string(adj.rows()) + "x" + std::to_string(adj.cols()) +
                           " but embeddings are " + std::to_string(users.rows()) + "x" +
                           std::to_string(users.cols()) + " / " + std::to_string(items.rows()) + "x" +
                           std::to_string(items.cols()));
  if (layers < 0) throw InvalidConfiguration("propagation", "propagate_user_item", "K must be >= 0");

  PropagationOutput<Scalar> out;
  out.user_layers.reserve(layers + 1);
  out.item_layers.reserve(layers + 1);
  out.user_layers.push_back(users);
  out.item_layers.push_back(items);
  out.pooled_users = users;
  out.pooled_items = items;
  for (int k = 0; k < layers; ++k) {
    Matrix<Scalar> next_users = adj.weights * out.item_layers.back();
    Matrix<Scalar> next_items = adj.weights.transpose() * out.user_layers.back();
    out.pooled_users += next_users;
    out.pooled_items += next_items;
    out.user_layers.push_back(std::move(next_users));
    out.item_layers.push_back(std::move(next_items));
  }
  const Scalar scale = Scalar(1) / Scalar(layers + 1);
  out.pooled_users *= scale;
  out.pooled_items *= scale;
  return out;
}

/// Adjoint of propagate_user_item: maps gradients on the pooled outputs to
/// gradients on the layer-0 embeddings. The map is linear so no forward cache
/// is needed.
template <typename Scalar>
std::pair<Matrix<Scalar>, Matrix<Scalar>> propagate_user_item_backward(
    const NormalizedAdjacency<Scalar>& adj, int layers, const Matrix<Scalar>& grad_pooled_users,
    const Matrix<Scalar>& grad_pooled_items) {
  if (adj.rows() != grad_pooled_users.rows() || adj.cols() != grad_pooled_items.rows())
    throw InvalidInput("propagation", "backward_through_propagation", "gradient shape mismatch");
  const Scalar scale = Scalar(1) / Scalar(layers + 1);
  const Matrix<Scalar> gu = grad_pooled_users * scale;
  const Matrix<Scalar> gi = grad_pooled_items * scale;
  Matrix<Scalar> du = gu;
  Matrix<Scalar> di = gi;
  for (int k = layers - 1; k >= 0; --k) {
    Matrix<Scalar> prev_u = gu + adj.weights * di;
    Matrix<Scalar> prev_i = gi + adj.weights.transpose() * du;
    du = std::move(prev_u);
    di = std::move(prev_i);
  }
  return {std::move(du), std::move(di)};
}

/// Layer-mean of repeated products with one normalized social slice.
template <typename Scalar>
Matrix<Scalar> propagate_social_slice(const NormalizedAdjacency<Scalar>& slice,
                                      const Matrix<Scalar>& users, int layers) {
  Matrix<Scalar> layer = users;
  Matrix<Scalar> pooled = users;
  for (int k = 0; k < layers; ++k) {
    layer = slice.weights * layer;
    pooled += layer;
  }
  pooled *= Scalar(1) / Scalar(layers + 1);
  return pooled;
}

template <typename Scalar>
Matrix<Scalar> aggregate_slices(std::span<const Matrix<Scalar>> slices, AggMode mode,
                                const AggParams<Scalar>& params = {}) {
  if (slices.empty()) throw InvalidInput("propagation", "aggregate_slices", "no slices");
  for (const auto& s : slices)
    if (s.rows() != slices[0].rows() || s.cols() != slices[0].cols())
      throw InvalidInput("propagation", "aggregate_slices", "slice shapes differ");

  if (mode == AggMode::kMean) {
    Matrix<Scalar> out = slices[0];
    for (std::size_t t = 1; t < slices.size(); ++t) out += slices[t];
    out *= Scalar(1) / Scalar(slices.size());
    return out;
  }
  if (params.weights.size() != static_cast<Eigen::Index>(slices.size()))
    throw InvalidInput("propagation", "aggregate_slices", "mlp weight count differs from tau");
  Matrix<Scalar> z = Matrix<Scalar>::Constant(slices[0].rows(), slices[0].cols(), params.bias);
  for (std::size_t t = 0; t < slices.size(); ++t) z += params.weights(static_cast<Eigen::Index>(t)) * slices[t];
  return z.array().tanh().matrix();
}

/// Tensor convolution: every slice propagates its own copy of `users`, the
/// per-slice layer means are then aggregated.
template <typename Scalar>
SocialPropagationOutput<Scalar> propagate_social_tensor(
    std::span<const NormalizedAdjacency<Scalar>> slices, const Matrix<Scalar>& users, int layers,
    AggMode mode, const AggParams<Scalar>& params = {}) {
  if (slices.empty()) throw InvalidInput("propagation", "propagate_social_tensor", "empty tensor");
  for (const auto& s : slices)
    if (s.rows() != users.rows() || s.cols() != users.rows())
      throw InvalidInput("propagation", "propagate_social_tensor",
                         "slice is " + std::to_string(s.rows()) + "x" + std::to_string(s.cols()) +
                             " but there are " + std::to_string(users.rows()) + " users");
  if (layers < 0) throw InvalidConfiguration("propagation", "propagate_social_tensor", "K must be >= 0");

  SocialPropagationOutput<Scalar> out;
  out.mode = mode;
  out.params = params;
  out.slice_pooled.reserve(slices.size());
  for (const auto& s : slices) out.slice_pooled.push_back(propagate_social_slice(s, users, layers));
  out.aggregated = aggregate_slices<Scalar>(out.slice_pooled, mode, params);
  return out;
}

template <typename Scalar>
struct SocialGradients {
  Matrix<Scalar> users;
  /// Populated in mlp mode only.
  AggParams<Scalar> agg;
};

/// Adjoint of propagate_social_tensor. Needs the forward output for the
/// tanh path; an empty cache throws InvalidState.
template <typename Scalar>
SocialGradients<Scalar> propagate_social_backward(
    std::span<const NormalizedAdjacency<Scalar>> slices, int layers,
    const SocialPropagationOutput<Scalar>& forward, const Matrix<Scalar>& grad_aggregated) {
  if (forward.slice_pooled.size() != slices.size() || forward.aggregated.size() == 0)
    throw InvalidState("propagation", "backward_through_propagation", "missing forward cache");
  if (grad_aggregated.rows() != forward.aggregated.rows() ||
      grad_aggregated.cols() != forward.aggregated.cols())
    throw InvalidInput("propagation", "backward_through_propagation", "gradient shape mismatch");

  const auto tau = static_cast<Eigen::Index>(slices.size());
  SocialGradients<Scalar> out;
  std::vector<Matrix<Scalar>> grad_slices;
  grad_slices.reserve(slices.size());
  if (forward.mode == AggMode::kMean) {
    const Matrix<Scalar> g = grad_aggregated * (Scalar(1) / Scalar(tau));
    grad_slices.assign(slices.size(), g);
  } else {
    const Matrix<Scalar> dz =
        (grad_aggregated.array() * (Scalar(1) - forward.aggregated.array().square())).matrix();
    out.agg.weights.resize(tau);
    for (Eigen::Index t = 0; t < tau; ++t) {
      out.agg.weights(t) = (dz.array() * forward.slice_pooled[t].array()).sum();
      grad_slices.push_back(forward.params.weights(t) * dz);
    }
    out.agg.bias = dz.sum();
  }

  const Scalar scale = Scalar(1) / Scalar(layers + 1);
  out.users = Matrix<Scalar>::Zero(grad_aggregated.rows(), grad_aggregated.cols());
  for (std::size_t t = 0; t < slices.size(); ++t) {
    const Matrix<Scalar> g = grad_slices[t] * scale;
    Matrix<Scalar> d = g;
    for (int k = layers - 1; k >= 0; --k) d = g + slices[t].weights.transpose() * d;
    out.users += d;
  }
  return out;
}

}  // namespace burger
