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

#include <gtest/gtest.h>

#include <cmath>

#include "burger/error.hpp"
#include "burger/propagation.hpp"

namespace burger {
namespace {

Matrix<double> mat(int r, int c, std::initializer_list<double> v) {
  Matrix<double> m(r, c);
  std::copy(v.begin(), v.end(), m.data());
  return m;
}

TEST(UserItem, ZeroLayersPoolToInput) {
  const auto adj = symmetric_normalize<double>(InteractionGraph::from_edges(2, 2, {{0, 0}, {1, 1}}));
  const Matrix<double> u = mat(2, 2, {1, 2, 3, 4}), i = mat(2, 2, {5, 6, 7, 8});
  const auto out = propagate_user_item(adj, u, i, 0);
  EXPECT_EQ(out.pooled_users, u);
  EXPECT_EQ(out.pooled_items, i);
}

TEST(UserItem, SingleEdgeOneLayer) {
  const auto adj = symmetric_normalize<double>(InteractionGraph::from_edges(1, 1, {{0, 0}}));
  const auto out = propagate_user_item(adj, mat(1, 1, {5}), mat(1, 1, {2}), 1);
  EXPECT_DOUBLE_EQ(out.user_layers[1](0, 0), 2.0);
  EXPECT_DOUBLE_EQ(out.pooled_users(0, 0), 3.5);
}

TEST(UserItem, NeighborWeights) {
  const auto adj = symmetric_normalize<double>(InteractionGraph::from_edges(2, 2, {{0, 0}, {0, 1}, {1, 0}}));
  const Matrix<double> items = mat(2, 2, {1, -2, 4, 3});
  const auto out = propagate_user_item(adj, mat(2, 2, {0, 0, 0, 0}), items, 1);
  const Eigen::RowVector2d expected = items.row(0) / 2 + items.row(1) / std::sqrt(2.0);
  EXPECT_NEAR((out.user_layers[1].row(0) - expected).norm(), 0, 1e-15);
}

TEST(UserItem, ShapeMismatchThrows) {
  const auto adj = symmetric_normalize<double>(InteractionGraph::from_edges(2, 2, {{0, 0}}));
  EXPECT_THROW(propagate_user_item(adj, mat(3, 1, {1, 2, 3}), mat(2, 1, {1, 2}), 1), InvalidInput);
}

TEST(UserItem, BackwardSingleEdgeIsHalfWeight) {
  const auto adj = symmetric_normalize<double>(InteractionGraph::from_edges(1, 1, {{0, 0}}));
  const auto [gu, gi] = propagate_user_item_backward(adj, 1, mat(1, 1, {1}), mat(1, 1, {0}));
  EXPECT_DOUBLE_EQ(gi(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(gu(0, 0), 0.5);
}

TEST(UserItem, BackwardZeroLayersIsIdentity) {
  const auto adj = symmetric_normalize<double>(InteractionGraph::from_edges(2, 2, {{0, 0}, {1, 1}}));
  const Matrix<double> g = mat(2, 2, {1, 2, 3, 4});
  const auto [gu, gi] = propagate_user_item_backward(adj, 0, g, g);
  EXPECT_EQ(gu, g);
  EXPECT_EQ(gi, g);
}

TEST(Social, EdgelessSingleSliceZeroLayersIsIdentity) {
  const std::vector<NormalizedAdjacency<double>> slices{symmetric_normalize<double>(SocialGraph::empty(3))};
  const Matrix<double> u = mat(3, 1, {1, 2, 3});
  EXPECT_EQ(propagate_social_tensor<double>(slices, u, 0, AggMode::kMean).aggregated, u);
  EXPECT_EQ(propagate_social_tensor<double>(slices, u, 2, AggMode::kMean).aggregated, u / 3.0);
}

TEST(Social, TwoUserSlice) {
  const std::vector<Edge> e{{0, 1}};
  const std::vector<NormalizedAdjacency<double>> slices{
      symmetric_normalize<double>(SocialGraph::undirected(2, e))};
  const auto out = propagate_social_tensor<double>(slices, mat(2, 1, {1, 3}), 1, AggMode::kMean);
  EXPECT_DOUBLE_EQ(out.aggregated(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(out.aggregated(1, 0), 2.0);
}

TEST(Social, IdenticalSlicesMeanToEither) {
  const std::vector<Edge> e{{0, 1}, {1, 2}};
  const auto s = symmetric_normalize<double>(SocialGraph::undirected(3, e));
  const std::vector<NormalizedAdjacency<double>> slices{s, s};
  const Matrix<double> u = mat(3, 2, {1, 0, 2, 1, -1, 4});
  const auto out = propagate_social_tensor<double>(slices, u, 2, AggMode::kMean);
  EXPECT_NEAR((out.aggregated - out.slice_pooled[0]).norm(), 0, 1e-15);
}

TEST(Social, EmptyTensorThrows) {
  const std::vector<NormalizedAdjacency<double>> none;
  EXPECT_THROW(propagate_social_tensor<double>(none, mat(1, 1, {1}), 1, AggMode::kMean), InvalidInput);
}

TEST(Aggregate, MeanAndMlpIdentity) {
  const std::vector<Matrix<double>> same{mat(1, 2, {1, 2}), mat(1, 2, {1, 2})};
  EXPECT_EQ(aggregate_slices<double>(same, AggMode::kMean), same[0]);
  const std::vector<Matrix<double>> pair{mat(1, 1, {1}), mat(1, 1, {3})};
  EXPECT_DOUBLE_EQ(aggregate_slices<double>(pair, AggMode::kMean)(0, 0), 2.0);
  const std::vector<Matrix<double>> one{mat(1, 3, {-0.5, 0, 2})};
  const auto out = aggregate_slices<double>(one, AggMode::kMlp, AggParams<double>::identity(1));
  for (int k = 0; k < 3; ++k) EXPECT_DOUBLE_EQ(out(0, k), std::tanh(one[0](0, k)));
}

TEST(Aggregate, ShapeMismatchThrows) {
  const std::vector<Matrix<double>> bad{mat(1, 1, {1}), mat(1, 2, {1, 2})};
  EXPECT_THROW(aggregate_slices<double>(bad, AggMode::kMean), InvalidInput);
}

TEST(Social, BackwardWithoutForwardThrows) {
  const std::vector<NormalizedAdjacency<double>> slices{symmetric_normalize<double>(SocialGraph::empty(2))};
  SocialPropagationOutput<double> empty;
  EXPECT_THROW(propagate_social_backward<double>(slices, 1, empty, mat(2, 1, {1, 1})), InvalidState);
}

}  // namespace
}  // namespace burger
