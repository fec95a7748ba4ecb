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
#include <map>

#include "burger/error.hpp"
#include "burger/objective.hpp"
#include "burger/selfcheck.hpp"

namespace burger {
namespace {

Matrix<double> rows(std::initializer_list<std::initializer_list<double>> r) {
  Matrix<double> m(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(r.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : r) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

TEST(Similarity, Examples) {
  const Eigen::RowVector2d a(1, 0), b(0, 1), c(1, 2), d(3, -1);
  EXPECT_DOUBLE_EQ(interest_similarity(a, a), 1.0);
  EXPECT_DOUBLE_EQ(interest_similarity(a, b), 0.0);
  EXPECT_DOUBLE_EQ(interest_similarity(c, d), 1.0);
  EXPECT_DOUBLE_EQ(social_similarity(c, d), 1.0);
  EXPECT_THROW(interest_similarity(Eigen::RowVectorXd(a), Eigen::RowVectorXd::Ones(3)), InvalidInput);
}

TEST(Score, ZeroUserAndOrderAndSymmetry) {
  const Eigen::RowVector2d zero(0, 0), u(1, 0), i1(2, 0), i2(1, 1);
  EXPECT_EQ(predict_score(zero, i1), 0.0);
  EXPECT_GT(predict_score(u, i1), predict_score(u, i2));
  EXPECT_EQ(predict_score(u, i2), predict_score(i2, u));
}

TEST(Bpr, BalancedTripleCostsLn2) {
  const Matrix<double> users = rows({{1, 1}}), items = rows({{1, 0}, {0, 1}});
  const auto l = bpr_item_loss(users, items, {{0, 0, 1}});
  EXPECT_NEAR(l.value, std::log(2.0), 1e-15);
  const auto s = bpr_social_loss(rows({{1, 1}, {1, 0}, {0, 1}}), {{0, 1, 2}});
  EXPECT_NEAR(s.value, std::log(2.0), 1e-15);
}

TEST(Bpr, SaturatesToZero) {
  const Matrix<double> users = rows({{1}}), items = rows({{800}, {-800}});
  const auto l = bpr_item_loss(users, items, {{0, 0, 1}});
  EXPECT_EQ(l.value, 0.0);
  EXPECT_TRUE(l.grad_users.allFinite());
}

PairSimilarities<double> coeffs(double pos, double neg) { return {{pos}, {neg}}; }

TEST(Omega1, HingeBoundary) {
  // sigma(0) = 0.5 on both sides, varphi+ = 2, varphi- = 0.
  const Matrix<double> social = rows({{1, 1}, {2, 0}, {0, 0}});
  const auto l = bisemantic_omega1(social, coeffs(0, 0), {{0, 1, 2}}, 1.0);
  EXPECT_DOUBLE_EQ(l.value, 0.0);
  EXPECT_EQ(l.grad.norm(), 0.0);
}

TEST(Omega1, ActiveHinge) {
  const Matrix<double> social = rows({{1, 1}, {0, 0}, {2, 0}});
  const auto l = bisemantic_omega1(social, coeffs(0, 0), {{0, 1, 2}}, 1.0);
  EXPECT_DOUBLE_EQ(l.value, 2.0);
  // -0.5 e+ + 0.5 e- on the anchor.
  EXPECT_DOUBLE_EQ(l.grad(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(l.grad(0, 1), 0.0);
}

TEST(Omega1, NoPullFromVeryDissimilarPositive) {
  const Matrix<double> social = rows({{1, 0}, {5, 5}, {0, 0}});
  const auto l = bisemantic_omega1(social, coeffs(-800, 0), {{0, 1, 2}}, 1.0);
  EXPECT_EQ(l.grad(0, 0), 0.0);
  EXPECT_EQ(l.grad.row(1).norm(), 0.0);
}

TEST(Omega2, MirrorsOmega1) {
  const Matrix<double> interest = rows({{1, 1}, {2, 0}, {0, 0}});
  EXPECT_DOUBLE_EQ(bisemantic_omega2(interest, coeffs(0, 0), {{0, 1, 2}}, 1.0).value, 0.0);
  // Equal coefficients and equal phi on both sides leave exactly C2.
  const Matrix<double> eq = rows({{1, 0}, {3, 1}, {3, 2}});
  EXPECT_DOUBLE_EQ(bisemantic_omega2(eq, coeffs(0.7, 0.7), {{0, 1, 2}}, 1.5).value, 1.5);
}

struct Fixture {
  Matrix<double> interest = rows({{0.3, -0.2}, {0.1, 0.5}, {-0.4, 0.2}});
  Matrix<double> items = rows({{0.2, 0.1}, {-0.3, 0.4}});
  Matrix<double> social = rows({{0.5, 0.1}, {-0.2, 0.3}, {0.1, 0.1}});
  Matrix<double> base_users = rows({{1, 0}, {0, 1}, {1, 1}});
  Matrix<double> base_items = rows({{2, 0}, {0, 1}});
  TripletBatch batch{{{0, 0, 1}, {2, 1, 0}}, {{0, 1, 2}, {1, 0, 2}}};

  LossReport<double> eval(const LossWeights<double>& w) const {
    return evaluate_objective<kAllTerms>(ObjectiveInputs<double>{interest, items, social, base_users, base_items},
                                         batch, w);
  }
};

TEST(Total, ZeroWeightsLeaveRecommendationLoss) {
  Fixture f;
  const auto r = f.eval({0, 0, 0, 0, 1, 1});
  EXPECT_EQ(r.total, r.rec);
  EXPECT_GT(r.soc, 0.0);
}

TEST(Total, RegularizerOnlyWhenOthersVanish) {
  const Matrix<double> z = Matrix<double>::Zero(1, 1);
  RecLossTerm<double> rec{0, z, z};
  const auto r = total_loss<double>(rec, nullptr, nullptr, nullptr, {0, 0.25, 0, 0, 1, 1}, rows({{2}}), rows({{1}}));
  EXPECT_DOUBLE_EQ(r.total, 0.25 * 5);
  EXPECT_DOUBLE_EQ(r.grad_base_users(0, 0), 1.0);
}

TEST(Total, LinearInAlpha) {
  Fixture f;
  const auto a = f.eval({0.5, 0.1, 0.3, 0.2, 1, 1});
  const auto b = f.eval({0.5, 0.1, 0.6, 0.2, 1, 1});
  const double rest = a.total - 0.3 * a.omega1;
  EXPECT_NEAR(b.total - rest, 2 * (a.total - rest), 1e-14);
}

TEST(Total, NegativeWeightThrows) {
  Fixture f;
  EXPECT_THROW(f.eval({-1, 0, 0, 0, 1, 1}), InvalidConfiguration);
}

TEST(Sampler, SingleItemIsAlwaysPositive) {
  const auto train = InteractionGraph::from_edges(2, 5, {{0, 3}, {1, 1}, {1, 2}});
  const TripletBatch b = sample_triplets(train, SocialGraph::empty(2), 200, 3);
  for (const Triplet& t : b.items)
    if (t.anchor == 0) EXPECT_EQ(t.positive, 3);
  for (const Triplet& t : b.items) EXPECT_FALSE(train.contains(t.anchor, t.negative));
}

TEST(Sampler, SocialNegativesAreStrangers) {
  std::vector<Edge> e{{0, 1}, {1, 2}, {2, 3}, {0, 4}};
  const SocialGraph s = SocialGraph::undirected(6, e);
  const auto train = InteractionGraph::from_edges(6, 3, {{0, 0}, {1, 1}});
  const TripletBatch b = sample_triplets(train, s, 500, 4);
  ASSERT_EQ(b.social.size(), 500u);
  for (const Triplet& t : b.social) {
    EXPECT_TRUE(s.has_edge(t.anchor, t.positive));
    EXPECT_FALSE(s.has_edge(t.anchor, t.negative));
    EXPECT_NE(t.anchor, t.negative);
    EXPECT_NE(t.anchor, 5);  // no friends, never an anchor
  }
}

TEST(Sampler, PositiveFrequencyIsUniform) {
  // One user with 4 items among 10: each positive ~ N/4.
  std::vector<Edge> e{{0, 0}, {0, 1}, {0, 2}, {0, 3}};
  const auto train = InteractionGraph::from_edges(1, 10, e);
  const std::size_t n = 100000;
  const TripletBatch b = sample_triplets(train, SocialGraph::empty(1), n, 5);
  std::map<int, double> count;
  for (const Triplet& t : b.items) count[t.positive] += 1;
  const double mean = n / 4.0, sigma = std::sqrt(n * 0.25 * 0.75);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(count[i], mean, 3 * sigma);
}

TEST(Sampler, NoTrainableUsersThrows) {
  const auto train = InteractionGraph::from_edges(2, 2, {});
  EXPECT_THROW(sample_triplets(train, SocialGraph::empty(2), 4, 1), EmptyDataset);
}

TEST(Sampler, DeterministicUnderSeed) {
  std::vector<Edge> e{{0, 1}, {1, 2}};
  const SocialGraph s = SocialGraph::undirected(4, e);
  const auto train = InteractionGraph::from_edges(4, 6, {{0, 0}, {1, 1}, {2, 4}, {3, 5}});
  const auto a = sample_triplets(train, s, 64, 9), b = sample_triplets(train, s, 64, 9);
  EXPECT_EQ(a.items, b.items);
  EXPECT_EQ(a.social, b.social);
}

TEST(SelfCheck, RelativeErrorConventions) {
  EXPECT_EQ(relative_error(0, 1e-12), 0.0);
  EXPECT_NEAR(relative_error(1, 1.1), 0.1 / 1.1, 1e-15);
}

TEST(SelfCheck, EveryGradientMatchesFiniteDifferences) {
  for (const auto& c : run_gradient_checks({})) {
    EXPECT_TRUE(c.pass) << c.name << " " << c.max_relative_error;
    EXPECT_LT(c.max_relative_error, 1e-6) << c.name;
    EXPECT_GT(c.entries, 0u) << c.name;
  }
}

}  // namespace
}  // namespace burger
