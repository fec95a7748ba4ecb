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

#include "burger/denoise.hpp"
#include "burger/error.hpp"

namespace burger {
namespace {

TEST(Cdf, StrictLessCount) {
  const std::vector<double> c{0.1, 0.2, 0.3};
  EXPECT_DOUBLE_EQ(empirical_cdf(c, 0.3), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(empirical_cdf(c, 0.1), 0.0);
  const std::vector<double> flat{0.4, 0.4, 0.4};
  EXPECT_DOUBLE_EQ(empirical_cdf(flat, 0.4), 0.0);
}

TEST(Cdf, EmptyCandidatesThrow) { EXPECT_THROW(empirical_cdf({}, 0.0), InvalidInput); }

TEST(Posterior, Examples) {
  EXPECT_DOUBLE_EQ(posterior(0.5, 0.5), 0.5);
  EXPECT_DOUBLE_EQ(posterior(1.0, 0.5), 1.0);
  for (double p : {0.01, 0.3, 0.99}) EXPECT_EQ(posterior(0.0, p), 0.0);
}

TEST(Posterior, PriorOutsideOpenIntervalThrows) {
  EXPECT_THROW(posterior(0.5, 0.0), InvalidInput);
  EXPECT_THROW(posterior(0.5, 1.0), InvalidInput);
  EXPECT_THROW(posterior(0.5, std::nan("")), InvalidInput);
}

TEST(Posterior, StrictlyIncreasingInCdf) {
  for (double p : {0.01, 0.2, 0.5, 0.8, 0.99})
    for (int a = 0; a < 100; ++a)
      EXPECT_LT(posterior(a / 100.0, p), posterior((a + 1) / 100.0, p)) << a << " " << p;
}

TEST(Posterior, DenominatorBound) {
  for (int a = 0; a <= 100; ++a)
    for (int b = 1; b < 100; ++b) {
      const double F = a / 100.0, P = b / 100.0;
      EXPECT_GE((1 - F) * (1 - P) + F * P, std::min(P, 1 - P) - 1e-15);
    }
}

CandidateScore score(UserIndex u, double sim, double post) {
  CandidateScore c;
  c.user = u;
  c.similarity = sim;
  c.posterior = post;
  return c;
}

TEST(Select, TopTwoByPosterior) {
  const std::vector<CandidateScore> s{score(4, 0, 0.5), score(7, 0, 0.9), score(9, 0, 0.1)};
  EXPECT_EQ(select_potential_friends(s, 2), (std::vector<UserIndex>{4, 7}));
  EXPECT_TRUE(select_potential_friends(s, 0).empty());
}

TEST(Select, TiesUseSimilarityThenIndex) {
  const std::vector<CandidateScore> s{score(1, 0.1, 0.5), score(2, 0.3, 0.5), score(3, 0.3, 0.5)};
  EXPECT_EQ(select_potential_friends(s, 1), (std::vector<UserIndex>{2}));
  EXPECT_EQ(select_potential_friends(s, 2), (std::vector<UserIndex>{2, 3}));
}

TEST(Select, TruncatesWhenTooFewCandidates) {
  const std::vector<CandidateScore> s{score(1, 0, 0.2)};
  bool truncated = false;
  EXPECT_EQ(select_potential_friends(s, 3, &truncated), (std::vector<UserIndex>{1}));
  EXPECT_TRUE(truncated);
}

TEST(Fuse, Examples) {
  Eigen::VectorXd phi(6);
  // a=0, b=1, c=2, d=3 from the mixed example; 4, 5 are spares.
  phi << 0.9, 0.1, 0.5, 0.05, 0.0, 0.0;
  const std::vector<UserIndex> B{0, 1}, P{2, 3};
  EXPECT_EQ(fuse(B, P, phi), (std::vector<UserIndex>{0, 2}));

  Eigen::VectorXd low(4);
  low << 0.8, 0.7, 0.1, 0.2;
  EXPECT_EQ(fuse(std::vector<UserIndex>{0, 1}, std::vector<UserIndex>{2, 3}, low), (std::vector<UserIndex>{0, 1}));
  Eigen::VectorXd high(4);
  high << 0.1, 0.2, 0.8, 0.7;
  EXPECT_EQ(fuse(std::vector<UserIndex>{0, 1}, std::vector<UserIndex>{2, 3}, high), (std::vector<UserIndex>{2, 3}));
}

TEST(Fuse, TiesPreferObserved) {
  Eigen::VectorXd phi = Eigen::VectorXd::Constant(4, 0.3);
  EXPECT_EQ(fuse(std::vector<UserIndex>{3}, std::vector<UserIndex>{0}, phi), (std::vector<UserIndex>{3}));
}

TEST(Enhance, IsolatedUsersStayIsolated) {
  const Matrix<double> e = Matrix<double>::Random(5, 3);
  const auto r = build_enhanced_slice(e, e, SocialGraph::empty(5));
  EXPECT_EQ(r.slice.num_arcs(), 0u);
  EXPECT_EQ(r.fusion.total_added(), 0u);
}

TEST(Enhance, StrongObservedFriendsAreKept) {
  // Users 0..5; user 0 is friends with 1 and 2. Interest embeddings make
  // 1 and 2 far more similar to 0 than anyone else.
  std::vector<Edge> e{{0, 1}, {0, 2}, {3, 4}};
  const SocialGraph g = SocialGraph::undirected(6, e);
  Matrix<double> interest(6, 2);
  interest << 1, 0, 5, 0, 4, 0, -1, 0, -2, 0, 0, 1;
  Matrix<double> social(6, 2);
  social << 1, 1, -1, -1, -1, -1, 3, 3, 2, 2, 4, 4;  // posteriors favor strangers
  const auto r = build_enhanced_slice(interest, social, g);
  EXPECT_EQ(r.fusion.fused[0], (std::vector<UserIndex>{1, 2}));
  EXPECT_EQ(r.fusion.changes[0].kept, 2u);
}

TEST(Enhance, PlantedNoiseSurvivesLess) {
  // Two communities of ten; interest and social embeddings separate them.
  std::vector<Edge> clean, noise;
  for (int c = 0; c < 2; ++c)
    for (int u = 0; u < 10; ++u) clean.push_back({10 * c + u, 10 * c + (u + 1) % 10});
  noise = {{0, 15}, {3, 12}, {7, 18}};
  std::vector<Edge> all = clean;
  all.insert(all.end(), noise.begin(), noise.end());
  const SocialGraph g = SocialGraph::undirected(20, all);
  Matrix<double> emb(20, 2);
  for (int u = 0; u < 20; ++u) emb.row(u) << (u < 10 ? 1.0 : -1.0), 0.05 * (u % 10);
  const auto r = build_enhanced_slice(emb, emb, g);
  auto survival = [&](const std::vector<Edge>& edges) {
    double alive = 0;
    for (const Edge& x : edges) alive += r.slice.has_edge(x.a, x.b) + r.slice.has_edge(x.b, x.a);
    return alive / (2.0 * static_cast<double>(edges.size()));
  };
  EXPECT_LT(survival(noise), survival(clean));
}

TEST(Priors, ConstantAndDegree) {
  std::vector<Edge> e{{0, 1}, {0, 2}, {0, 3}};
  const SocialGraph g = SocialGraph::undirected(5, e);
  EXPECT_EQ(candidate_priors(g, {PriorMode::kConstant, 0.3, 0.01}), std::vector<double>(5, 0.3));
  const auto d = candidate_priors(g, {PriorMode::kDegree, 0.5, 0.01});
  EXPECT_DOUBLE_EQ(d[0], 0.99);
  EXPECT_DOUBLE_EQ(d[1], 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(d[4], 0.01);
}

TEST(OrderStatistics, UniformAndNormalPass) {
  for (const auto& base : {uniform_distribution(), standard_normal_distribution()}) {
    const auto r = order_statistic_check(100000, base, 5);
    EXPECT_TRUE(r.applicable);
    EXPECT_TRUE(r.pass) << base.name << " " << r.ks_friend << " " << r.ks_non_friend;
    EXPECT_DOUBLE_EQ(r.threshold, 1.63 / std::sqrt(100000.0));
  }
}

TEST(OrderStatistics, PointMassIsInapplicable) {
  const auto r = order_statistic_check(10000, point_mass_distribution(2.0), 1);
  EXPECT_FALSE(r.applicable);
}

TEST(OrderStatistics, MissingSamplerThrows) {
  BaseDistribution broken{"broken", {}, {}};
  EXPECT_THROW(order_statistic_check(10000, broken, 1), InvalidInput);
}

TEST(OrderStatistics, KsAgainstKnownSample) {
  // Samples {0.5}: D = max(1 - 0.5, 0.5 - 0) = 0.5.
  EXPECT_DOUBLE_EQ(ks_statistic({0.5}, [](double x) { return x; }), 0.5);
}

}  // namespace
}  // namespace burger
