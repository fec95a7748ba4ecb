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

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "burger/graph.hpp"
#include "burger/propagation.hpp"
#include "burger/random.hpp"

namespace burger {

/// Fraction of `candidates` strictly below `query`. Ties count as not below.
/// Throws InvalidInput when there are no candidates (the CDF is undefined).
double empirical_cdf(std::span<const double> candidates, double query);

/// Posterior probability that an unobserved user is a latent friend:
///   pf = F P / (1 - F - P + 2 F P) = F P / ((1-F)(1-P) + F P).
/// `prior` must lie strictly inside (0, 1); F may touch either end.
double posterior(double cdf, double prior);

struct CandidateScore {
  UserIndex user = 0;
  double similarity = 0;  // social similarity to the anchor
  double cdf = 0;
  double prior = 0.5;
  double posterior = 0;
};

/// The k candidates with the largest posterior; ties fall back to higher
/// similarity, then lower user index. When fewer than k candidates exist all
/// of them are returned and `truncated` is set. Result is sorted by user.
std::vector<UserIndex> select_potential_friends(std::span<const CandidateScore> scores, std::size_t k,
                                                bool* truncated = nullptr);

/// The |observed| members of observed + potential with the highest interest
/// similarity (`interest_row(v)` = phi(u, v)). Ties prefer observed members,
/// then lower index. Result is sorted by user.
std::vector<UserIndex> fuse(std::span<const UserIndex> observed, std::span<const UserIndex> potential,
                            const Eigen::Ref<const Eigen::VectorXd>& interest_row);

enum class PriorMode { kConstant, kDegree };

struct PriorConfig {
  PriorMode mode = PriorMode::kConstant;
  /// Constant prior value.
  double value = 0.5;
  /// Degree mode clamps deg(v)/max_deg into [epsilon, 1 - epsilon].
  double epsilon = 0.01;
};

struct EnhanceOptions {
  PriorConfig prior;
  /// Union the directed rows back into an undirected graph.
  bool symmetrize_union = false;
};

struct UserChange {
  UserIndex user = 0;
  std::size_t kept = 0;
  std::size_t dropped = 0;
  std::size_t added = 0;
  std::size_t observed = 0;
};

struct FusionResult {
  std::vector<std::vector<UserIndex>> observed;   // B_u
  std::vector<std::vector<UserIndex>> potential;  // P_u
  std::vector<std::vector<UserIndex>> fused;      // fused B_u
  std::vector<UserChange> changes;
  std::size_t truncated_users = 0;

  std::size_t total_kept() const;
  std::size_t total_dropped() const;
  std::size_t total_added() const;
};

struct EnhancedSlice {
  SocialGraph slice;
  FusionResult fusion;
};

/// Candidate scores of every user outside `observed` and the anchor, using
/// the anchor's social-similarity row.
std::vector<CandidateScore> score_candidates(UserIndex anchor, std::span<const UserIndex> observed,
                                             const Eigen::Ref<const Eigen::VectorXd>& social_row,
                                             std::span<const double> priors);

/// Per-user prior vector for the given configuration and slice.
std::vector<double> candidate_priors(const SocialGraph& slice, const PriorConfig& config);

/// Runs scoring, potential-friend selection and fusion for every user of the
/// newest slice and assembles the next (directed) slice.
EnhancedSlice build_enhanced_slice(const Matrix<double>& interest_users,
                                   const Matrix<double>& social_users, const SocialGraph& newest,
                                   const EnhanceOptions& options = {});

/// Base distribution for the order-statistic check.
struct BaseDistribution {
  std::string name;
  std::function<double(Rng&)> sample;
  std::function<double(double)> cdf;
};

BaseDistribution uniform_distribution();
BaseDistribution standard_normal_distribution();
BaseDistribution point_mass_distribution(double at);

struct OrderStatisticReport {
  std::string distribution;
  std::size_t samples = 0;
  std::size_t ties = 0;
  /// False when tied pairs make the friend / non-friend labels ambiguous.
  bool applicable = true;
  double ks_friend = 0;
  double ks_non_friend = 0;
  double threshold = 0;
  bool pass = false;
  /// Larger (friend) and smaller (non-friend) member of every pair.
  std::vector<double> friend_samples;
  std::vector<double> non_friend_samples;
};

/// One-sample Kolmogorov-Smirnov statistic of `samples` against `cdf`.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Draws `samples` i.i.d. pairs, labels the larger member "friend" and the
/// smaller "non-friend", and compares them with F(x)^2 and 1 - (1 - F(x))^2.
/// Passes iff both KS statistics are <= 1.63 / sqrt(samples).
OrderStatisticReport order_statistic_check(std::size_t samples, const BaseDistribution& base,
                                           std::uint64_t seed);

}  // namespace burger
