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

#include "burger/denoise.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>

#include "burger/error.hpp"

namespace burger {
namespace {

constexpr const char* kModule = "denoise_augment";

bool contains_sorted(std::span<const UserIndex> sorted, UserIndex v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

}  // namespace

double empirical_cdf(std::span<const double> candidates, double query) {
  if (candidates.empty())
    throw InvalidInput(kModule, "empirical_cdf", "undefined cdf: the user has no unobserved users");
  const auto below = std::count_if(candidates.begin(), candidates.end(),
                                   [query](double s) { return s < query; });
  return static_cast<double>(below) / static_cast<double>(candidates.size());
}

double posterior(double cdf, double prior) {
  if (!(prior > 0.0 && prior < 1.0))
    throw InvalidInput(kModule, "posterior", "invalid prior " + std::to_string(prior) +
                                                 "; it must lie strictly inside (0, 1)");
  if (!(cdf >= 0.0 && cdf <= 1.0))
    throw InvalidInput(kModule, "posterior", "cdf value " + std::to_string(cdf) + " outside [0, 1]");
  // (1-F)(1-P) + FP >= min(P, 1-P) > 0
  const double denom = 1.0 - cdf - prior + 2.0 * cdf * prior;
  return cdf * prior / denom;
}

std::vector<UserIndex> select_potential_friends(std::span<const CandidateScore> scores, std::size_t k,
                                                bool* truncated) {
  if (truncated) *truncated = scores.size() < k;
  if (scores.size() < k)
    std::cerr << "warning: " << kModule << "::select_potential_friends: only " << scores.size()
              << " candidates for " << k << " slots\n";
  std::vector<const CandidateScore*> order;
  order.reserve(scores.size());
  for (const auto& s : scores) order.push_back(&s);
  const std::size_t take = std::min(k, scores.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    [](const CandidateScore* a, const CandidateScore* b) {
                      if (a->posterior != b->posterior) return a->posterior > b->posterior;
                      if (a->similarity != b->similarity) return a->similarity > b->similarity;
                      return a->user < b->user;
                    });
  std::vector<UserIndex> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(order[i]->user);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<UserIndex> fuse(std::span<const UserIndex> observed, std::span<const UserIndex> potential,
                            const Eigen::Ref<const Eigen::VectorXd>& interest_row) {
  struct Member {
    UserIndex user;
    bool observed;
  };
  std::vector<Member> pool;
  pool.reserve(observed.size() + potential.size());
  for (UserIndex v : observed) pool.push_back({v, true});
  for (UserIndex v : potential) pool.push_back({v, false});
  for (const Member& mbr : pool)
    if (mbr.user < 0 || mbr.user >= interest_row.size())
      throw InvalidInput(kModule, "fuse", "user " + std::to_string(mbr.user) + " out of range");

  const std::size_t take = observed.size();
  std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take), pool.end(),
                    [&](const Member& a, const Member& b) {
                      const double pa = interest_row(a.user);
                      const double pb = interest_row(b.user);
                      if (pa != pb) return pa > pb;
                      if (a.observed != b.observed) return a.observed;
                      return a.user < b.user;
                    });
  std::vector<UserIndex> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(pool[i].user);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<CandidateScore> score_candidates(UserIndex anchor, std::span<const UserIndex> observed,
                                             const Eigen::Ref<const Eigen::VectorXd>& social_row,
                                             std::span<const double> priors) {
  const auto m = static_cast<UserIndex>(social_row.size());
  std::vector<CandidateScore> scores;
  std::vector<double> sorted;
  for (UserIndex v = 0; v < m; ++v) {
    if (v == anchor || contains_sorted(observed, v)) continue;
    CandidateScore s;
    s.user = v;
    s.similarity = social_row(v);
    s.prior = priors[v];
    scores.push_back(s);
    sorted.push_back(s.similarity);
  }
  std::sort(sorted.begin(), sorted.end());
  const double size = static_cast<double>(sorted.size());
  for (auto& s : scores) {
    // Same count as empirical_cdf: members strictly below the query.
    const auto below = std::lower_bound(sorted.begin(), sorted.end(), s.similarity) - sorted.begin();
    s.cdf = static_cast<double>(below) / size;
    s.posterior = posterior(s.cdf, s.prior);
  }
  return scores;
}

std::vector<double> candidate_priors(const SocialGraph& slice, const PriorConfig& config) {
  const auto m = static_cast<std::size_t>(slice.num_users());
  if (config.mode == PriorMode::kConstant) {
    if (!(config.value > 0.0 && config.value < 1.0))
      throw InvalidInput(kModule, "posterior", "invalid prior " + std::to_string(config.value) +
                                                   "; it must lie strictly inside (0, 1)");
    return std::vector<double>(m, config.value);
  }
  if (!(config.epsilon > 0.0 && config.epsilon < 0.5))
    throw InvalidConfiguration(kModule, "candidate_priors", "epsilon must lie in (0, 0.5)");
  std::size_t max_deg = 0;
  for (UserIndex v = 0; v < slice.num_users(); ++v) max_deg = std::max(max_deg, slice.degree(v));
  std::vector<double> priors(m, config.epsilon);
  if (max_deg == 0) return priors;
  for (UserIndex v = 0; v < slice.num_users(); ++v) {
    const double raw = static_cast<double>(slice.degree(v)) / static_cast<double>(max_deg);
    priors[v] = std::clamp(raw, config.epsilon, 1.0 - config.epsilon);
  }
  return priors;
}

std::size_t FusionResult::total_kept() const {
  std::size_t n = 0;
  for (const auto& c : changes) n += c.kept;
  return n;
}

std::size_t FusionResult::total_dropped() const {
  std::size_t n = 0;
  for (const auto& c : changes) n += c.dropped;
  return n;
}

std::size_t FusionResult::total_added() const {
  std::size_t n = 0;
  for (const auto& c : changes) n += c.added;
  return n;
}

EnhancedSlice build_enhanced_slice(const Matrix<double>& interest_users,
                                   const Matrix<double>& social_users, const SocialGraph& newest,
                                   const EnhanceOptions& options) {
  const int m = newest.num_users();
  if (interest_users.rows() != m || social_users.rows() != m)
    throw InvalidInput(kModule, "build_enhanced_slice", "embedding rows differ from slice user count");
  const std::vector<double> priors = candidate_priors(newest, options.prior);

  EnhancedSlice out;
  FusionResult& fr = out.fusion;
  fr.observed.resize(m);
  fr.potential.resize(m);
  fr.fused.resize(m);
  fr.changes.resize(m);

  for (UserIndex u = 0; u < m; ++u) {
    const auto observed = newest.neighbors(u);
    fr.observed[u].assign(observed.begin(), observed.end());
    UserChange& change = fr.changes[u];
    change.user = u;
    change.observed = observed.size();
    if (observed.empty()) continue;

    const Eigen::VectorXd social_row = social_users * social_users.row(u).transpose();
    const auto scores = score_candidates(u, observed, social_row, priors);
    bool truncated = false;
    fr.potential[u] = select_potential_friends(scores, observed.size(), &truncated);
    if (truncated) ++fr.truncated_users;

    const Eigen::VectorXd interest_row = interest_users * interest_users.row(u).transpose();
    fr.fused[u] = fuse(observed, fr.potential[u], interest_row);

    for (UserIndex v : fr.fused[u]) {
      if (contains_sorted(observed, v))
        ++change.kept;
      else
        ++change.added;
    }
    change.dropped = observed.size() - change.kept;
  }

  if (options.symmetrize_union) {
    std::vector<Edge> arcs;
    for (UserIndex u = 0; u < m; ++u)
      for (UserIndex v : fr.fused[u]) arcs.push_back({u, v});
    out.slice = SocialGraph::undirected(m, arcs);
  } else {
    out.slice = SocialGraph::directed(m, fr.fused);
  }
  return out;
}

BaseDistribution uniform_distribution() {
  return {"uniform",
          [](Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); },
          [](double x) { return std::clamp(x, 0.0, 1.0); }};
}

BaseDistribution standard_normal_distribution() {
  return {"normal", [](Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); },
          [](double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }};
}

BaseDistribution point_mass_distribution(double at) {
  return {"point_mass", [at](Rng&) { return at; }, [at](double x) { return x >= at ? 1.0 : 0.0; }};
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

OrderStatisticReport order_statistic_check(std::size_t samples, const BaseDistribution& base,
                                           std::uint64_t seed) {
  const char* op = "order_statistic_check";
  if (samples < 10000)
    throw InvalidConfiguration(kModule, op, "at least 10^4 samples are required");
  if (!base.sample || !base.cdf)
    throw InvalidInput(kModule, op, "distribution '" + base.name + "' is not sampleable");

  OrderStatisticReport r;
  r.distribution = base.name;
  r.samples = samples;
  r.threshold = 1.63 / std::sqrt(static_cast<double>(samples));
  r.friend_samples.reserve(samples);
  r.non_friend_samples.reserve(samples);

  Rng rng(seed);
  for (std::size_t k = 0; k < samples; ++k) {
    const double a = base.sample(rng);
    const double b = base.sample(rng);
    if (!std::isfinite(a) || !std::isfinite(b))
      throw InvalidInput(kModule, op, "distribution '" + base.name + "' produced a non-finite sample");
    if (a == b) ++r.ties;
    r.friend_samples.push_back(std::max(a, b));
    r.non_friend_samples.push_back(std::min(a, b));
  }
  if (r.ties > 0) {
    r.applicable = false;
    r.pass = false;
    return r;
  }
  const auto& F = base.cdf;
  r.ks_friend = ks_statistic(r.friend_samples, [&](double x) {
    const double f = F(x);
    return f * f;
  });
  r.ks_non_friend = ks_statistic(r.non_friend_samples, [&](double x) {
    const double f = F(x);
    return 1.0 - (1.0 - f) * (1.0 - f);
  });
  r.pass = r.ks_friend <= r.threshold && r.ks_non_friend <= r.threshold;
  return r;
}

}  // namespace burger
