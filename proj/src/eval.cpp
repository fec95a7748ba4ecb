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

#include "burger/eval.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "burger/error.hpp"

namespace burger {

RankResult rank_candidates(UserIndex user, const Matrix<double>& users, const Matrix<double>& items,
                           ItemIndex positive, std::span<const ItemIndex> negatives) {
  RankResult r;
  r.user = user;
  if (negatives.empty()) {
    r.no_negatives = true;
    return r;
  }
  const auto eu = users.row(user);
  const double target = eu.dot(items.row(positive));
  for (ItemIndex i : negatives) {
    if (i == positive)
      throw InvalidInput("eval", "rank_candidates", "the positive item is listed among the negatives");
    if (eu.dot(items.row(i)) >= target) ++r.rank;
  }
  return r;
}

double hit_ratio(std::span<const std::size_t> ranks, std::size_t n) {
  if (ranks.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t r : ranks) hits += r <= n ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(ranks.size());
}

double ndcg(std::span<const std::size_t> ranks, std::size_t n) {
  if (ranks.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t r : ranks)
    if (r <= n) sum += 1.0 / std::log2(static_cast<double>(r) + 1.0);
  return sum / static_cast<double>(ranks.size());
}

MetricReport metrics_from_ranks(std::vector<UserIndex> users, std::vector<std::size_t> ranks) {
  MetricReport m;
  m.user_ids = std::move(users);
  m.ranks = std::move(ranks);
  m.users = m.ranks.size();
  m.hr1 = hit_ratio(m.ranks, 1);
  m.hr3 = hit_ratio(m.ranks, 3);
  m.ndcg3 = ndcg(m.ranks, 3);
  return m;
}

MetricReport evaluate(const Dataset& dataset, const Matrix<double>& pooled_users,
                      const Matrix<double>& pooled_items) {
  std::vector<UserIndex> users;
  std::vector<std::size_t> ranks;
  for (UserIndex u : dataset.eval_users()) {
    const RankResult r = rank_candidates(u, pooled_users, pooled_items, *dataset.test_positive[u],
                                         dataset.candidate_negatives[u]);
    users.push_back(u);
    ranks.push_back(r.rank);
  }
  return metrics_from_ranks(std::move(users), std::move(ranks));
}

std::string MetricReport::to_json() const {
  nlohmann::json j;
  j["HR@1"] = hr1;
  j["HR@3"] = hr3;
  j["NDCG@3"] = ndcg3;
  j["users"] = users;
  return j.dump(2);
}

std::string MetricReport::csv_row() const {
  std::ostringstream os;
  os.precision(10);
  os << hr1 << ',' << hr3 << ',' << ndcg3 << ',' << users;
  return os.str();
}

double decrease_percent(double clean, double noisy) {
  if (clean == 0.0) return 0.0;
  return (clean - noisy) / clean * 100.0;
}

}  // namespace burger
