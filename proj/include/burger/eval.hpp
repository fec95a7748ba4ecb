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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "burger/graph.hpp"
#include "burger/ingest.hpp"
#include "burger/propagation.hpp"

namespace burger {

struct RankResult {
  UserIndex user = 0;
  /// 1-based rank of the held-out positive among itself and the negatives.
  std::size_t rank = 1;
  /// Set when there was nothing to rank against.
  bool no_negatives = false;
};

/// Ties are pessimistic: a negative scoring equal to the positive ranks above it.
RankResult rank_candidates(UserIndex user, const Matrix<double>& users, const Matrix<double>& items,
                           ItemIndex positive, std::span<const ItemIndex> negatives);

/// Fraction of ranks <= n.
double hit_ratio(std::span<const std::size_t> ranks, std::size_t n);

/// Single-relevant-item NDCG: mean of 1/log2(rank + 1) over ranks <= n.
double ndcg(std::span<const std::size_t> ranks, std::size_t n);

struct MetricReport {
  double hr1 = 0;
  double hr3 = 0;
  double ndcg3 = 0;
  std::size_t users = 0;
  std::vector<UserIndex> user_ids;
  std::vector<std::size_t> ranks;

  double hr(std::size_t n) const { return hit_ratio(ranks, n); }
  double ndcg_at(std::size_t n) const { return ndcg(ranks, n); }

  std::string to_json() const;
  static std::string csv_header() { return "hr1,hr3,ndcg3,users"; }
  std::string csv_row() const;
};

MetricReport metrics_from_ranks(std::vector<UserIndex> users, std::vector<std::size_t> ranks);

/// Leave-one-out evaluation of every user holding a test positive.
MetricReport evaluate(const Dataset& dataset, const Matrix<double>& pooled_users,
                      const Matrix<double>& pooled_items);

/// Relative drop in percent: (clean - noisy) / clean * 100. Zero when clean is zero.
double decrease_percent(double clean, double noisy);

}  // namespace burger
