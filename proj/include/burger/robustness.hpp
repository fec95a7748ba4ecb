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

#include <span>
#include <string>
#include <vector>

#include "burger/config.hpp"
#include "burger/eval.hpp"
#include "burger/ingest.hpp"

namespace burger {

struct RobustnessRow {
  std::string variant;  // "burger" or "no_enhancement"
  double ratio = 0;
  std::size_t injected = 0;
  double hr1 = 0, hr3 = 0, ndcg3 = 0;
  /// Percent drop against the same variant's clean run.
  double dec_hr1 = 0, dec_hr3 = 0, dec_ndcg3 = 0;
};

struct RobustnessTable {
  std::vector<RobustnessRow> rows;

  static std::string csv_header();
  std::string to_csv() const;
};

/// For every ratio, injects that fraction of noise edges into the training
/// social graph, retrains from the same seed and reports metrics against the
/// clean run (ratio 0, always trained). With `compare_without_enhancement`
/// each ratio is also run with enhancement disabled.
RobustnessTable robustness_harness(const Dataset& dataset, std::span<const double> ratios,
                                   const TrainRunConfig& config,
                                   bool compare_without_enhancement = true);

}  // namespace burger
