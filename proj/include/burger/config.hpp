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
#include <filesystem>
#include <iosfwd>
#include <string>

#include "burger/denoise.hpp"
#include "burger/ingest.hpp"
#include "burger/objective.hpp"
#include "burger/propagation.hpp"

namespace burger {

/// Every hyperparameter of a training run. Defaults follow the reference
/// setting (d = 512, batch 1024, lambda2 = 1e-5, patience 5, p = 0.01,
/// C1 = C2 = 1, tau = 3, alpha = beta = e^-2).
struct TrainRunConfig {
  int d = 512;
  std::size_t batch = 1024;
  double lambda1 = 0.1353352832366127;  // e^-2
  double lambda2 = 1e-5;
  double alpha = 0.1353352832366127;
  double beta = 0.1353352832366127;
  double C1 = 1.0;
  double C2 = 1.0;
  double lr = 1e-3;
  int K = 2;
  std::size_t tau = 3;
  double p = 0.01;
  AggMode agg = AggMode::kMean;
  PriorMode prior = PriorMode::kConstant;
  double prior_value = 0.5;
  double prior_epsilon = 0.01;
  std::size_t epochs_per_iteration = 5;
  std::size_t max_iterations = 10;
  std::size_t patience = 5;
  std::size_t negatives_per_user = 99;
  double split_ratio = 0.7;
  /// 0 derives the count from the number of training interactions.
  std::size_t batches_per_epoch = 0;
  double init_std = 0.1;
  std::uint64_t seed = 2024;
  /// false = single-graph mode (no perturbed slices, window of one).
  bool use_tensor = true;
  /// false = no denoising-augmentation; the tensor never slides.
  bool denoise = true;
  bool reset_moments = false;
  bool symmetrize_union = false;

  /// Throws InvalidConfiguration on any out-of-range field.
  void validate() const;

  std::size_t effective_tau() const { return use_tensor ? tau : 1; }
  LossWeights<double> weights() const { return {lambda1, lambda2, alpha, beta, C1, C2}; }
  /// Split settings; the split draws from its own stream of `seed`.
  SplitOptions split_options(bool all_negatives = false) const;
  EnhanceOptions enhance_options() const {
    return {{prior, prior_value, prior_epsilon}, symmetrize_union};
  }

  bool operator==(const TrainRunConfig&) const = default;
};

/// Flat `key=value` lines; `#` starts a comment. Keys are the field names
/// above. Unknown keys and malformed values throw InvalidConfiguration.
/// Numbers may be written as `e^-3` for exp(-3).
TrainRunConfig parse_config(std::istream& in);
TrainRunConfig load_config(const std::filesystem::path& path);

/// Applies a single `key=value` assignment.
void set_config_value(TrainRunConfig& config, const std::string& key, const std::string& value);

/// Canonical text form; parse_config(config_to_text(c)) == c.
std::string config_to_text(const TrainRunConfig& config);

/// FNV-1a over the canonical text, hex encoded.
std::string config_hash(const TrainRunConfig& config);

/// Optimal (alpha, beta) presets per dataset: "ciao", "douban", "yelp".
void apply_preset(TrainRunConfig& config, const std::string& dataset);

}  // namespace burger
