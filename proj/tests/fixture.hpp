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

#include "burger/config.hpp"
#include "burger/ingest.hpp"
#include "burger/random.hpp"

namespace burger::testing {

/// Two planted communities, 100 users, 200 items. Interactions are sparse
/// with a within-block popularity skew so that both the community and the
/// item order carry signal; clean friendships never cross communities.
inline SyntheticSpec planted_spec(std::uint64_t seed, double noise_ratio) {
  SyntheticSpec s;
  s.num_users = 100;
  s.num_items = 200;
  s.num_communities = 2;
  s.intra_interaction_rate = 0.04;
  s.inter_interaction_rate = 0.002;
  s.intra_social_rate = 0.2;
  s.inter_social_rate = 0.0;
  s.popularity_exponent = 1.0;
  s.noise_ratio = noise_ratio;
  s.seed = seed;
  return s;
}

inline Dataset split_for(const SyntheticData& data, const TrainRunConfig& config) {
  return split_dataset(data.interactions, data.social, config.split_options());
}

/// Training setting used on the planted fixture.
inline TrainRunConfig planted_config(std::uint64_t seed) {
  TrainRunConfig c;
  c.d = 64;
  c.batch = 256;
  c.lr = 0.005;
  c.lambda1 = 1.0;
  c.alpha = 1.0;
  c.beta = 1.0;
  c.K = 2;
  c.tau = 3;
  c.epochs_per_iteration = 5;
  c.max_iterations = 4;
  c.seed = seed;
  return c;
}

/// Small fixture for fast loop tests: 40 users, 60 items.
inline SyntheticSpec toy_spec(std::uint64_t seed) {
  SyntheticSpec s;
  s.num_users = 40;
  s.num_items = 60;
  s.num_communities = 2;
  s.intra_interaction_rate = 0.15;
  s.inter_interaction_rate = 0.01;
  s.intra_social_rate = 0.25;
  s.inter_social_rate = 0.0;
  s.popularity_exponent = 1.0;
  s.noise_ratio = 0.2;
  s.seed = seed;
  return s;
}

inline TrainRunConfig toy_config(std::uint64_t seed) {
  TrainRunConfig c;
  c.d = 8;
  c.batch = 64;
  c.lr = 0.01;
  c.K = 2;
  c.tau = 3;
  c.epochs_per_iteration = 3;
  c.max_iterations = 2;
  c.negatives_per_user = 20;
  c.seed = seed;
  return c;
}

}  // namespace burger::testing
