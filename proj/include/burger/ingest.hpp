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
#include <optional>
#include <span>
#include <vector>

#include "burger/graph.hpp"

namespace burger {

/// Dense index -> raw id, ascending in raw id.
using IdMap = std::vector<std::int64_t>;

struct LoadedInteractions {
  InteractionGraph graph;
  IdMap user_ids;
  IdMap item_ids;
};

struct LoadedSocial {
  SocialGraph graph;
  IdMap user_ids;
  std::size_t dropped_self_loops = 0;
  /// Edges whose endpoints are unknown to a supplied user map.
  std::size_t dropped_unknown = 0;
};

/// Reads `user<TAB>item[<TAB>rating]` lines. Ratings are ignored (any listed
/// pair is an interaction); ids are compacted to 0..m-1 / 0..n-1.
LoadedInteractions load_interactions(const std::filesystem::path& path);

/// Reads `user<TAB>user` lines, symmetrizes by union, and drops self-loops.
/// Without `user_ids` the ids are compacted independently; with it, ids are
/// resolved against that map and edges touching unknown users are dropped.
LoadedSocial load_social(const std::filesystem::path& path);
LoadedSocial load_social(const std::filesystem::path& path, const IdMap& user_ids);

void write_id_map(const std::filesystem::path& path, const IdMap& ids);
IdMap read_id_map(const std::filesystem::path& path);

struct SplitOptions {
  double ratio = 0.7;
  std::size_t negatives_per_user = 99;
  /// Rank against every non-interacted item instead of a sample.
  bool all_negatives = false;
  std::uint64_t seed = 0;
};

struct Dataset {
  InteractionGraph train;
  /// Leave-one-out positive per user; empty for users excluded from eval.
  std::vector<std::optional<ItemIndex>> test_positive;
  /// Test-portion items beyond the retained positive. Recorded, not scored.
  std::vector<std::vector<ItemIndex>> test_remainder;
  std::vector<std::vector<ItemIndex>> candidate_negatives;
  SocialGraph social;
  SplitOptions options;

  int num_users() const { return train.num_users(); }
  int num_items() const { return train.num_items(); }
  std::vector<UserIndex> eval_users() const;
};

/// Per-user shuffle and ratio split; the first test-portion item becomes the
/// held-out positive. Users with fewer than two interactions stay in train.
Dataset split_dataset(const InteractionGraph& interactions, const SocialGraph& social,
                      const SplitOptions& options);

struct NoisySocial {
  SocialGraph graph;
  /// Injected edges, a < b, sorted.
  std::vector<Edge> noise;
};

/// Adds ceil(ratio * |E|) new uniformly drawn undirected edges.
NoisySocial inject_social_noise(const SocialGraph& social, double ratio, std::uint64_t seed);

struct SyntheticSpec {
  int num_users = 100;
  int num_items = 200;
  int num_communities = 2;
  double intra_interaction_rate = 0.1;
  double inter_interaction_rate = 0.005;
  double intra_social_rate = 0.1;
  double inter_social_rate = 0.0;
  double noise_ratio = 0.0;
  /// Items inside a block get interaction weight (r + 1)^-s (r = position in
  /// the block), rescaled to mean 1. Zero keeps every item equally likely.
  double popularity_exponent = 0.0;
  std::uint64_t seed = 0;
};

struct SyntheticData {
  InteractionGraph interactions;
  SocialGraph clean_social;
  /// clean_social plus the labeled noise edges.
  SocialGraph social;
  std::vector<Edge> noise;
  std::vector<int> user_community;
  std::vector<int> item_community;
};

/// Planted-community fixture. Users and items are split into contiguous
/// equal blocks; noise edges are drawn uniformly among cross-community pairs.
SyntheticData generate_synthetic(const SyntheticSpec& spec);

/// Directory layout: manifest.txt, train.edges, social.edges, test.tsv,
/// test_remainder.tsv, negatives.tsv.
void write_dataset(const std::filesystem::path& dir, const Dataset& dataset);
Dataset read_dataset(const std::filesystem::path& dir);

}  // namespace burger
