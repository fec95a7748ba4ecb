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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/SparseCore>

namespace burger {

using UserIndex = int;
using ItemIndex = int;

/// A (row, column) pair. For interaction graphs `a` is a user and `b` an
/// item; for social graphs both are users.
struct Edge {
  int a = 0;
  int b = 0;

  auto operator<=>(const Edge&) const = default;
};

/// Sparse user-item bipartite adjacency with row (user) and column (item)
/// indices over the same deduplicated edge set.
class InteractionGraph {
 public:
  InteractionGraph() = default;

  /// Builds the graph from an arbitrary edge list. Duplicates are collapsed;
  /// out-of-range indices throw InvalidInput.
  static InteractionGraph from_edges(int num_users, int num_items, std::vector<Edge> edges);

  int num_users() const { return num_users_; }
  int num_items() const { return num_items_; }
  std::size_t num_edges() const { return edges_.size(); }

  /// Sorted by (user, item).
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const ItemIndex> items_of(UserIndex u) const {
    return {user_items_.data() + user_offsets_[u], user_items_.data() + user_offsets_[u + 1]};
  }
  std::span<const UserIndex> users_of(ItemIndex i) const {
    return {item_users_.data() + item_offsets_[i], item_users_.data() + item_offsets_[i + 1]};
  }
  std::size_t user_degree(UserIndex u) const { return user_offsets_[u + 1] - user_offsets_[u]; }
  std::size_t item_degree(ItemIndex i) const { return item_offsets_[i + 1] - item_offsets_[i]; }

  bool contains(UserIndex u, ItemIndex i) const;

  bool operator==(const InteractionGraph& other) const {
    return num_users_ == other.num_users_ && num_items_ == other.num_items_ &&
           edges_ == other.edges_;
  }

 private:
  int num_users_ = 0;
  int num_items_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> user_offsets_{0};
  std::vector<ItemIndex> user_items_;
  std::vector<std::size_t> item_offsets_{0};
  std::vector<UserIndex> item_users_;
};

/// Per-user sorted neighbor lists over `num_users` users. Graphs built with
/// `undirected` are symmetric; graphs built with `directed` store each row
/// independently (the denoised slices are of this kind).
class SocialGraph {
 public:
  SocialGraph() = default;

  static SocialGraph empty(int num_users, bool symmetric = true);

  /// Symmetrizes by union. Self-loops are dropped and counted in
  /// `dropped_self_loops` when non-null.
  static SocialGraph undirected(int num_users, std::span<const Edge> edges,
                                std::size_t* dropped_self_loops = nullptr);

  /// Rows are taken as-is (sorted and deduplicated). Self-loops and
  /// out-of-range entries throw InvalidInput.
  static SocialGraph directed(int num_users, std::vector<std::vector<UserIndex>> rows);

  int num_users() const { return num_users_; }
  bool symmetric() const { return symmetric_; }

  std::span<const UserIndex> neighbors(UserIndex u) const { return rows_[u]; }
  std::size_t degree(UserIndex u) const { return rows_[u].size(); }
  bool has_edge(UserIndex a, UserIndex b) const;

  /// Total stored (directed) entries.
  std::size_t num_arcs() const;
  /// Undirected edge count for symmetric graphs, arc count otherwise.
  std::size_t num_edges() const { return symmetric_ ? num_arcs() / 2 : num_arcs(); }

  /// Symmetric graphs list each edge once with a < b; directed graphs list
  /// every arc. Sorted by (a, b) in both cases.
  std::vector<Edge> edge_list() const;

  std::vector<std::size_t> in_degrees() const;

  bool operator==(const SocialGraph& other) const {
    return num_users_ == other.num_users_ && symmetric_ == other.symmetric_ &&
           rows_ == other.rows_;
  }

 private:
  int num_users_ = 0;
  bool symmetric_ = true;
  std::vector<std::vector<UserIndex>> rows_;
};

/// Fixed-length window of social slices, oldest first.
class SocialTensor {
 public:
  explicit SocialTensor(std::vector<SocialGraph> slices, std::int64_t generation = 0);

  std::size_t tau() const { return slices_.size(); }
  int num_users() const { return slices_.front().num_users(); }
  const std::vector<SocialGraph>& slices() const { return slices_; }
  const SocialGraph& newest() const { return slices_.back(); }
  std::int64_t generation() const { return generation_; }

 private:
  std::vector<SocialGraph> slices_;
  std::int64_t generation_ = 0;
};

/// Drops the oldest slice and appends `next` as the newest. The generation
/// counter advances by one.
SocialTensor slide_window(const SocialTensor& tensor, SocialGraph next);

enum class PerturbMode { kDeleteAndAdd, kDeleteOnly };

/// Deletes each undirected edge with probability `p` and, in
/// kDeleteAndAdd mode, adds Binomial(|E|, p) uniformly drawn new edges so the
/// expected density is unchanged. Requires a symmetric graph.
SocialGraph random_perturb(const SocialGraph& graph, double p, std::uint64_t seed,
                           PerturbMode mode = PerturbMode::kDeleteAndAdd);

/// tau-1 perturbed copies (oldest first) followed by the untouched graph.
SocialTensor build_initial_tensor(const SocialGraph& graph, std::size_t tau, double p,
                                  std::uint64_t seed);

/// Sparse weights w(a,b) = 1/sqrt(deg(a) deg(b)). Rows and columns without
/// any incident edge are listed; their rows stay empty.
template <typename Scalar>
struct NormalizedAdjacency {
  Eigen::SparseMatrix<Scalar, Eigen::RowMajor> weights;
  std::vector<int> isolated_rows;
  std::vector<int> isolated_cols;

  Eigen::Index rows() const { return weights.rows(); }
  Eigen::Index cols() const { return weights.cols(); }
};

/// User-item normalization; rows are users, columns items.
template <typename Scalar = double>
NormalizedAdjacency<Scalar> symmetric_normalize(const InteractionGraph& graph);

/// Social normalization. Directed slices use the out-degree of the row user
/// and the in-degree of the column user, which reduces to the symmetric case
/// when the graph is undirected.
template <typename Scalar = double>
NormalizedAdjacency<Scalar> symmetric_normalize(const SocialGraph& graph);

}  // namespace burger

#include "burger/graph_normalize.ipp"
