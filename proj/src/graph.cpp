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

#include "burger/graph.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

#include "burger/error.hpp"
#include "burger/random.hpp"

namespace burger {
namespace {

constexpr const char* kModule = "graph_core";

std::uint64_t pair_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

void sort_unique(std::vector<int>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

InteractionGraph InteractionGraph::from_edges(int num_users, int num_items,
                                              std::vector<Edge> edges) {
  if (num_users < 0 || num_items < 0)
    throw InvalidInput(kModule, "InteractionGraph", "negative dimension");
  for (const Edge& e : edges) {
    if (e.a < 0 || e.a >= num_users || e.b < 0 || e.b >= num_items)
      throw InvalidInput(kModule, "InteractionGraph",
                         "edge (" + std::to_string(e.a) + "," + std::to_string(e.b) +
                             ") out of range");
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  InteractionGraph g;
  g.num_users_ = num_users;
  g.num_items_ = num_items;
  g.edges_ = std::move(edges);

  g.user_offsets_.assign(num_users + 1, 0);
  g.item_offsets_.assign(num_items + 1, 0);
  for (const Edge& e : g.edges_) {
    ++g.user_offsets_[e.a + 1];
    ++g.item_offsets_[e.b + 1];
  }
  for (int u = 0; u < num_users; ++u) g.user_offsets_[u + 1] += g.user_offsets_[u];
  for (int i = 0; i < num_items; ++i) g.item_offsets_[i + 1] += g.item_offsets_[i];

  g.user_items_.resize(g.edges_.size());
  g.item_users_.resize(g.edges_.size());
  std::vector<std::size_t> item_fill(g.item_offsets_.begin(), g.item_offsets_.end() - 1);
  // Edges are sorted by user, so the user side fills in order and each item
  // column receives its users in ascending order.
  for (std::size_t k = 0; k < g.edges_.size(); ++k) {
    const Edge& e = g.edges_[k];
    g.user_items_[k] = e.b;
    g.item_users_[item_fill[e.b]++] = e.a;
  }
  return g;
}

bool InteractionGraph::contains(UserIndex u, ItemIndex i) const {
  const auto items = items_of(u);
  return std::binary_search(items.begin(), items.end(), i);
}

SocialGraph SocialGraph::empty(int num_users, bool symmetric) {
  SocialGraph g;
  g.num_users_ = num_users;
  g.symmetric_ = symmetric;
  g.rows_.assign(num_users, {});
  return g;
}

SocialGraph SocialGraph::undirected(int num_users, std::span<const Edge> edges,
                                    std::size_t* dropped_self_loops) {
  SocialGraph g = empty(num_users, true);
  std::size_t dropped = 0;
  for (const Edge& e : edges) {
    if (e.a < 0 || e.a >= num_users || e.b < 0 || e.b >= num_users)
      throw InvalidInput(kModule, "SocialGraph", "edge (" + std::to_string(e.a) + "," +
                                                     std::to_string(e.b) + ") out of range");
    if (e.a == e.b) {
      ++dropped;
      continue;
    }
    g.rows_[e.a].push_back(e.b);
    g.rows_[e.b].push_back(e.a);
  }
  for (auto& row : g.rows_) sort_unique(row);
  if (dropped_self_loops) *dropped_self_loops = dropped;
  return g;
}

SocialGraph SocialGraph::directed(int num_users, std::vector<std::vector<UserIndex>> rows) {
  if (static_cast<int>(rows.size()) != num_users)
    throw InvalidInput(kModule, "SocialGraph", "row count does not match user count");
  SocialGraph g;
  g.num_users_ = num_users;
  g.symmetric_ = false;
  g.rows_ = std::move(rows);
  for (int u = 0; u < num_users; ++u) {
    auto& row = g.rows_[u];
    sort_unique(row);
    for (UserIndex v : row) {
      if (v < 0 || v >= num_users)
        throw InvalidInput(kModule, "SocialGraph", "neighbor " + std::to_string(v) + " out of range");
      if (v == u)
        throw InvalidInput(kModule, "SocialGraph", "self-loop at user " + std::to_string(u));
    }
  }
  return g;
}

bool SocialGraph::has_edge(UserIndex a, UserIndex b) const {
  const auto& row = rows_[a];
  return std::binary_search(row.begin(), row.end(), b);
}

std::size_t SocialGraph::num_arcs() const {
  std::size_t n = 0;
  for (const auto& row : rows_) n += row.size();
  return n;
}

std::vector<Edge> SocialGraph::edge_list() const {
  std::vector<Edge> out;
  out.reserve(symmetric_ ? num_arcs() / 2 : num_arcs());
  for (int u = 0; u < num_users_; ++u)
    for (UserIndex v : rows_[u])
      if (!symmetric_ || u < v) out.push_back({u, v});
  return out;
}

std::vector<std::size_t> SocialGraph::in_degrees() const {
  std::vector<std::size_t> deg(num_users_, 0);
  for (const auto& row : rows_)
    for (UserIndex v : row) ++deg[v];
  return deg;
}

SocialTensor::SocialTensor(std::vector<SocialGraph> slices, std::int64_t generation)
    : slices_(std::move(slices)), generation_(generation) {
  if (slices_.empty())
    throw InvalidConfiguration(kModule, "SocialTensor", "a tensor needs at least one slice");
  for (const SocialGraph& s : slices_)
    if (s.num_users() != slices_.front().num_users())
      throw InvalidInput(kModule, "SocialTensor", "slices disagree on user count");
}

SocialTensor slide_window(const SocialTensor& tensor, SocialGraph next) {
  if (next.num_users() != tensor.num_users())
    throw InvalidInput(kModule, "slide_window",
                       "invalid slice: " + std::to_string(next.num_users()) + " users, tensor has " +
                           std::to_string(tensor.num_users()));
  std::vector<SocialGraph> slices(tensor.slices().begin() + 1, tensor.slices().end());
  slices.push_back(std::move(next));
  return SocialTensor(std::move(slices), tensor.generation() + 1);
}

SocialGraph random_perturb(const SocialGraph& graph, double p, std::uint64_t seed,
                           PerturbMode mode) {
  if (!(p >= 0.0 && p <= 1.0))
    throw InvalidConfiguration(kModule, "random_perturb", "probability must lie in [0, 1]");
  if (!graph.symmetric())
    throw InvalidInput(kModule, "random_perturb", "perturbation expects an undirected graph");

  const int m = graph.num_users();
  const std::vector<Edge> original = graph.edge_list();
  Rng rng(seed);
  std::bernoulli_distribution drop(p);

  std::vector<Edge> kept;
  kept.reserve(original.size());
  for (const Edge& e : original)
    if (!drop(rng)) kept.push_back(e);

  std::size_t to_add = 0;
  if (mode == PerturbMode::kDeleteAndAdd && !original.empty())
    to_add = std::binomial_distribution<std::size_t>(original.size(), p)(rng);

  const std::uint64_t possible =
      m < 2 ? 0 : static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(m - 1) / 2;
  to_add = std::min<std::uint64_t>(to_add, possible - original.size());

  if (to_add > 0) {
    std::unordered_set<std::uint64_t> taken;
    taken.reserve(original.size() + to_add);
    for (const Edge& e : original) taken.insert(pair_key(e.a, e.b));

    std::size_t attempts = 0;
    const std::size_t max_attempts = 64 * (to_add + 16);
    std::size_t added = 0;
    while (added < to_add && attempts < max_attempts) {
      ++attempts;
      int a = uniform_index(rng, m);
      int b = uniform_index(rng, m);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      if (taken.insert(pair_key(a, b)).second) {
        kept.push_back({a, b});
        ++added;
      }
    }
    if (added < to_add) {
      // Near-complete graph: enumerate what is left and draw without replacement.
      std::vector<Edge> free_pairs;
      for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
          if (!taken.count(pair_key(a, b))) free_pairs.push_back({a, b});
      std::shuffle(free_pairs.begin(), free_pairs.end(), rng);
      for (std::size_t k = 0; added < to_add && k < free_pairs.size(); ++k, ++added)
        kept.push_back(free_pairs[k]);
    }
  }
  return SocialGraph::undirected(m, kept);
}

SocialTensor build_initial_tensor(const SocialGraph& graph, std::size_t tau, double p,
                                  std::uint64_t seed) {
  if (tau == 0)
    throw InvalidConfiguration(kModule, "build_initial_tensor", "tau must be at least 1");
  std::vector<SocialGraph> slices;
  slices.reserve(tau);
  for (std::size_t t = 0; t + 1 < tau; ++t)
    slices.push_back(random_perturb(graph, p, derive_seed(seed, t)));
  slices.push_back(graph);
  return SocialTensor(std::move(slices), 0);
}

}  // namespace burger
