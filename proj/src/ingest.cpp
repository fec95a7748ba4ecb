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

#include "burger/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <unordered_set>

#include "burger/error.hpp"
#include "burger/graph_io.hpp"
#include "burger/random.hpp"

namespace burger {
namespace {

constexpr const char* kModule = "ingest";

struct RawPair {
  std::int64_t a;
  std::int64_t b;
};

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == '\t' || line[pos] == ' ' || line[pos] == '\r')) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != '\t' && line[end] != ' ' && line[end] != '\r') ++end;
    out.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

std::int64_t parse_id(std::string_view field, std::size_t lineno, const char* op) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw ParseError(kModule, op, "not an integer id: '" + std::string(field) + "'", lineno);
  return v;
}

/// Two id columns plus up to `extra` ignored columns per line.
std::vector<RawPair> read_pairs(const std::filesystem::path& path, std::size_t extra,
                                const char* op) {
  std::ifstream in(path);
  if (!in) throw InvalidInput(kModule, op, "cannot open " + path.string());
  std::vector<RawPair> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() < 2 || fields.size() > 2 + extra)
      throw ParseError(kModule, op,
                       "expected " + std::string(extra ? "2 or 3" : "2") + " columns, got " +
                           std::to_string(fields.size()),
                       lineno);
    pairs.push_back({parse_id(fields[0], lineno, op), parse_id(fields[1], lineno, op)});
  }
  if (pairs.empty()) throw EmptyDataset(kModule, op, path.string() + " holds no records");
  return pairs;
}

IdMap compact(std::vector<std::int64_t> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

int lookup(const IdMap& ids, std::int64_t raw) {
  const auto it = std::lower_bound(ids.begin(), ids.end(), raw);
  if (it == ids.end() || *it != raw) return -1;
  return static_cast<int>(it - ids.begin());
}

/// Draws `count` distinct items in [0, n) outside `excluded` (sorted).
std::vector<ItemIndex> sample_excluding(int n, std::span<const ItemIndex> excluded,
                                        std::size_t count, Rng& rng) {
  const std::size_t available = static_cast<std::size_t>(n) - excluded.size();
  std::vector<ItemIndex> out;
  if (count >= available || 2 * count >= available) {
    std::vector<ItemIndex> pool;
    pool.reserve(available);
    for (ItemIndex i = 0; i < n; ++i)
      if (!std::binary_search(excluded.begin(), excluded.end(), i)) pool.push_back(i);
    if (count >= pool.size()) return pool;
    // Partial Fisher-Yates.
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t j = k + uniform_index(rng, pool.size() - k);
      std::swap(pool[k], pool[j]);
    }
    pool.resize(count);
    std::sort(pool.begin(), pool.end());
    return pool;
  }
  std::unordered_set<ItemIndex> chosen;
  while (out.size() < count) {
    const ItemIndex i = uniform_index(rng, n);
    if (std::binary_search(excluded.begin(), excluded.end(), i)) continue;
    if (chosen.insert(i).second) out.push_back(i);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t pair_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

/// ceil() that ignores representation error in ratio * count (0.3 * 100).
std::size_t ceil_count(double ratio, std::size_t count) {
  return static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(count) - 1e-9));
}

bool valid_rate(double r) { return r >= 0.0 && r <= 1.0; }

}  // namespace

LoadedInteractions load_interactions(const std::filesystem::path& path) {
  const auto pairs = read_pairs(path, 1, "load_interactions");
  std::vector<std::int64_t> users, items;
  users.reserve(pairs.size());
  items.reserve(pairs.size());
  for (const auto& p : pairs) {
    users.push_back(p.a);
    items.push_back(p.b);
  }
  LoadedInteractions out;
  out.user_ids = compact(std::move(users));
  out.item_ids = compact(std::move(items));
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& p : pairs) edges.push_back({lookup(out.user_ids, p.a), lookup(out.item_ids, p.b)});
  out.graph = InteractionGraph::from_edges(static_cast<int>(out.user_ids.size()),
                                           static_cast<int>(out.item_ids.size()), std::move(edges));
  return out;
}

LoadedSocial load_social(const std::filesystem::path& path) {
  const auto pairs = read_pairs(path, 0, "load_social");
  std::vector<std::int64_t> ids;
  ids.reserve(2 * pairs.size());
  for (const auto& p : pairs) {
    ids.push_back(p.a);
    ids.push_back(p.b);
  }
  return load_social(path, compact(std::move(ids)));
}

LoadedSocial load_social(const std::filesystem::path& path, const IdMap& user_ids) {
  const auto pairs = read_pairs(path, 0, "load_social");
  LoadedSocial out;
  out.user_ids = user_ids;
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& p : pairs) {
    const int a = lookup(user_ids, p.a);
    const int b = lookup(user_ids, p.b);
    if (a < 0 || b < 0) {
      ++out.dropped_unknown;
      continue;
    }
    edges.push_back({a, b});
  }
  out.graph = SocialGraph::undirected(static_cast<int>(user_ids.size()), edges,
                                      &out.dropped_self_loops);
  if (out.dropped_self_loops > 0)
    std::cerr << "warning: ingest::load_social dropped " << out.dropped_self_loops
              << " self-loop(s) from " << path.string() << '\n';
  return out;
}

void write_id_map(const std::filesystem::path& path, const IdMap& ids) {
  std::ofstream out(path);
  if (!out) throw InvalidInput(kModule, "write_id_map", "cannot write " + path.string());
  for (std::size_t k = 0; k < ids.size(); ++k) out << k << '\t' << ids[k] << '\n';
}

IdMap read_id_map(const std::filesystem::path& path) {
  const auto pairs = read_pairs(path, 0, "read_id_map");
  IdMap ids(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (pairs[k].a != static_cast<std::int64_t>(k))
      throw ParseError(kModule, "read_id_map", "dense indices must be consecutive", k + 1);
    ids[k] = pairs[k].b;
  }
  return ids;
}

std::vector<UserIndex> Dataset::eval_users() const {
  std::vector<UserIndex> out;
  for (UserIndex u = 0; u < static_cast<UserIndex>(test_positive.size()); ++u)
    if (test_positive[u]) out.push_back(u);
  return out;
}

Dataset split_dataset(const InteractionGraph& interactions, const SocialGraph& social,
                      const SplitOptions& options) {
  if (!(options.ratio > 0.0 && options.ratio < 1.0))
    throw InvalidConfiguration(kModule, "split_dataset", "ratio must lie in (0, 1)");
  if (social.num_users() != interactions.num_users())
    throw InvalidInput(kModule, "split_dataset", "social and interaction user counts differ");

  const int m = interactions.num_users();
  const int n = interactions.num_items();
  Rng rng(options.seed);

  Dataset ds;
  ds.options = options;
  ds.social = social;
  ds.test_positive.assign(m, std::nullopt);
  ds.test_remainder.assign(m, {});
  ds.candidate_negatives.assign(m, {});

  std::vector<Edge> train_edges;
  train_edges.reserve(interactions.num_edges());
  for (UserIndex u = 0; u < m; ++u) {
    const auto items = interactions.items_of(u);
    const std::size_t deg = items.size();
    if (deg < 2) {
      for (ItemIndex i : items) train_edges.push_back({u, i});
      continue;
    }
    std::vector<ItemIndex> shuffled(items.begin(), items.end());
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto wanted = static_cast<std::size_t>(std::llround(options.ratio * static_cast<double>(deg)));
    const std::size_t n_train = std::clamp<std::size_t>(wanted, 1, deg - 1);
    for (std::size_t k = 0; k < n_train; ++k) train_edges.push_back({u, shuffled[k]});
    ds.test_positive[u] = shuffled[n_train];
    ds.test_remainder[u].assign(shuffled.begin() + n_train + 1, shuffled.end());
    std::sort(ds.test_remainder[u].begin(), ds.test_remainder[u].end());

    const std::size_t count = options.all_negatives ? static_cast<std::size_t>(n)
                                                    : options.negatives_per_user;
    ds.candidate_negatives[u] = sample_excluding(n, items, count, rng);
  }
  ds.train = InteractionGraph::from_edges(m, n, std::move(train_edges));
  return ds;
}

NoisySocial inject_social_noise(const SocialGraph& social, double ratio, std::uint64_t seed) {
  if (!(ratio >= 0.0)) throw InvalidConfiguration(kModule, "inject_social_noise", "ratio must be >= 0");
  if (!social.symmetric())
    throw InvalidInput(kModule, "inject_social_noise", "noise injection expects an undirected graph");
  const int m = social.num_users();
  std::vector<Edge> edges = social.edge_list();
  const std::size_t count = ceil_count(ratio, edges.size());
  const std::uint64_t possible =
      m < 2 ? 0 : static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(m - 1) / 2;
  if (count > possible - edges.size())
    throw InvalidInput(kModule, "inject_social_noise",
                       "cannot inject " + std::to_string(count) + " edges; only " +
                           std::to_string(possible - edges.size()) + " absent pairs remain");

  Rng rng(seed);
  std::unordered_set<std::uint64_t> taken;
  for (const Edge& e : edges) taken.insert(pair_key(e.a, e.b));
  NoisySocial out;
  std::size_t attempts = 0;
  while (out.noise.size() < count && attempts < 64 * (count + 16)) {
    ++attempts;
    int a = uniform_index(rng, m);
    int b = uniform_index(rng, m);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (taken.insert(pair_key(a, b)).second) out.noise.push_back({a, b});
  }
  if (out.noise.size() < count) {
    std::vector<Edge> free_pairs;
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b)
        if (!taken.count(pair_key(a, b))) free_pairs.push_back({a, b});
    std::shuffle(free_pairs.begin(), free_pairs.end(), rng);
    for (std::size_t k = 0; out.noise.size() < count; ++k) out.noise.push_back(free_pairs[k]);
  }
  std::sort(out.noise.begin(), out.noise.end());
  edges.insert(edges.end(), out.noise.begin(), out.noise.end());
  out.graph = SocialGraph::undirected(m, edges);
  return out;
}

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  const char* op = "generate_synthetic";
  if (spec.num_users < 1 || spec.num_items < 1 || spec.num_communities < 1)
    throw InvalidConfiguration(kModule, op, "counts must be positive");
  if (spec.num_communities > spec.num_users || spec.num_communities > spec.num_items)
    throw InvalidConfiguration(kModule, op, "more communities than users or items");
  if (!valid_rate(spec.intra_interaction_rate) || !valid_rate(spec.inter_interaction_rate) ||
      !valid_rate(spec.intra_social_rate) || !valid_rate(spec.inter_social_rate))
    throw InvalidConfiguration(kModule, op, "rates must lie in [0, 1]");
  if (!(spec.intra_interaction_rate > spec.inter_interaction_rate) ||
      !(spec.intra_social_rate > spec.inter_social_rate))
    throw InvalidConfiguration(kModule, op, "intra-community rates must exceed inter rates");
  if (!(spec.noise_ratio >= 0.0))
    throw InvalidConfiguration(kModule, op, "noise_ratio must be >= 0");
  if (!(spec.popularity_exponent >= 0.0))
    throw InvalidConfiguration(kModule, op, "popularity_exponent must be >= 0");

  const int m = spec.num_users;
  const int n = spec.num_items;
  const int c = spec.num_communities;
  Rng rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  SyntheticData out;
  out.user_community.resize(m);
  out.item_community.resize(n);
  for (int u = 0; u < m; ++u)
    out.user_community[u] = static_cast<int>(static_cast<long long>(u) * c / m);
  for (int i = 0; i < n; ++i)
    out.item_community[i] = static_cast<int>(static_cast<long long>(i) * c / n);

  // Popularity weight of each item inside its block, (r + 1)^-s rescaled to mean 1.
  std::vector<double> popularity(n, 1.0);
  for (int i = 0, start = 0; i < n; ++i) {
    if (i > 0 && out.item_community[i] != out.item_community[i - 1]) start = i;
    popularity[i] = std::pow(static_cast<double>(i - start + 1), -spec.popularity_exponent);
  }
  for (int i = 0; i < n;) {
    int end = i;
    double sum = 0;
    while (end < n && out.item_community[end] == out.item_community[i]) sum += popularity[end++];
    const double mean = sum / (end - i);
    for (; i < end; ++i) popularity[i] /= mean;
  }

  std::vector<Edge> interactions;
  for (int u = 0; u < m; ++u)
    for (int i = 0; i < n; ++i) {
      const double rate = out.user_community[u] == out.item_community[i]
                              ? spec.intra_interaction_rate
                              : spec.inter_interaction_rate;
      if (unit(rng) < rate * popularity[i]) interactions.push_back({u, i});
    }
  out.interactions = InteractionGraph::from_edges(m, n, std::move(interactions));

  std::vector<Edge> clean;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      const double rate = out.user_community[a] == out.user_community[b] ? spec.intra_social_rate
                                                                          : spec.inter_social_rate;
      if (unit(rng) < rate) clean.push_back({a, b});
    }
  out.clean_social = SocialGraph::undirected(m, clean);

  const std::size_t count = ceil_count(spec.noise_ratio, clean.size());
  if (count > 0) {
    std::vector<Edge> cross;
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b)
        if (out.user_community[a] != out.user_community[b] && !out.clean_social.has_edge(a, b))
          cross.push_back({a, b});
    if (cross.size() < count)
      throw InvalidConfiguration(kModule, op, "not enough cross-community pairs for the noise ratio");
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t j = k + uniform_index(rng, cross.size() - k);
      std::swap(cross[k], cross[j]);
    }
    cross.resize(count);
    std::sort(cross.begin(), cross.end());
    out.noise = std::move(cross);
  }
  std::vector<Edge> all = clean;
  all.insert(all.end(), out.noise.begin(), out.noise.end());
  out.social = SocialGraph::undirected(m, all);
  return out;
}

void write_dataset(const std::filesystem::path& dir, const Dataset& ds) {
  std::filesystem::create_directories(dir);
  write_interactions(dir / "train.edges", ds.train);
  write_social_graph(dir / "social.edges", ds.social);

  std::ofstream test(dir / "test.tsv");
  std::ofstream remainder(dir / "test_remainder.tsv");
  std::ofstream negatives(dir / "negatives.tsv");
  if (!test || !remainder || !negatives)
    throw InvalidInput(kModule, "write_dataset", "cannot write into " + dir.string());
  for (UserIndex u = 0; u < ds.num_users(); ++u) {
    if (ds.test_positive[u]) test << u << '\t' << *ds.test_positive[u] << '\n';
    for (ItemIndex i : ds.test_remainder[u]) remainder << u << '\t' << i << '\n';
    if (!ds.candidate_negatives[u].empty()) {
      negatives << u;
      for (ItemIndex i : ds.candidate_negatives[u]) negatives << '\t' << i;
      negatives << '\n';
    }
  }

  Manifest m;
  m.set("num_users", ds.num_users());
  m.set("num_items", ds.num_items());
  m.set("seed", ds.options.seed);
  std::ostringstream ratio;
  ratio.precision(17);
  ratio << ds.options.ratio;
  m.set("ratio", ratio.str());
  m.set("negatives_per_user", ds.options.negatives_per_user);
  m.set("all_negatives", ds.options.all_negatives ? 1 : 0);
  m.set("train_interactions", ds.train.num_edges());
  m.set("social_edges", ds.social.num_edges());
  m.set("eval_users", ds.eval_users().size());
  m.write(dir / "manifest.txt");
}

Dataset read_dataset(const std::filesystem::path& dir) {
  const char* op = "read_dataset";
  const Manifest m = Manifest::read(dir / "manifest.txt");
  const int users = static_cast<int>(m.get_int("num_users"));
  const int items = static_cast<int>(m.get_int("num_items"));

  Dataset ds;
  ds.options.seed = m.get_uint("seed");
  ds.options.ratio = m.get_double("ratio");
  ds.options.negatives_per_user = static_cast<std::size_t>(m.get_int("negatives_per_user"));
  ds.options.all_negatives = m.get_int("all_negatives") != 0;
  ds.train = read_interactions(dir / "train.edges", users, items);
  ds.social = read_social_graph(dir / "social.edges", users, false);
  ds.test_positive.assign(users, std::nullopt);
  ds.test_remainder.assign(users, {});
  ds.candidate_negatives.assign(users, {});

  auto check = [&](std::int64_t u, std::int64_t i, std::size_t lineno) {
    if (u < 0 || u >= users || i < 0 || i >= items)
      throw ParseError(kModule, op, "index out of range", lineno);
  };
  for (const Edge& e : read_edge_list(dir / "test.tsv")) {
    check(e.a, e.b, 0);
    ds.test_positive[e.a] = e.b;
  }
  for (const Edge& e : read_edge_list(dir / "test_remainder.tsv")) {
    check(e.a, e.b, 0);
    ds.test_remainder[e.a].push_back(e.b);
  }
  std::ifstream negatives(dir / "negatives.tsv");
  if (!negatives) throw InvalidInput(kModule, op, "missing negatives.tsv in " + dir.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(negatives, line)) {
    ++lineno;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    const auto u = parse_id(fields[0], lineno, op);
    for (std::size_t k = 1; k < fields.size(); ++k) {
      const auto i = parse_id(fields[k], lineno, op);
      check(u, i, lineno);
      ds.candidate_negatives[u].push_back(static_cast<ItemIndex>(i));
    }
  }
  return ds;
}

}  // namespace burger
