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

#include "burger/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "burger/error.hpp"

namespace burger {
namespace {

constexpr const char* kModule = "graph_core";

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::ofstream open_out(const std::filesystem::path& path, const char* op) {
  std::ofstream out(path);
  if (!out) throw InvalidInput(kModule, op, "cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, const char* op) {
  std::ifstream in(path);
  if (!in) throw InvalidInput(kModule, op, "cannot open " + path.string());
  return in;
}

}  // namespace

void Manifest::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

bool Manifest::has(const std::string& key) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const auto& kv) { return kv.first == key; });
}

const std::string& Manifest::get(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  throw InvalidInput(kModule, "Manifest", "missing key '" + key + "'");
}

long long Manifest::get_int(const std::string& key) const {
  const std::string& v = get(key);
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw InvalidInput(kModule, "Manifest", "key '" + key + "' is not an integer: " + v);
  return out;
}

std::uint64_t Manifest::get_uint(const std::string& key) const {
  const std::string& v = get(key);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw InvalidInput(kModule, "Manifest", "key '" + key + "' is not an unsigned integer: " + v);
  return out;
}

double Manifest::get_double(const std::string& key) const {
  const std::string& v = get(key);
  try {
    std::size_t used = 0;
    const double out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw InvalidInput(kModule, "Manifest", "key '" + key + "' is not a number: " + v);
  }
}

void Manifest::write(const std::filesystem::path& path) const {
  auto out = open_out(path, "Manifest");
  for (const auto& [k, v] : entries_) out << k << ": " << v << '\n';
}

Manifest Manifest::read(const std::filesystem::path& path) {
  auto in = open_in(path, "Manifest");
  Manifest m;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos)
      throw ParseError(kModule, "Manifest", "expected 'key: value'", lineno);
    m.set(trim(std::string_view(line).substr(0, colon)),
          trim(std::string_view(line).substr(colon + 1)));
  }
  return m;
}

void write_edge_list(const std::filesystem::path& path, std::span<const Edge> edges) {
  std::vector<Edge> sorted(edges.begin(), edges.end());
  std::sort(sorted.begin(), sorted.end());
  auto out = open_out(path, "write_edge_list");
  for (const Edge& e : sorted) out << e.a << '\t' << e.b << '\n';
}

std::vector<Edge> read_edge_list(const std::filesystem::path& path) {
  auto in = open_in(path, "read_edge_list");
  std::vector<Edge> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::istringstream fields(line);
    long long a = 0, b = 0;
    std::string rest;
    if (!(fields >> a >> b) || (fields >> rest))
      throw ParseError(kModule, "read_edge_list", "expected two integer columns", lineno);
    if (a < 0 || b < 0 || a > INT32_MAX || b > INT32_MAX)
      throw ParseError(kModule, "read_edge_list", "index out of range", lineno);
    edges.push_back({static_cast<int>(a), static_cast<int>(b)});
  }
  return edges;
}

void write_social_graph(const std::filesystem::path& path, const SocialGraph& graph) {
  write_edge_list(path, graph.edge_list());
}

SocialGraph read_social_graph(const std::filesystem::path& path, int num_users, bool directed) {
  const std::vector<Edge> edges = read_edge_list(path);
  if (!directed) return SocialGraph::undirected(num_users, edges);
  std::vector<std::vector<UserIndex>> rows(num_users);
  for (const Edge& e : edges) {
    if (e.a >= num_users)
      throw InvalidInput(kModule, "read_social_graph", "row " + std::to_string(e.a) + " out of range");
    rows[e.a].push_back(e.b);
  }
  return SocialGraph::directed(num_users, std::move(rows));
}

void write_interactions(const std::filesystem::path& path, const InteractionGraph& graph) {
  write_edge_list(path, graph.edges());
}

InteractionGraph read_interactions(const std::filesystem::path& path, int num_users,
                                   int num_items) {
  return InteractionGraph::from_edges(num_users, num_items, read_edge_list(path));
}

void write_tensor(const std::filesystem::path& dir, const SocialTensor& tensor) {
  std::filesystem::create_directories(dir);
  Manifest m;
  m.set("tau", tensor.tau());
  m.set("generation", tensor.generation());
  m.set("num_users", tensor.num_users());
  for (std::size_t t = 0; t < tensor.tau(); ++t) {
    const std::string name = "slice_" + std::to_string(t) + ".edges";
    write_social_graph(dir / name, tensor.slices()[t]);
    m.set("slice_" + std::to_string(t), name);
    m.set("slice_" + std::to_string(t) + "_directed", tensor.slices()[t].symmetric() ? 0 : 1);
  }
  m.write(dir / "tensor_manifest.txt");
}

SocialTensor read_tensor(const std::filesystem::path& dir) {
  const Manifest m = Manifest::read(dir / "tensor_manifest.txt");
  const auto tau = m.get_int("tau");
  const auto users = static_cast<int>(m.get_int("num_users"));
  std::vector<SocialGraph> slices;
  for (long long t = 0; t < tau; ++t) {
    const std::string key = "slice_" + std::to_string(t);
    slices.push_back(read_social_graph(dir / m.get(key), users, m.get_int(key + "_directed") != 0));
  }
  return SocialTensor(std::move(slices), m.get_int("generation"));
}

}  // namespace burger
