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

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "burger/graph.hpp"

namespace burger {

/// Ordered `key: value` text file. Used for every manifest the library writes.
class Manifest {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, const char* value) { set(key, std::string(value)); }
  template <typename T>
  void set(const std::string& key, const T& value) {
    set(key, std::to_string(value));
  }

  bool has(const std::string& key) const;
  /// Throws InvalidInput when the key is absent.
  const std::string& get(const std::string& key) const;
  long long get_int(const std::string& key) const;
  std::uint64_t get_uint(const std::string& key) const;
  double get_double(const std::string& key) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  void write(const std::filesystem::path& path) const;
  static Manifest read(const std::filesystem::path& path);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// One `a<TAB>b` line per edge, sorted by (a, b).
void write_edge_list(const std::filesystem::path& path, std::span<const Edge> edges);

/// Reads two-column integer lines. Blank lines are skipped; anything else
/// malformed throws ParseError with the line number.
std::vector<Edge> read_edge_list(const std::filesystem::path& path);

void write_social_graph(const std::filesystem::path& path, const SocialGraph& graph);
SocialGraph read_social_graph(const std::filesystem::path& path, int num_users, bool directed);

void write_interactions(const std::filesystem::path& path, const InteractionGraph& graph);
InteractionGraph read_interactions(const std::filesystem::path& path, int num_users,
                                   int num_items);

/// One `slice_<t>.edges` per slice plus `tensor_manifest.txt` recording tau,
/// generation, user count, slice order, and per-slice directedness.
void write_tensor(const std::filesystem::path& dir, const SocialTensor& tensor);
SocialTensor read_tensor(const std::filesystem::path& dir);

}  // namespace burger
