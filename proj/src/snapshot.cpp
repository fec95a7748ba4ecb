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

#include "burger/snapshot.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "burger/error.hpp"
#include "burger/graph_io.hpp"

namespace burger {
namespace {

constexpr const char* kModule = "trainer";
constexpr const char* kMarker = "snapshot.txt";

}  // namespace

void write_matrix(const std::filesystem::path& path, const Matrix<double>& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput(kModule, "write_matrix", "cannot open " + path.string());
  out << "matrix " << m.rows() << ' ' << m.cols() << '\n';
  out.write(reinterpret_cast<const char*>(m.data()),
            static_cast<std::streamsize>(m.size() * sizeof(double)));
  if (!out) throw InvalidInput(kModule, "write_matrix", "write failed for " + path.string());
}

Matrix<double> read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput(kModule, "read_matrix", "cannot open " + path.string());
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string tag;
  Eigen::Index rows = -1, cols = -1;
  if (!(hs >> tag >> rows >> cols) || tag != "matrix" || rows < 0 || cols < 0)
    throw ParseError(kModule, "read_matrix", "bad header in " + path.string(), 1);
  Matrix<double> m(rows, cols);
  in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(m.size() * sizeof(double)))
    throw InvalidInput(kModule, "read_matrix", "truncated data in " + path.string());
  return m;
}

void write_snapshot(const std::filesystem::path& dir, const Snapshot& snapshot) {
  if (!snapshot.valid) throw InvalidState(kModule, "write_snapshot", "no evaluated snapshot to write");
  std::filesystem::create_directories(dir);
  std::filesystem::remove(dir / kMarker);
  write_matrix(dir / "base_users.bin", snapshot.state.users);
  write_matrix(dir / "base_items.bin", snapshot.state.items);
  write_matrix(dir / "interest_users.bin", snapshot.interest_users);
  write_matrix(dir / "items.bin", snapshot.items);
  write_matrix(dir / "social_users.bin", snapshot.social_users);
  write_matrix(dir / "agg_weights.bin", Matrix<double>(snapshot.state.agg.weights.transpose()));

  Manifest m;
  m.set("iteration", snapshot.iteration);
  m.set("epoch", snapshot.epoch);
  std::ostringstream bias;
  bias.precision(17);
  bias << snapshot.state.agg.bias;
  m.set("agg_bias", bias.str());
  std::ostringstream hr3;
  hr3.precision(17);
  hr3 << snapshot.metrics.hr3;
  m.set("hr3", hr3.str());
  m.write(dir / kMarker);
}

Snapshot read_snapshot(const std::filesystem::path& dir) {
  if (!std::filesystem::exists(dir / kMarker))
    throw InvalidInput(kModule, "read_snapshot", "missing snapshot in " + dir.string());
  const Manifest m = Manifest::read(dir / kMarker);
  Snapshot s;
  s.state.users = read_matrix(dir / "base_users.bin");
  s.state.items = read_matrix(dir / "base_items.bin");
  s.interest_users = read_matrix(dir / "interest_users.bin");
  s.items = read_matrix(dir / "items.bin");
  s.social_users = read_matrix(dir / "social_users.bin");
  const Matrix<double> w = read_matrix(dir / "agg_weights.bin");
  s.state.agg.weights = w.transpose();
  s.state.agg.bias = m.get_double("agg_bias");
  s.iteration = static_cast<std::size_t>(m.get_int("iteration"));
  s.epoch = static_cast<std::size_t>(m.get_int("epoch"));
  if (s.interest_users.rows() != s.state.users.rows() || s.items.rows() != s.state.items.rows() ||
      s.social_users.rows() != s.state.users.rows())
    throw InvalidInput(kModule, "read_snapshot", "inconsistent matrix shapes in " + dir.string());
  s.valid = true;
  return s;
}

}  // namespace burger
