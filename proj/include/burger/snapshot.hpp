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

#include "burger/propagation.hpp"
#include "burger/trainer.hpp"

namespace burger {

/// One text line "matrix <rows> <cols>" followed by rows*cols native doubles
/// in row-major order.
void write_matrix(const std::filesystem::path& path, const Matrix<double>& m);
Matrix<double> read_matrix(const std::filesystem::path& path);

/// Writes base embeddings, pooled matrices, aggregation parameters and the
/// metrics of a snapshot. `snapshot.txt` is written last and marks the
/// directory complete.
void write_snapshot(const std::filesystem::path& dir, const Snapshot& snapshot);

/// Throws InvalidInput "missing snapshot" when the directory holds no
/// complete snapshot.
Snapshot read_snapshot(const std::filesystem::path& dir);

}  // namespace burger
