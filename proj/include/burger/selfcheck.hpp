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
#include <string>
#include <vector>

#include "burger/denoise.hpp"

namespace burger {

struct GradientCheck {
  std::string name;
  double max_relative_error = 0;
  std::size_t entries = 0;
  bool pass = false;
};

struct GradientCheckOptions {
  std::size_t instances = 5;
  double step = 1e-3;
  double tolerance = 1e-6;
  std::uint64_t seed = 7;
};

/// |a - b| / max(|a|, |b|); zero when both magnitudes are below 1e-9.
double relative_error(double analytic, double numeric);

/// Compares every analytic gradient of the objective and both propagation
/// adjoints with five-point central differences on small random instances.
/// Instances with any coordination hinge argument within 0.05 of zero are
/// redrawn so no difference straddles a kink.
std::vector<GradientCheck> run_gradient_checks(const GradientCheckOptions& options = {});

/// The order-statistic check on the uniform and standard normal bases.
std::vector<OrderStatisticReport> run_order_statistic_checks(std::size_t samples = 100000,
                                                             std::uint64_t seed = 11);

}  // namespace burger
