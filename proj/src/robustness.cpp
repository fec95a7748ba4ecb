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

#include "burger/robustness.hpp"

#include <sstream>

#include "burger/error.hpp"
#include "burger/random.hpp"
#include "burger/trainer.hpp"

namespace burger {

namespace {

constexpr std::uint64_t kNoiseStream = 4;

MetricReport train_and_score(const Dataset& dataset, const TrainRunConfig& config) {
  RunResult result = run(dataset, config);
  if (!result.log.best.valid)
    throw InvalidState("eval", "robustness_harness", "run produced no evaluation");
  return result.log.best.metrics;
}

}  // namespace

std::string RobustnessTable::csv_header() {
  return "variant,ratio,injected,hr1,hr3,ndcg3,dec_hr1,dec_hr3,dec_ndcg3";
}

std::string RobustnessTable::to_csv() const {
  std::ostringstream os;
  os.precision(10);
  os << csv_header() << '\n';
  for (const auto& r : rows)
    os << r.variant << ',' << r.ratio << ',' << r.injected << ',' << r.hr1 << ',' << r.hr3 << ','
       << r.ndcg3 << ',' << r.dec_hr1 << ',' << r.dec_hr3 << ',' << r.dec_ndcg3 << '\n';
  return os.str();
}

RobustnessTable robustness_harness(const Dataset& dataset, std::span<const double> ratios,
                                   const TrainRunConfig& config, bool compare_without_enhancement) {
  for (double r : ratios)
    if (!(r >= 0 && r < 1))
      throw InvalidConfiguration("eval", "robustness_harness", "noise ratios must lie in [0, 1)");

  std::vector<bool> variants{true};
  if (compare_without_enhancement) variants.push_back(false);

  RobustnessTable table;
  for (bool denoise : variants) {
    TrainRunConfig cfg = config;
    cfg.denoise = denoise;
    const std::string name = denoise ? "burger" : "no_enhancement";
    const MetricReport clean = train_and_score(dataset, cfg);
    table.rows.push_back({name, 0.0, 0, clean.hr1, clean.hr3, clean.ndcg3, 0, 0, 0});
    for (std::size_t k = 0; k < ratios.size(); ++k) {
      if (ratios[k] == 0) continue;
      Dataset noisy = dataset;
      NoisySocial injected = inject_social_noise(
          dataset.social, ratios[k], derive_seed(derive_seed(config.seed, kNoiseStream), k));
      noisy.social = std::move(injected.graph);
      const MetricReport m = train_and_score(noisy, cfg);
      table.rows.push_back({name, ratios[k], injected.noise.size(), m.hr1, m.hr3, m.ndcg3,
                            decrease_percent(clean.hr1, m.hr1), decrease_percent(clean.hr3, m.hr3),
                            decrease_percent(clean.ndcg3, m.ndcg3)});
    }
  }
  return table;
}

}  // namespace burger
