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

#include "burger/trainer.hpp"

#include <sstream>

namespace burger {

std::vector<NormalizedAdjacency<double>> normalize_tensor(const SocialTensor& tensor) {
  std::vector<NormalizedAdjacency<double>> out;
  out.reserve(tensor.tau());
  for (const auto& slice : tensor.slices()) out.push_back(symmetric_normalize<double>(slice));
  return out;
}

TrainingState make_training_state(const Dataset& dataset, const TrainRunConfig& config) {
  config.validate();
  if (dataset.social.num_users() != dataset.num_users())
    throw InvalidInput("trainer", "run", "social graph and interactions disagree on user count");
  const std::size_t tau = config.effective_tau();
  SocialTensor tensor = build_initial_tensor(dataset.social, tau, config.use_tensor ? config.p : 0.0,
                                             derive_seed(config.seed, kTensorStream));
  EmbeddingState<double> params =
      EmbeddingState<double>::gaussian(dataset.num_users(), dataset.num_items(), config.d,
                                       config.init_std, derive_seed(config.seed, kInitStream), tau);
  OptimizerState<double> optimizer = OptimizerState<double>::zeros_like(params);
  auto slices = normalize_tensor(tensor);
  return TrainingState{std::move(params),
                       std::move(optimizer),
                       std::move(tensor),
                       std::move(slices),
                       symmetric_normalize<double>(dataset.train),
                       Rng(derive_seed(config.seed, kSamplerStream)),
                       0};
}

ForwardPass forward(const TrainingState& state, const TrainRunConfig& config) {
  return {propagate_user_item(state.interactions, state.params.users, state.params.items, config.K),
          propagate_social_tensor<double>(state.slices, state.params.users, config.K, config.agg,
                                          state.params.agg)};
}

std::size_t batches_per_epoch(const Dataset& dataset, const TrainRunConfig& config) {
  if (config.batches_per_epoch > 0) return config.batches_per_epoch;
  const std::size_t edges = dataset.train.num_edges();
  return std::max<std::size_t>(1, (edges + config.batch - 1) / config.batch);
}

std::string steps_csv(const RunLog& log) {
  std::ostringstream os;
  os.precision(17);
  os << "step,iteration,epoch,rec,soc,omega1,omega2,l2,total\n";
  for (const auto& r : log.steps)
    os << r.step << ',' << r.iteration << ',' << r.epoch << ',' << r.rec << ',' << r.soc << ','
       << r.omega1 << ',' << r.omega2 << ',' << r.l2 << ',' << r.total << '\n';
  return os.str();
}

std::string epochs_csv(const RunLog& log) {
  std::ostringstream os;
  os.precision(17);
  os << "iteration,epoch,batches,rec,soc,omega1,omega2,l2,total,hr1,hr3,ndcg3\n";
  for (const auto& r : log.epochs)
    os << r.iteration << ',' << r.epoch << ',' << r.batches << ',' << r.rec << ',' << r.soc << ','
       << r.omega1 << ',' << r.omega2 << ',' << r.l2 << ',' << r.total << ',' << r.hr1 << ','
       << r.hr3 << ',' << r.ndcg3 << '\n';
  return os.str();
}

std::string iterations_csv(const RunLog& log) {
  std::ostringstream os;
  os.precision(17);
  os << "iteration,epochs,best_hr3,improved,kept,dropped,added,truncated_users,generation\n";
  for (const auto& r : log.iterations)
    os << r.iteration << ',' << r.epochs << ',' << r.best_hr3 << ',' << (r.improved ? 1 : 0) << ','
       << r.kept << ',' << r.dropped << ',' << r.added << ',' << r.truncated_users << ','
       << r.generation << '\n';
  return os.str();
}

}  // namespace burger
