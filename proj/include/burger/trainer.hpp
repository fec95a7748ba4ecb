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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "burger/config.hpp"
#include "burger/denoise.hpp"
#include "burger/error.hpp"
#include "burger/eval.hpp"
#include "burger/graph.hpp"
#include "burger/ingest.hpp"
#include "burger/objective.hpp"
#include "burger/optimizer.hpp"
#include "burger/propagation.hpp"
#include "burger/random.hpp"

namespace burger {

/// Random streams derived from the run seed.
inline constexpr std::uint64_t kInitStream = 1;
inline constexpr std::uint64_t kTensorStream = 2;
inline constexpr std::uint64_t kSamplerStream = 3;

struct StepRow {
  std::int64_t step = 0;
  std::size_t iteration = 0;
  std::size_t epoch = 0;
  double rec = 0, soc = 0, omega1 = 0, omega2 = 0, l2 = 0, total = 0;
  bool operator==(const StepRow&) const = default;
};

struct EpochRow {
  std::size_t iteration = 0;
  std::size_t epoch = 0;
  std::size_t batches = 0;
  // Batch means of every loss column.
  double rec = 0, soc = 0, omega1 = 0, omega2 = 0, l2 = 0, total = 0;
  double hr1 = 0, hr3 = 0, ndcg3 = 0;
  bool operator==(const EpochRow&) const = default;
};

struct IterationRow {
  std::size_t iteration = 0;
  std::size_t epochs = 0;
  /// Best HR@3 inside this iteration (NaN when no epoch ran).
  double best_hr3 = std::numeric_limits<double>::quiet_NaN();
  bool improved = false;
  std::size_t kept = 0, dropped = 0, added = 0, truncated_users = 0;
  std::int64_t generation = 0;
};

/// Parameters and pooled outputs at the best evaluation seen.
struct Snapshot {
  EmbeddingState<double> state;
  Matrix<double> interest_users;
  Matrix<double> items;
  Matrix<double> social_users;
  MetricReport metrics;
  std::size_t iteration = 0;
  std::size_t epoch = 0;
  bool valid = false;
};

struct RunLog {
  std::vector<StepRow> steps;
  std::vector<EpochRow> epochs;
  std::vector<IterationRow> iterations;
  Snapshot best;
};

/// Everything the loop mutates between iterations.
struct TrainingState {
  EmbeddingState<double> params;
  OptimizerState<double> optimizer;
  SocialTensor tensor;
  std::vector<NormalizedAdjacency<double>> slices;
  NormalizedAdjacency<double> interactions;
  Rng sampler_rng;
  std::size_t iteration = 0;
};

struct ForwardPass {
  PropagationOutput<double> interest;
  SocialPropagationOutput<double> social;
};

std::vector<NormalizedAdjacency<double>> normalize_tensor(const SocialTensor& tensor);

/// Initial parameters, moments, and the perturbed tensor built from the
/// training social graph.
TrainingState make_training_state(const Dataset& dataset, const TrainRunConfig& config);

ForwardPass forward(const TrainingState& state, const TrainRunConfig& config);

/// Loss report and gradients on every trainable block for one batch:
/// forward through both propagations, objective, then both adjoints plus
/// the regularizer.
template <unsigned Terms = kAllTerms>
std::pair<LossReport<double>, EmbeddingGradients<double>> objective_and_gradients(
    const EmbeddingState<double>& params, const NormalizedAdjacency<double>& interactions,
    std::span<const NormalizedAdjacency<double>> slices, int layers, AggMode agg,
    const TripletBatch& batch, const LossWeights<double>& weights) {
  const PropagationOutput<double> interest =
      propagate_user_item(interactions, params.users, params.items, layers);
  const SocialPropagationOutput<double> social =
      propagate_social_tensor<double>(slices, params.users, layers, agg, params.agg);
  const ObjectiveInputs<double> inputs{interest.pooled_users, interest.pooled_items,
                                       social.aggregated, params.users, params.items};
  LossReport<double> report = evaluate_objective<Terms>(inputs, batch, weights);

  auto [du, di] = propagate_user_item_backward(interactions, layers, report.grad_interest_users,
                                               report.grad_items);
  EmbeddingGradients<double> grads;
  grads.users = std::move(du);
  grads.items = std::move(di);
  grads.agg.weights = Vector<double>::Zero(params.agg.weights.size());
  if constexpr ((Terms & (kTermSocial | kTermOmega1)) != 0) {
    SocialGradients<double> sg =
        propagate_social_backward<double>(slices, layers, social, report.grad_social_users);
    grads.users += sg.users;
    grads.agg = std::move(sg.agg);
  }
  grads.users += report.grad_base_users;
  grads.items += report.grad_base_items;
  return {std::move(report), std::move(grads)};
}

/// Minibatches per epoch: the configured count, else ceil(|train| / batch).
std::size_t batches_per_epoch(const Dataset& dataset, const TrainRunConfig& config);

/// Up to E epochs of minibatch Adam on the current tensor, evaluating after
/// every epoch. Stops early after `patience` epochs without beating the best
/// HR@3 seen in this iteration. The run-level best snapshot in `log` is
/// updated whenever an evaluation beats it.
template <unsigned Terms = kAllTerms>
void train_iteration(const Dataset& dataset, TrainingState& state, const TrainRunConfig& config,
                     RunLog& log) {
  config.validate();
  if (state.tensor.tau() != state.slices.size())
    throw InvalidState("trainer", "train_iteration", "tensor and normalized slices disagree");
  const LossWeights<double> weights = config.weights();
  const AdamConfig<double> adam{config.lr};
  const bool update_agg = config.agg == AggMode::kMlp;
  const std::size_t batches = batches_per_epoch(dataset, config);
  const TripletSampler sampler(dataset.train, state.tensor.newest());

  IterationRow row;
  row.iteration = state.iteration;
  double iteration_best = -std::numeric_limits<double>::infinity();
  std::size_t stale = 0;
  for (std::size_t epoch = 0; epoch < config.epochs_per_iteration; ++epoch) {
    EpochRow er;
    er.iteration = state.iteration;
    er.epoch = epoch;
    er.batches = batches;
    for (std::size_t b = 0; b < batches; ++b) {
      const TripletBatch batch = sampler.sample(config.batch, state.sampler_rng);
      auto [report, grads] = objective_and_gradients<Terms>(
          state.params, state.interactions, state.slices, config.K, config.agg, batch, weights);
      if (!std::isfinite(report.total))
        throw NumericalError("trainer", "train_iteration",
                             "non-finite loss at step " + std::to_string(state.optimizer.step + 1));
      adam_step(state.params, grads, state.optimizer, adam, update_agg);
      if (!state.params.all_finite())
        throw NumericalError("trainer", "adam_step",
                             "non-finite parameters after step " + std::to_string(state.optimizer.step));

      StepRow sr{state.optimizer.step, state.iteration, epoch, report.rec, report.soc,
                 report.omega1, report.omega2, report.l2, report.total};
      log.steps.push_back(sr);
      er.rec += sr.rec;
      er.soc += sr.soc;
      er.omega1 += sr.omega1;
      er.omega2 += sr.omega2;
      er.l2 += sr.l2;
      er.total += sr.total;
    }
    const double denom = static_cast<double>(std::max<std::size_t>(batches, 1));
    er.rec /= denom;
    er.soc /= denom;
    er.omega1 /= denom;
    er.omega2 /= denom;
    er.l2 /= denom;
    er.total /= denom;

    const ForwardPass fw = forward(state, config);
    MetricReport metrics = evaluate(dataset, fw.interest.pooled_users, fw.interest.pooled_items);
    er.hr1 = metrics.hr1;
    er.hr3 = metrics.hr3;
    er.ndcg3 = metrics.ndcg3;
    log.epochs.push_back(er);
    ++row.epochs;

    if (!log.best.valid || metrics.hr3 > log.best.metrics.hr3) {
      log.best.state = state.params;
      log.best.interest_users = fw.interest.pooled_users;
      log.best.items = fw.interest.pooled_items;
      log.best.social_users = fw.social.aggregated;
      log.best.metrics = std::move(metrics);
      log.best.iteration = state.iteration;
      log.best.epoch = epoch;
      log.best.valid = true;
    }
    if (er.hr3 > iteration_best) {
      iteration_best = er.hr3;
      stale = 0;
    } else if (++stale >= config.patience) {
      break;
    }
  }
  if (row.epochs > 0) row.best_hr3 = iteration_best;
  row.generation = state.tensor.generation();
  log.iterations.push_back(row);
}

/// Result of a full run.
struct RunResult {
  EmbeddingState<double> final_state;
  SocialTensor tensor;
  /// One entry per enhancement, in iteration order.
  std::vector<EnhancedSlice> enhanced;
  RunLog log;
};

/// Tidy CSV renderings of a RunLog.
std::string steps_csv(const RunLog& log);
std::string epochs_csv(const RunLog& log);
std::string iterations_csv(const RunLog& log);

/// What an observer sees after each outer iteration.
struct IterationEvent {
  const TrainingState& state;  // after the window slide
  const IterationRow& row;
  /// Tensor before the slide.
  const SocialTensor& previous;
  /// Null when enhancement is disabled.
  const EnhancedSlice* enhanced = nullptr;
  /// Pooled matrices the enhancement read; null when enhancement is disabled.
  const ForwardPass* forward = nullptr;
};

using IterationObserver = std::function<void(const IterationEvent&)>;

/// Outer loop: train, enhance from the current embeddings, slide the window.
/// Ends after `max_iterations` or after `patience` iterations in a row that
/// fail to improve the run-level best HR@3.
template <unsigned Terms = kAllTerms>
RunResult run(const Dataset& dataset, const TrainRunConfig& config,
              const IterationObserver& observer = {}) {
  config.validate();
  TrainingState state = make_training_state(dataset, config);
  RunLog log;
  std::vector<EnhancedSlice> enhanced;
  std::size_t stale = 0;
  for (std::size_t it = 0; it < config.max_iterations; ++it) {
    state.iteration = it;
    const double before = log.best.valid ? log.best.metrics.hr3 : -1.0;
    train_iteration<Terms>(dataset, state, config, log);
    IterationRow& row = log.iterations.back();
    row.improved = log.best.valid && log.best.metrics.hr3 > before;

    const SocialTensor previous = state.tensor;
    std::optional<ForwardPass> fw;
    if (config.denoise) {
      fw = forward(state, config);
      EnhancedSlice next = build_enhanced_slice(fw->interest.pooled_users, fw->social.aggregated,
                                                state.tensor.newest(), config.enhance_options());
      row.kept = next.fusion.total_kept();
      row.dropped = next.fusion.total_dropped();
      row.added = next.fusion.total_added();
      row.truncated_users = next.fusion.truncated_users;
      state.tensor = slide_window(state.tensor, next.slice);
      state.slices = normalize_tensor(state.tensor);
      enhanced.push_back(std::move(next));
      row.generation = state.tensor.generation();
    }
    if (config.reset_moments) state.optimizer = OptimizerState<double>::zeros_like(state.params);
    if (observer)
      observer(IterationEvent{state, row, previous, config.denoise ? &enhanced.back() : nullptr,
                              fw ? &*fw : nullptr});

    if (row.improved) {
      stale = 0;
    } else if (++stale >= config.patience) {
      break;
    }
  }
  return {std::move(state.params), std::move(state.tensor), std::move(enhanced), std::move(log)};
}

}  // namespace burger
