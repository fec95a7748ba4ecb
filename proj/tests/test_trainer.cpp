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

#include <gtest/gtest.h>

#include <cmath>

#include "burger/error.hpp"
#include "burger/optimizer.hpp"
#include "burger/robustness.hpp"
#include "burger/snapshot.hpp"
#include "burger/trainer.hpp"
#include "fixture.hpp"

namespace burger {
namespace {

EmbeddingState<double> scalar_state(double v) {
  EmbeddingState<double> s;
  s.users = Matrix<double>::Constant(1, 1, v);
  s.items = Matrix<double>::Constant(1, 1, v);
  s.agg = AggParams<double>::identity(1);
  return s;
}

EmbeddingGradients<double> scalar_grad(double g) {
  EmbeddingGradients<double> out;
  out.users = Matrix<double>::Constant(1, 1, g);
  out.items = Matrix<double>::Constant(1, 1, g);
  out.agg = AggParams<double>::identity(1);
  return out;
}

TEST(Adam, FirstStepMovesByLearningRate) {
  auto s = scalar_state(0.5);
  auto o = OptimizerState<double>::zeros_like(s);
  adam_step(s, scalar_grad(1.0), o, AdamConfig<double>{});
  EXPECT_NEAR(s.users(0, 0) - 0.5, -1e-3, 1e-10);
  EXPECT_EQ(o.step, 1);
}

TEST(Adam, ZeroGradientLeavesParameters) {
  auto s = scalar_state(0.5);
  auto o = OptimizerState<double>::zeros_like(s);
  adam_step(s, scalar_grad(0.0), o, AdamConfig<double>{});
  EXPECT_EQ(s.users(0, 0), 0.5);
  EXPECT_EQ(s.items(0, 0), 0.5);
}

TEST(Adam, MomentsDecayUnderZeroGradient) {
  auto s = scalar_state(0.5);
  auto o = OptimizerState<double>::zeros_like(s);
  adam_step(s, scalar_grad(1.0), o, AdamConfig<double>{});
  const double m = o.m_users(0, 0), v = o.v_users(0, 0);
  adam_step(s, scalar_grad(0.0), o, AdamConfig<double>{});
  EXPECT_DOUBLE_EQ(o.m_users(0, 0), 0.9 * m);
  EXPECT_DOUBLE_EQ(o.v_users(0, 0), 0.999 * v);
}

TEST(Adam, ConstantGradientApproachesSignStep) {
  auto s = scalar_state(0.0);
  auto o = OptimizerState<double>::zeros_like(s);
  double last = 0;
  for (int k = 0; k < 5000; ++k) {
    const double before = s.users(0, 0);
    adam_step(s, scalar_grad(-3.0), o, AdamConfig<double>{});
    last = s.users(0, 0) - before;
  }
  EXPECT_NEAR(last, 1e-3, 1e-8);
}

TEST(Adam, NonFiniteGradientThrows) {
  auto s = scalar_state(0.0);
  auto o = OptimizerState<double>::zeros_like(s);
  EXPECT_THROW(adam_step(s, scalar_grad(std::nan("")), o, AdamConfig<double>{}), NumericalError);
}

class Toy : public ::testing::Test {
 protected:
  SyntheticData data = generate_synthetic(testing::toy_spec(3));
  TrainRunConfig config = testing::toy_config(3);
  Dataset dataset = testing::split_for(data, config);
};

TEST_F(Toy, ZeroEpochsChangeNothing) {
  config.epochs_per_iteration = 0;
  TrainingState state = make_training_state(dataset, config);
  const auto before = state.params.users;
  RunLog log;
  train_iteration(dataset, state, config, log);
  EXPECT_EQ(state.params.users, before);
  EXPECT_TRUE(log.steps.empty());
  EXPECT_TRUE(log.epochs.empty());
}

TEST_F(Toy, LossDecreasesOverFirstFiveEpochs) {
  // Reference model settings (d = 512, batch 1024, lr 1e-3) on the toy data.
  config = TrainRunConfig{};
  config.seed = 3;
  config.negatives_per_user = 20;
  config.epochs_per_iteration = 5;
  config.patience = 10;
  TrainingState state = make_training_state(dataset, config);
  RunLog log;
  train_iteration(dataset, state, config, log);
  ASSERT_EQ(log.epochs.size(), 5u);
  for (std::size_t e = 1; e < 5; ++e) EXPECT_LT(log.epochs[e].total, log.epochs[e - 1].total) << e;
}

TEST_F(Toy, RunIsDeterministic) {
  const RunResult a = run(dataset, config);
  const RunResult b = run(dataset, config);
  EXPECT_EQ(a.log.steps, b.log.steps);
  EXPECT_EQ(a.log.epochs, b.log.epochs);
  EXPECT_EQ(a.tensor.slices(), b.tensor.slices());
}

TEST_F(Toy, ParametersStayFinite) {
  const RunResult r = run(dataset, config);
  EXPECT_TRUE(r.final_state.all_finite());
  EXPECT_TRUE(r.log.best.valid);
}

TEST_F(Toy, OneIterationMeansOneEnhancement) {
  config.max_iterations = 1;
  std::size_t events = 0;
  const RunResult r = run(dataset, config, [&](const IterationEvent& e) {
    ++events;
    EXPECT_EQ(e.state.tensor.generation(), 1);
  });
  EXPECT_EQ(events, 1u);
  EXPECT_EQ(r.enhanced.size(), 1u);
}

TEST_F(Toy, WindowHoldsTheLastEnhancedGraphs) {
  config.max_iterations = 4;
  config.epochs_per_iteration = 1;
  config.patience = 10;
  const RunResult r = run(dataset, config);
  ASSERT_EQ(r.enhanced.size(), 4u);
  for (std::size_t t = 0; t < 3; ++t) EXPECT_EQ(r.tensor.slices()[t], r.enhanced[t + 1].slice);
}

TEST_F(Toy, SingleGraphModeUsesOneSlice) {
  config.use_tensor = false;
  const RunResult r = run(dataset, config);
  EXPECT_EQ(r.tensor.tau(), 1u);
}

TEST_F(Toy, NoDenoiseKeepsTheInitialTensor) {
  config.denoise = false;
  const TrainingState initial = make_training_state(dataset, config);
  const RunResult r = run(dataset, config);
  EXPECT_TRUE(r.enhanced.empty());
  EXPECT_EQ(r.tensor.slices(), initial.tensor.slices());
}

TEST_F(Toy, MlpAggregationTrains) {
  config.agg = AggMode::kMlp;
  const RunResult r = run(dataset, config);
  EXPECT_TRUE(r.final_state.all_finite());
  EXPECT_NE(r.final_state.agg.weights, AggParams<double>::identity(config.tau).weights);
}

TEST_F(Toy, SnapshotRoundTrip) {
  const RunResult r = run(dataset, config);
  const auto dir = std::filesystem::temp_directory_path() / "burger_snapshot_test";
  std::filesystem::remove_all(dir);
  write_snapshot(dir, r.log.best);
  const Snapshot back = read_snapshot(dir);
  EXPECT_EQ(back.state.users, r.log.best.state.users);
  EXPECT_EQ(back.interest_users, r.log.best.interest_users);
  EXPECT_EQ(back.social_users, r.log.best.social_users);
  EXPECT_EQ(back.iteration, r.log.best.iteration);
  std::filesystem::remove(dir / "snapshot.txt");
  EXPECT_THROW(read_snapshot(dir), InvalidInput);
  std::filesystem::remove_all(dir);
}

TEST_F(Toy, RobustnessCleanRowHasNoDecrease) {
  config.max_iterations = 1;
  const std::vector<double> ratios{0.0, 0.2};
  const RobustnessTable t = robustness_harness(dataset, ratios, config, false);
  ASSERT_FALSE(t.rows.empty());
  for (const auto& row : t.rows)
    if (row.ratio == 0.0) {
      EXPECT_EQ(row.dec_hr3, 0.0);
      EXPECT_EQ(row.injected, 0u);
    }
}

TEST(TrainerErrors, EmptyTrainingSetThrows) {
  Dataset d = split_dataset(InteractionGraph::from_edges(3, 3, {}), SocialGraph::empty(3), {0.7, 1, false, 0});
  TrainRunConfig c = testing::toy_config(1);
  EXPECT_THROW(run(d, c), EmptyDataset);
}

}  // namespace
}  // namespace burger
