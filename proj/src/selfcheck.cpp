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

#include "burger/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "burger/graph.hpp"
#include "burger/objective.hpp"
#include "burger/propagation.hpp"
#include "burger/random.hpp"
#include "burger/trainer.hpp"

namespace burger {
namespace {

using Mat = Matrix<double>;

constexpr double kKinkMargin = 0.05;
constexpr std::size_t kTriplets = 6;

Mat random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, double std_dev) {
  std::normal_distribution<double> normal(0.0, std_dev);
  Mat m(rows, cols);
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = normal(rng);
  return m;
}

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

struct Instance {
  int layers = 1;
  InteractionGraph interactions;
  std::vector<NormalizedAdjacency<double>> slices;
  NormalizedAdjacency<double> adjacency;
  EmbeddingState<double> params;
  Mat other_users;  // independent user matrix for the standalone losses
  Mat base_users, base_items;
  TripletBatch batch;
  LossWeights<double> weights;
};

std::vector<Triplet> distinct_triplets(int anchors, int targets, bool same_space, Rng& rng) {
  std::vector<Triplet> out;
  while (out.size() < kTriplets) {
    Triplet t{uniform_int(rng, 0, anchors - 1), uniform_int(rng, 0, targets - 1),
              uniform_int(rng, 0, targets - 1)};
    if (t.positive == t.negative) continue;
    if (same_space && (t.anchor == t.positive || t.anchor == t.negative)) continue;
    out.push_back(t);
  }
  return out;
}

Instance draw_instance(Rng& rng) {
  Instance in;
  const int m = uniform_int(rng, 4, 10);
  const int n = uniform_int(rng, 3, 10);
  const int d = uniform_int(rng, 1, 4);
  in.layers = uniform_int(rng, 1, 3);
  std::bernoulli_distribution coin(0.4);

  std::vector<Edge> ui;
  for (int u = 0; u < m; ++u)
    for (int i = 0; i < n; ++i)
      if (coin(rng)) ui.push_back({u, i});
  in.interactions = InteractionGraph::from_edges(m, n, ui);

  std::vector<Edge> uu;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      if (coin(rng)) uu.push_back({a, b});
  const SocialGraph undirected = SocialGraph::undirected(m, uu);
  std::vector<std::vector<UserIndex>> rows(m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      if (a != b && coin(rng)) rows[a].push_back(b);
  const SocialGraph directed = SocialGraph::directed(m, rows);
  const SocialGraph perturbed = random_perturb(undirected, 0.2, rng());

  in.adjacency = symmetric_normalize<double>(in.interactions);
  for (const SocialGraph* g : {&perturbed, &directed, &undirected})
    in.slices.push_back(symmetric_normalize<double>(*g));

  in.params.users = random_matrix(m, d, rng, 0.7);
  in.params.items = random_matrix(n, d, rng, 0.7);
  in.params.agg.weights.resize(3);
  std::uniform_real_distribution<double> w(0.2, 0.9);
  for (int t = 0; t < 3; ++t) in.params.agg.weights(t) = w(rng);
  in.params.agg.bias = std::uniform_real_distribution<double>(-0.3, 0.3)(rng);
  in.other_users = random_matrix(m, d, rng, 0.7);
  in.base_users = random_matrix(m, d, rng, 0.7);
  in.base_items = random_matrix(n, d, rng, 0.7);

  in.batch.items = distinct_triplets(m, n, false, rng);
  in.batch.social = distinct_triplets(m, m, true, rng);
  in.weights = {0.7, 0.05, 0.6, 0.4, 1.0, 0.8};
  return in;
}

/// True when some hinge argument of the coordination loss over `space`
/// with coefficients taken from `other` lies within the kink margin.
bool near_kink(const Mat& space, const Mat& other, const std::vector<Triplet>& triplets,
               double margin) {
  for (const Triplet& t : triplets) {
    const double pull = sigmoid(other.row(t.anchor).dot(other.row(t.positive)));
    const double push = sigmoid(other.row(t.anchor).dot(other.row(t.negative)));
    const double arg = margin - pull * space.row(t.anchor).dot(space.row(t.positive)) +
                       push * space.row(t.anchor).dot(space.row(t.negative));
    if (std::abs(arg) < kKinkMargin) return true;
  }
  return false;
}

bool any_near_kink(const Mat& interest, const Mat& social, const Instance& in) {
  return near_kink(social, interest, in.batch.social, in.weights.c1) ||
         near_kink(interest, social, in.batch.social, in.weights.c2);
}

class Checker {
 public:
  explicit Checker(const GradientCheckOptions& options) : options_(options) {}

  /// Five-point central differences of `f` in every entry of `x`.
  void compare(const std::string& name, double* x, const double* analytic, Eigen::Index size,
               const std::function<double()>& f) {
    GradientCheck& c = slot(name);
    const double h = options_.step;
    for (Eigen::Index k = 0; k < size; ++k) {
      const double orig = x[k];
      auto at = [&](double offset) {
        x[k] = orig + offset;
        return f();
      };
      const double numeric = (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
      x[k] = orig;
      c.max_relative_error = std::max(c.max_relative_error, relative_error(analytic[k], numeric));
      ++c.entries;
    }
  }

  void compare(const std::string& name, Mat& x, const Mat& analytic, const std::function<double()>& f) {
    compare(name, x.data(), analytic.data(), x.size(), f);
  }

  std::vector<GradientCheck> finish() {
    for (auto& c : checks_) c.pass = c.entries > 0 && c.max_relative_error < options_.tolerance;
    return checks_;
  }

 private:
  GradientCheck& slot(const std::string& name) {
    for (auto& c : checks_)
      if (c.name == name) return c;
    checks_.push_back({name, 0.0, 0, false});
    return checks_.back();
  }

  GradientCheckOptions options_;
  std::vector<GradientCheck> checks_;
};

double frozen_total(const Mat& interest, const Mat& items, const Mat& social, const Mat& base_users,
                    const Mat& base_items, const PairSimilarities<double>& interest_coeff,
                    const PairSimilarities<double>& social_coeff, const Instance& in) {
  const auto rec = bpr_item_loss(interest, items, in.batch.items);
  const auto soc = bpr_social_loss(social, in.batch.social);
  const auto om1 = bisemantic_omega1(social, interest_coeff, in.batch.social, in.weights.c1);
  const auto om2 = bisemantic_omega2(interest, social_coeff, in.batch.social, in.weights.c2);
  return total_loss(rec, &soc, &om1, &om2, in.weights, base_users, base_items).total;
}

void check_losses(Instance& in, Checker& checker) {
  Mat& users = in.params.users;
  Mat& items = in.params.items;
  {
    const auto rec = bpr_item_loss(users, items, in.batch.items);
    auto f = [&] { return bpr_item_loss(users, items, in.batch.items).value; };
    checker.compare("bpr_item_loss", users, rec.grad_users, f);
    checker.compare("bpr_item_loss", items, rec.grad_items, f);
  }
  {
    const auto soc = bpr_social_loss(users, in.batch.social);
    checker.compare("bpr_social_loss", users, soc.grad,
                    [&] { return bpr_social_loss(users, in.batch.social).value; });
  }
  Mat& social = users;
  Mat& interest = in.other_users;
  const auto interest_coeff = pair_similarities(interest, in.batch.social);
  const auto social_coeff = pair_similarities(social, in.batch.social);
  {
    const auto om1 = bisemantic_omega1(social, interest_coeff, in.batch.social, in.weights.c1);
    checker.compare("bisemantic_omega1", social, om1.grad, [&] {
      return bisemantic_omega1(social, interest_coeff, in.batch.social, in.weights.c1).value;
    });
    const auto om2 = bisemantic_omega2(interest, social_coeff, in.batch.social, in.weights.c2);
    checker.compare("bisemantic_omega2", interest, om2.grad, [&] {
      return bisemantic_omega2(interest, social_coeff, in.batch.social, in.weights.c2).value;
    });
  }
  {
    const ObjectiveInputs<double> inputs{interest, items, social, in.base_users, in.base_items};
    const LossReport<double> r = evaluate_objective<kAllTerms>(inputs, in.batch, in.weights);
    auto f = [&] {
      return frozen_total(interest, items, social, in.base_users, in.base_items, interest_coeff,
                          social_coeff, in);
    };
    checker.compare("total_loss", interest, r.grad_interest_users, f);
    checker.compare("total_loss", items, r.grad_items, f);
    checker.compare("total_loss", social, r.grad_social_users, f);
    checker.compare("total_loss", in.base_users, r.grad_base_users, f);
    checker.compare("total_loss", in.base_items, r.grad_base_items, f);
  }
}

void check_propagation(Instance& in, Checker& checker, Rng& rng) {
  Mat& users = in.params.users;
  Mat& items = in.params.items;
  {
    const Mat gu = random_matrix(users.rows(), users.cols(), rng, 1.0);
    const Mat gi = random_matrix(items.rows(), items.cols(), rng, 1.0);
    const auto [du, di] = propagate_user_item_backward(in.adjacency, in.layers, gu, gi);
    auto f = [&] {
      const auto out = propagate_user_item(in.adjacency, users, items, in.layers);
      return gu.cwiseProduct(out.pooled_users).sum() + gi.cwiseProduct(out.pooled_items).sum();
    };
    checker.compare("user_item_backward", users, du, f);
    checker.compare("user_item_backward", items, di, f);
  }
  for (AggMode mode : {AggMode::kMean, AggMode::kMlp}) {
    const std::string name = mode == AggMode::kMean ? "social_backward_mean" : "social_backward_mlp";
    const Mat g = random_matrix(users.rows(), users.cols(), rng, 1.0);
    auto& agg = in.params.agg;
    const auto fw = propagate_social_tensor<double>(in.slices, users, in.layers, mode, agg);
    const auto grads = propagate_social_backward<double>(in.slices, in.layers, fw, g);
    auto f = [&] {
      return g.cwiseProduct(
                  propagate_social_tensor<double>(in.slices, users, in.layers, mode, agg).aggregated)
          .sum();
    };
    checker.compare(name, users, grads.users, f);
    if (mode == AggMode::kMlp) {
      checker.compare(name, agg.weights.data(), grads.agg.weights.data(), agg.weights.size(), f);
      checker.compare(name, &agg.bias, &grads.agg.bias, 1, f);
    }
  }
}

void check_end_to_end(Instance& in, Checker& checker) {
  auto& p = in.params;
  const auto [report, grads] = objective_and_gradients<kAllTerms>(
      p, in.adjacency, in.slices, in.layers, AggMode::kMlp, in.batch, in.weights);
  const auto base_interest = propagate_user_item(in.adjacency, p.users, p.items, in.layers);
  const auto base_social =
      propagate_social_tensor<double>(in.slices, p.users, in.layers, AggMode::kMlp, p.agg);
  const auto interest_coeff = pair_similarities(base_interest.pooled_users, in.batch.social);
  const auto social_coeff = pair_similarities(base_social.aggregated, in.batch.social);
  auto f = [&] {
    const auto interest = propagate_user_item(in.adjacency, p.users, p.items, in.layers);
    const auto social =
        propagate_social_tensor<double>(in.slices, p.users, in.layers, AggMode::kMlp, p.agg);
    return frozen_total(interest.pooled_users, interest.pooled_items, social.aggregated, p.users,
                        p.items, interest_coeff, social_coeff, in);
  };
  checker.compare("end_to_end", p.users, grads.users, f);
  checker.compare("end_to_end", p.items, grads.items, f);
  checker.compare("end_to_end", p.agg.weights.data(), grads.agg.weights.data(), p.agg.weights.size(), f);
  checker.compare("end_to_end", &p.agg.bias, &grads.agg.bias, 1, f);
}

}  // namespace

double relative_error(double analytic, double numeric) {
  const double scale = std::max(std::abs(analytic), std::abs(numeric));
  if (scale < 1e-9) return 0.0;
  return std::abs(analytic - numeric) / scale;
}

std::vector<GradientCheck> run_gradient_checks(const GradientCheckOptions& options) {
  Rng rng(options.seed);
  Checker checker(options);
  std::size_t done = 0;
  while (done < options.instances) {
    Instance in = draw_instance(rng);
    if (any_near_kink(in.other_users, in.params.users, in)) continue;
    const auto interest =
        propagate_user_item(in.adjacency, in.params.users, in.params.items, in.layers).pooled_users;
    const auto social = propagate_social_tensor<double>(in.slices, in.params.users, in.layers,
                                                        AggMode::kMlp, in.params.agg)
                            .aggregated;
    if (any_near_kink(interest, social, in)) continue;
    check_losses(in, checker);
    check_propagation(in, checker, rng);
    check_end_to_end(in, checker);
    ++done;
  }
  return checker.finish();
}

std::vector<OrderStatisticReport> run_order_statistic_checks(std::size_t samples, std::uint64_t seed) {
  return {order_statistic_check(samples, uniform_distribution(), derive_seed(seed, 0)),
          order_statistic_check(samples, standard_normal_distribution(), derive_seed(seed, 1))};
}

}  // namespace burger
