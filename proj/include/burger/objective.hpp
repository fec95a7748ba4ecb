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

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "burger/error.hpp"
#include "burger/graph.hpp"
#include "burger/propagation.hpp"
#include "burger/random.hpp"

namespace burger {

/// Inner product of two pooled user vectors from the interaction side.
template <typename A, typename B>
typename A::Scalar interest_similarity(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  if (a.size() != b.size())
    throw InvalidInput("objective", "interest_similarity", "dimension mismatch");
  return a.reshaped().dot(b.reshaped());
}

/// Inner product of two aggregated social user vectors.
template <typename A, typename B>
typename A::Scalar social_similarity(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  if (a.size() != b.size())
    throw InvalidInput("objective", "social_similarity", "dimension mismatch");
  return a.reshaped().dot(b.reshaped());
}

/// Preference score of a user for an item.
template <typename A, typename B>
typename A::Scalar predict_score(const Eigen::MatrixBase<A>& user, const Eigen::MatrixBase<B>& item) {
  if (user.size() != item.size())
    throw InvalidInput("objective", "predict_score", "dimension mismatch");
  return user.reshaped().dot(item.reshaped());
}

template <typename Scalar>
Scalar sigmoid(Scalar x) {
  return x >= 0 ? Scalar(1) / (Scalar(1) + std::exp(-x)) : std::exp(x) / (Scalar(1) + std::exp(x));
}

/// ln(sigmoid(x)) without overflow for large |x|.
template <typename Scalar>
Scalar log_sigmoid(Scalar x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

/// (anchor, positive, negative). Items for recommendation triplets, users
/// for social triplets.
struct Triplet {
  int anchor = 0;
  int positive = 0;
  int negative = 0;

  bool operator==(const Triplet&) const = default;
};

struct TripletBatch {
  std::vector<Triplet> items;
  std::vector<Triplet> social;
};

/// Uniform triplet sampler. Item triplets draw the anchor over users with
/// at least one training item and one non-interacted item; social triplets
/// draw over users with a non-empty friend row and at least one non-friend.
class TripletSampler {
 public:
  TripletSampler(const InteractionGraph& train, const SocialGraph& newest_slice);

  TripletBatch sample(std::size_t batch_size, Rng& rng) const;

  std::size_t item_anchor_count() const { return item_anchors_.size(); }
  std::size_t social_anchor_count() const { return social_anchors_.size(); }

 private:
  const InteractionGraph* train_;
  const SocialGraph* slice_;
  std::vector<UserIndex> item_anchors_;
  std::vector<UserIndex> social_anchors_;
};

TripletBatch sample_triplets(const InteractionGraph& train, const SocialGraph& newest_slice,
                             std::size_t batch_size, std::uint64_t seed);

/// Similarities of each triplet's anchor with its positive and negative.
template <typename Scalar>
struct PairSimilarities {
  std::vector<Scalar> positive;
  std::vector<Scalar> negative;
};

template <typename Scalar>
PairSimilarities<Scalar> pair_similarities(const Matrix<Scalar>& embeddings,
                                           const std::vector<Triplet>& triplets) {
  PairSimilarities<Scalar> out;
  out.positive.reserve(triplets.size());
  out.negative.reserve(triplets.size());
  for (const Triplet& t : triplets) {
    out.positive.push_back(embeddings.row(t.anchor).dot(embeddings.row(t.positive)));
    out.negative.push_back(embeddings.row(t.anchor).dot(embeddings.row(t.negative)));
  }
  return out;
}

/// Loss value and its gradient with respect to one embedding matrix.
template <typename Scalar>
struct LossTerm {
  Scalar value = 0;
  Matrix<Scalar> grad;
};

/// Recommendation BPR: value plus gradients on pooled users and items.
template <typename Scalar>
struct RecLossTerm {
  Scalar value = 0;
  Matrix<Scalar> grad_users;
  Matrix<Scalar> grad_items;
};

/// -sum ln sigmoid(rho(u,i+) - rho(u,i-)).
template <typename Scalar>
RecLossTerm<Scalar> bpr_item_loss(const Matrix<Scalar>& users, const Matrix<Scalar>& items,
                                  const std::vector<Triplet>& triplets) {
  RecLossTerm<Scalar> out;
  out.grad_users = Matrix<Scalar>::Zero(users.rows(), users.cols());
  out.grad_items = Matrix<Scalar>::Zero(items.rows(), items.cols());
  for (const Triplet& t : triplets) {
    const auto eu = users.row(t.anchor);
    const auto ep = items.row(t.positive);
    const auto en = items.row(t.negative);
    const Scalar diff = eu.dot(ep) - eu.dot(en);
    out.value -= log_sigmoid(diff);
    // d(-ln sigma(x))/dx = -sigma(-x)
    const Scalar g = -sigmoid(-diff);
    out.grad_users.row(t.anchor) += g * (ep - en);
    out.grad_items.row(t.positive) += g * eu;
    out.grad_items.row(t.negative) -= g * eu;
  }
  return out;
}

/// -sum ln sigmoid(varphi(u,v+) - varphi(u,v-)) over social embeddings.
template <typename Scalar>
LossTerm<Scalar> bpr_social_loss(const Matrix<Scalar>& social_users,
                                 const std::vector<Triplet>& triplets) {
  LossTerm<Scalar> out;
  out.grad = Matrix<Scalar>::Zero(social_users.rows(), social_users.cols());
  for (const Triplet& t : triplets) {
    const auto eu = social_users.row(t.anchor);
    const auto ep = social_users.row(t.positive);
    const auto en = social_users.row(t.negative);
    const Scalar diff = eu.dot(ep) - eu.dot(en);
    out.value -= log_sigmoid(diff);
    const Scalar g = -sigmoid(-diff);
    out.grad.row(t.anchor) += g * (ep - en);
    out.grad.row(t.positive) += g * eu;
    out.grad.row(t.negative) -= g * eu;
  }
  return out;
}

/// Shared body of both coordination losses. `embeddings` is the space being
/// coordinated (differentiable); `coefficients` are similarities from the
/// other space whose sigmoids act as fixed pull/push magnitudes.
///   term = max{0, margin - s(c+) * x+ + s(c-) * x-},  x = anchor . other
/// The hinge at exactly zero contributes no gradient.
template <typename Scalar>
LossTerm<Scalar> coordination_loss(const Matrix<Scalar>& embeddings,
                                   const PairSimilarities<Scalar>& coefficients,
                                   const std::vector<Triplet>& triplets, Scalar margin,
                                   const char* op) {
  if (coefficients.positive.size() != triplets.size() || coefficients.negative.size() != triplets.size())
    throw InvalidInput("objective", op, "coefficient count differs from triplet count");
  LossTerm<Scalar> out;
  out.grad = Matrix<Scalar>::Zero(embeddings.rows(), embeddings.cols());
  for (std::size_t k = 0; k < triplets.size(); ++k) {
    const Triplet& t = triplets[k];
    const auto eu = embeddings.row(t.anchor);
    const auto ep = embeddings.row(t.positive);
    const auto en = embeddings.row(t.negative);
    const Scalar pull = sigmoid(coefficients.positive[k]);
    const Scalar push = sigmoid(coefficients.negative[k]);
    const Scalar hinge = margin - pull * eu.dot(ep) + push * eu.dot(en);
    if (!(hinge > 0)) continue;
    out.value += hinge;
    out.grad.row(t.anchor) += -pull * ep + push * en;
    out.grad.row(t.positive) -= pull * eu;
    out.grad.row(t.negative) += push * eu;
  }
  return out;
}

/// Coordination in the social space: interest similarities (constants)
/// modulate forces on the social embeddings.
template <typename Scalar>
LossTerm<Scalar> bisemantic_omega1(const Matrix<Scalar>& social_users,
                                   const PairSimilarities<Scalar>& interest,
                                   const std::vector<Triplet>& triplets, Scalar c1) {
  return coordination_loss(social_users, interest, triplets, c1, "bisemantic_omega1");
}

/// Coordination in the interaction space: social similarities (constants)
/// modulate forces on the pooled interaction user embeddings.
template <typename Scalar>
LossTerm<Scalar> bisemantic_omega2(const Matrix<Scalar>& interest_users,
                                   const PairSimilarities<Scalar>& social,
                                   const std::vector<Triplet>& triplets, Scalar c2) {
  return coordination_loss(interest_users, social, triplets, c2, "bisemantic_omega2");
}

template <typename Scalar>
struct LossWeights {
  Scalar lambda1 = 0;
  Scalar lambda2 = 0;
  Scalar alpha = 0;
  Scalar beta = 0;
  Scalar c1 = 1;
  Scalar c2 = 1;
};

/// Component values, the weighted total, and gradients on every input of
/// the objective. `grad_*` gradients target the pooled matrices; the
/// regularizer gradient targets the layer-0 embeddings.
template <typename Scalar>
struct LossReport {
  Scalar rec = 0;
  Scalar soc = 0;
  Scalar omega1 = 0;
  Scalar omega2 = 0;
  Scalar l2 = 0;
  Scalar total = 0;

  Matrix<Scalar> grad_interest_users;
  Matrix<Scalar> grad_items;
  Matrix<Scalar> grad_social_users;
  Matrix<Scalar> grad_base_users;
  Matrix<Scalar> grad_base_items;
};

/// Bit flags selecting which objective terms exist at compile time.
enum ObjectiveTerm : unsigned {
  kTermRec = 1u << 0,
  kTermSocial = 1u << 1,
  kTermOmega1 = 1u << 2,
  kTermOmega2 = 1u << 3,
  kAllTerms = kTermRec | kTermSocial | kTermOmega1 | kTermOmega2,
};

/// Weighted sum L_rec + l1 L_soc + a L_O1 + b L_O2 + l2 (|E_U|^2 + |E_I|^2).
/// Terms with a zero weight are reported but contribute neither value nor
/// gradient; terms absent from `Terms` are not evaluated at all.
template <typename Scalar>
LossReport<Scalar> total_loss(const RecLossTerm<Scalar>& rec, const LossTerm<Scalar>* soc,
                              const LossTerm<Scalar>* omega1, const LossTerm<Scalar>* omega2,
                              const LossWeights<Scalar>& w, const Matrix<Scalar>& base_users,
                              const Matrix<Scalar>& base_items) {
  if (w.lambda1 < 0 || w.lambda2 < 0 || w.alpha < 0 || w.beta < 0)
    throw InvalidConfiguration("objective", "total_loss", "loss weights must be >= 0");
  LossReport<Scalar> r;
  r.rec = rec.value;
  r.total = rec.value;
  r.grad_interest_users = rec.grad_users;
  r.grad_items = rec.grad_items;
  r.grad_social_users = Matrix<Scalar>::Zero(base_users.rows(), base_users.cols());
  if (soc) {
    r.soc = soc->value;
    if (w.lambda1 != 0) {
      r.total += w.lambda1 * soc->value;
      r.grad_social_users += w.lambda1 * soc->grad;
    }
  }
  if (omega1) {
    r.omega1 = omega1->value;
    if (w.alpha != 0) {
      r.total += w.alpha * omega1->value;
      r.grad_social_users += w.alpha * omega1->grad;
    }
  }
  if (omega2) {
    r.omega2 = omega2->value;
    if (w.beta != 0) {
      r.total += w.beta * omega2->value;
      r.grad_interest_users += w.beta * omega2->grad;
    }
  }
  r.l2 = base_users.squaredNorm() + base_items.squaredNorm();
  if (w.lambda2 != 0) {
    r.total += w.lambda2 * r.l2;
    r.grad_base_users = (Scalar(2) * w.lambda2) * base_users;
    r.grad_base_items = (Scalar(2) * w.lambda2) * base_items;
  } else {
    r.grad_base_users = Matrix<Scalar>::Zero(base_users.rows(), base_users.cols());
    r.grad_base_items = Matrix<Scalar>::Zero(base_items.rows(), base_items.cols());
  }
  return r;
}

/// Everything the objective reads for one step.
template <typename Scalar>
struct ObjectiveInputs {
  const Matrix<Scalar>& interest_users;  // pooled user-item side
  const Matrix<Scalar>& items;           // pooled items
  const Matrix<Scalar>& social_users;    // aggregated social side
  const Matrix<Scalar>& base_users;
  const Matrix<Scalar>& base_items;
};

/// Evaluates the full objective on one batch. Similarities used as
/// coordination coefficients are computed here from the current pooled
/// matrices and held constant.
template <unsigned Terms = kAllTerms, typename Scalar>
LossReport<Scalar> evaluate_objective(const ObjectiveInputs<Scalar>& in, const TripletBatch& batch,
                                      const LossWeights<Scalar>& w) {
  static_assert(Terms & kTermRec, "the recommendation loss cannot be removed");
  const RecLossTerm<Scalar> rec = bpr_item_loss(in.interest_users, in.items, batch.items);

  LossTerm<Scalar> soc, om1, om2;
  const LossTerm<Scalar>* soc_ptr = nullptr;
  const LossTerm<Scalar>* om1_ptr = nullptr;
  const LossTerm<Scalar>* om2_ptr = nullptr;
  if constexpr ((Terms & kTermSocial) != 0) {
    soc = bpr_social_loss(in.social_users, batch.social);
    soc_ptr = &soc;
  }
  if constexpr ((Terms & (kTermOmega1 | kTermOmega2)) != 0) {
    const auto interest = pair_similarities(in.interest_users, batch.social);
    const auto social = pair_similarities(in.social_users, batch.social);
    if constexpr ((Terms & kTermOmega1) != 0) {
      om1 = bisemantic_omega1(in.social_users, interest, batch.social, w.c1);
      om1_ptr = &om1;
    }
    if constexpr ((Terms & kTermOmega2) != 0) {
      om2 = bisemantic_omega2(in.interest_users, social, batch.social, w.c2);
      om2_ptr = &om2;
    }
  }
  return total_loss(rec, soc_ptr, om1_ptr, om2_ptr, w, in.base_users, in.base_items);
}

}  // namespace burger
