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

#include "burger/objective.hpp"

#include <algorithm>

namespace burger {

TripletSampler::TripletSampler(const InteractionGraph& train, const SocialGraph& newest_slice)
    : train_(&train), slice_(&newest_slice) {
  if (newest_slice.num_users() != train.num_users())
    throw InvalidInput("objective", "sample_triplets", "slice and interaction user counts differ");
  const auto n = static_cast<std::size_t>(train.num_items());
  const auto m = static_cast<std::size_t>(train.num_users());
  for (UserIndex u = 0; u < train.num_users(); ++u) {
    const std::size_t deg = train.user_degree(u);
    if (deg > 0 && deg < n) item_anchors_.push_back(u);
    const std::size_t friends = newest_slice.degree(u);
    if (friends > 0 && friends + 1 < m) social_anchors_.push_back(u);
  }
  if (item_anchors_.empty())
    throw EmptyDataset("objective", "sample_triplets", "no user has trainable interactions");
}

TripletBatch TripletSampler::sample(std::size_t batch_size, Rng& rng) const {
  if (batch_size == 0) throw InvalidConfiguration("objective", "sample_triplets", "batch size must be >= 1");
  TripletBatch batch;
  batch.items.reserve(batch_size);
  const int n = train_->num_items();
  for (std::size_t k = 0; k < batch_size; ++k) {
    const UserIndex u = item_anchors_[uniform_index(rng, item_anchors_.size())];
    const auto items = train_->items_of(u);
    const ItemIndex pos = items[uniform_index(rng, items.size())];
    ItemIndex neg;
    do {
      neg = uniform_index(rng, n);
    } while (std::binary_search(items.begin(), items.end(), neg));
    batch.items.push_back({u, pos, neg});
  }

  if (social_anchors_.empty()) return batch;
  batch.social.reserve(batch_size);
  const int m = slice_->num_users();
  for (std::size_t k = 0; k < batch_size; ++k) {
    const UserIndex u = social_anchors_[uniform_index(rng, social_anchors_.size())];
    const auto friends = slice_->neighbors(u);
    const UserIndex pos = friends[uniform_index(rng, friends.size())];
    UserIndex neg;
    do {
      neg = uniform_index(rng, m);
    } while (neg == u || std::binary_search(friends.begin(), friends.end(), neg));
    batch.social.push_back({u, pos, neg});
  }
  return batch;
}

TripletBatch sample_triplets(const InteractionGraph& train, const SocialGraph& newest_slice,
                             std::size_t batch_size, std::uint64_t seed) {
  Rng rng(seed);
  return TripletSampler(train, newest_slice).sample(batch_size, rng);
}

}  // namespace burger
