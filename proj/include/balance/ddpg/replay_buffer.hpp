// Copyright 2026 The Balance Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <vector>

#include "balance/ddpg/network.hpp"

namespace balance::ddpg {

struct Transition {
  Vector state;
  Vector action;
  double reward = 0.0;
  Vector next_state;
  bool terminal = false;
};

/// Column-stacked minibatch.
struct Batch {
  Matrix states;       // obs x N
  Matrix actions;      // act x N
  Vector rewards;      // N
  Matrix next_states;  // obs x N
  Vector terminal;     // N, 1.0 where the episode ended in failure

  Eigen::Index size() const { return states.cols(); }
};

Batch make_batch(const std::vector<Transition>& transitions);

/// Fixed-capacity FIFO of transitions.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void add(Transition t);
  /// Uniform sample of n distinct transitions (n <= size()).
  Batch sample(std::size_t n, Rng& rng) const;

  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::size_t insertions() const { return insertions_; }
  /// i = 0 is the oldest stored transition.
  const Transition& at(std::size_t i) const;

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;  // next slot to overwrite once full
  std::size_t insertions_ = 0;
  std::vector<Transition> data_;
};

}  // namespace balance::ddpg
