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

#include "balance/ddpg/replay_buffer.hpp"

#include <algorithm>
#include <stdexcept>

namespace balance::ddpg {

Batch make_batch(const std::vector<Transition>& ts) {
  if (ts.empty()) throw std::invalid_argument("empty batch");
  const auto n = static_cast<Eigen::Index>(ts.size());
  Batch b;
  b.states.resize(ts[0].state.size(), n);
  b.actions.resize(ts[0].action.size(), n);
  b.rewards.resize(n);
  b.next_states.resize(ts[0].next_state.size(), n);
  b.terminal.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& t = ts[static_cast<std::size_t>(i)];
    b.states.col(i) = t.state;
    b.actions.col(i) = t.action;
    b.rewards[i] = t.reward;
    b.next_states.col(i) = t.next_state;
    b.terminal[i] = t.terminal ? 1.0 : 0.0;
  }
  return b;
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay capacity must be positive");
}

void ReplayBuffer::add(Transition t) {
  if (data_.size() < capacity_) {
    data_.push_back(std::move(t));
  } else {
    data_[head_] = std::move(t);
    head_ = (head_ + 1) % capacity_;
  }
  ++insertions_;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= data_.size()) throw std::out_of_range("replay index");
  return data_[(head_ + i) % data_.size()];
}

Batch ReplayBuffer::sample(std::size_t n, Rng& rng) const {
  if (n == 0 || n > data_.size()) throw std::invalid_argument("cannot sample that many transitions");
  // Floyd's algorithm: n distinct indices in O(n^2) for small n.
  std::vector<std::size_t> picked;
  picked.reserve(n);
  for (std::size_t j = data_.size() - n; j < data_.size(); ++j) {
    std::uniform_int_distribution<std::size_t> u(0, j);
    const std::size_t t = u(rng);
    if (std::find(picked.begin(), picked.end(), t) == picked.end()) {
      picked.push_back(t);
    } else {
      picked.push_back(j);
    }
  }
  const auto& first = data_[picked[0]];
  Batch b;
  const auto m = static_cast<Eigen::Index>(n);
  b.states.resize(first.state.size(), m);
  b.actions.resize(first.action.size(), m);
  b.rewards.resize(m);
  b.next_states.resize(first.next_state.size(), m);
  b.terminal.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& t = data_[picked[static_cast<std::size_t>(i)]];
    b.states.col(i) = t.state;
    b.actions.col(i) = t.action;
    b.rewards[i] = t.reward;
    b.next_states.col(i) = t.next_state;
    b.terminal[i] = t.terminal ? 1.0 : 0.0;
  }
  return b;
}

}  // namespace balance::ddpg
