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

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "balance/ddpg/agent.hpp"

namespace balance::ddpg {

struct StepResult {
  Vector observation;
  double reward = 0.0;
  bool terminal = false;   // failure; no bootstrapping past this transition
  bool truncated = false;  // episode ended for another reason
};

/// Episodic task stepped at the policy rate.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual Eigen::Index observation_size() const = 0;
  virtual Vector action_lower() const = 0;
  virtual Vector action_upper() const = 0;
  virtual Vector reset(Rng& rng) = 0;
  virtual StepResult step(const Vector& action) = 0;
};

struct EpisodeLog {
  std::size_t episode = 0;
  std::size_t steps = 0;
  double episode_return = 0.0;
  double critic_loss_mean = 0.0;
  double exploration_scale = 0.0;
};

void write_training_log_header(std::ostream& os);
void write_training_log_row(std::ostream& os, const EpisodeLog& e);

struct TrainingResult {
  std::vector<EpisodeLog> log;
  Agent agent;
  std::size_t episodes_completed = 0;
};

struct TrainingCallbacks {
  /// Called after every episode; returning false stops training early.
  std::function<bool(const EpisodeLog&, const Agent&)> on_episode;
};

/// Linear anneal from 1 at the first episode to final_scale at the last.
double exploration_scale(std::size_t episode, std::size_t episodes, double final_scale);

/// DDPG main loop: noisy action, store, sample, critic step, actor step,
/// soft target update, once per environment step. Updates start once the
/// buffer holds a full minibatch. Throws NonFiniteLossError with context.
TrainingResult train(Environment& env, const Hyperparams& hp, std::uint64_t seed,
                     const TrainingCallbacks& callbacks = {}, std::optional<Agent> initial = std::nullopt);

}  // namespace balance::ddpg
