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
#include <stdexcept>
#include <string>

#include "balance/ddpg/network.hpp"
#include "balance/ddpg/replay_buffer.hpp"

namespace balance::ddpg {

struct Hyperparams {
  double gamma = 0.99;
  double tau = 0.001;
  std::size_t batch_size = 64;
  std::size_t buffer_capacity = 1000000;
  double actor_lr = 1e-4;
  double critic_lr = 1e-3;
  OptimizerKind optimizer = OptimizerKind::Sgd;
  double noise_decay = 0.15;        // OU mean reversion per policy step
  double noise_sigma = 0.2;         // fraction of each action's half range
  double noise_final_scale = 0.2;   // exploration scale reached at the last episode
  std::size_t max_steps = 750;      // policy steps per episode
  std::size_t episodes = 2000;
  std::size_t hidden = 100;
  double final_layer_init = 3e-3;
  bool invert_gradients = true;

  void validate() const;
};

class NonFiniteLossError : public std::runtime_error {
 public:
  explicit NonFiniteLossError(const std::string& what) : std::runtime_error(what) {}
};

/// Inverting gradients: scales an ascent gradient on a bounded
/// output by its remaining headroom towards the bound it moves to.
///   grad >= 0: grad * (p_max - p) / (p_max - p_min)
///   grad <  0: grad * (p - p_min) / (p_max - p_min)
/// The factor turns negative once p is past the bound.
double invert_gradient(double grad, double p, double p_min, double p_max);
Matrix invert_gradients(const Matrix& grad, const Matrix& p, const Vector& p_min, const Vector& p_max);

/// Actor, critic and their target copies.
struct ActorCriticParams {
  Actor actor, actor_target;
  Critic critic, critic_target;
};

class Agent {
 public:
  Agent(Eigen::Index obs_size, Vector action_lower, Vector action_upper, Hyperparams hp, std::uint64_t seed);
  Agent(ActorCriticParams params, Vector action_lower, Vector action_upper, Hyperparams hp);

  /// Deterministic policy output clamped to the action bounds.
  Vector act(const Vector& obs) const;
  /// Unclamped actor output.
  Vector act_raw(const Vector& obs) const;
  double q_value(const Vector& obs, const Vector& action) const;

  /// Mean squared TD error and its gradient w.r.t. the critic parameters.
  double critic_loss_gradient(const Batch& batch, LayerStack& grads) const;
  /// One gradient step on the critic; returns the pre-step loss.
  double critic_update(const Batch& batch);

  /// Mean Q(s, mu(s)) over the batch and its ascent gradient w.r.t. the
  /// actor parameters. With `invert` the action gradient is passed through
  /// invert_gradients first.
  double actor_objective_gradient(const Matrix& states, LayerStack& grads, bool invert) const;
  void actor_update(const Batch& batch);

  void soft_update_targets();

  const ActorCriticParams& params() const { return params_; }
  ActorCriticParams& params() { return params_; }
  const Hyperparams& hyperparams() const { return hp_; }
  const Vector& action_lower() const { return lower_; }
  const Vector& action_upper() const { return upper_; }

 private:
  Matrix td_targets(const Batch& batch) const;

  ActorCriticParams params_;
  Vector lower_, upper_;
  Hyperparams hp_;
  Optimizer actor_opt_, critic_opt_;
};

}  // namespace balance::ddpg
