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

#include "balance/ddpg/agent.hpp"

#include <cmath>

namespace balance::ddpg {

void Hyperparams::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be in (0, 1)");
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("tau must be in (0, 1]");
  if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  if (buffer_capacity < batch_size) throw std::invalid_argument("buffer capacity below batch size");
  if (!(actor_lr > 0.0) || !(critic_lr > 0.0)) throw std::invalid_argument("learning rates must be positive");
  if (!(noise_decay > 0.0 && noise_decay <= 1.0)) throw std::invalid_argument("noise decay must be in (0, 1]");
  if (noise_sigma < 0.0 || noise_final_scale < 0.0) throw std::invalid_argument("noise scales must be >= 0");
  if (max_steps < 1 || episodes < 1 || hidden < 1) throw std::invalid_argument("sizes must be >= 1");
}

double invert_gradient(double grad, double p, double p_min, double p_max) {
  if (!(p_max > p_min)) throw std::invalid_argument("invert_gradient: p_max must exceed p_min");
  const double range = p_max - p_min;
  return grad >= 0.0 ? grad * (p_max - p) / range : grad * (p - p_min) / range;
}

Matrix invert_gradients(const Matrix& grad, const Matrix& p, const Vector& p_min, const Vector& p_max) {
  Matrix out(grad.rows(), grad.cols());
  for (Eigen::Index j = 0; j < grad.cols(); ++j) {
    for (Eigen::Index i = 0; i < grad.rows(); ++i) {
      out(i, j) = invert_gradient(grad(i, j), p(i, j), p_min[i], p_max[i]);
    }
  }
  return out;
}

Agent::Agent(Eigen::Index obs_size, Vector lower, Vector upper, Hyperparams hp, std::uint64_t seed)
    : lower_(std::move(lower)), upper_(std::move(upper)), hp_(hp) {
  hp_.validate();
  const auto act = lower_.size();
  const auto hidden = static_cast<Eigen::Index>(hp_.hidden);
  Rng rng(seed);
  params_.actor = Actor(obs_size, act, hidden);
  params_.critic = Critic(obs_size, act, hidden);
  params_.actor.initialize(rng, hp_.final_layer_init);
  params_.critic.initialize(rng, hp_.final_layer_init);
  params_.actor_target = params_.actor;
  params_.critic_target = params_.critic;
  actor_opt_ = Optimizer(hp_.optimizer, hp_.actor_lr, params_.actor.layers());
  critic_opt_ = Optimizer(hp_.optimizer, hp_.critic_lr, params_.critic.layers());
}

Agent::Agent(ActorCriticParams params, Vector lower, Vector upper, Hyperparams hp)
    : params_(std::move(params)), lower_(std::move(lower)), upper_(std::move(upper)), hp_(hp) {
  hp_.validate();
  actor_opt_ = Optimizer(hp_.optimizer, hp_.actor_lr, params_.actor.layers());
  critic_opt_ = Optimizer(hp_.optimizer, hp_.critic_lr, params_.critic.layers());
}

Vector Agent::act_raw(const Vector& obs) const { return params_.actor.forward(obs); }

Vector Agent::act(const Vector& obs) const { return act_raw(obs).cwiseMax(lower_).cwiseMin(upper_); }

double Agent::q_value(const Vector& obs, const Vector& action) const {
  return params_.critic.forward(obs, action)(0, 0);
}

Matrix Agent::td_targets(const Batch& b) const {
  const Matrix next_action =
      params_.actor_target.forward(b.next_states).cwiseMax(lower_.replicate(1, b.size()))
          .cwiseMin(upper_.replicate(1, b.size()));
  const Matrix next_q = params_.critic_target.forward(b.next_states, next_action);
  Matrix y(1, b.size());
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    y(0, i) = b.terminal[i] > 0.5 ? b.rewards[i] : b.rewards[i] + hp_.gamma * next_q(0, i);
  }
  return y;
}

double Agent::critic_loss_gradient(const Batch& b, LayerStack& grads) const {
  const Matrix y = td_targets(b);
  Critic::Cache cache;
  const Matrix q = params_.critic.forward(b.states, b.actions, cache);
  const Matrix err = q - y;
  const double n = static_cast<double>(b.size());
  const double loss = err.squaredNorm() / n;
  grads = zeros_like(params_.critic.layers());
  params_.critic.backward(cache, (2.0 / n) * err, grads);
  return loss;
}

double Agent::critic_update(const Batch& b) {
  LayerStack grads;
  const double loss = critic_loss_gradient(b, grads);
  if (!std::isfinite(loss)) throw NonFiniteLossError("critic loss is not finite");
  critic_opt_.step(params_.critic.layers(), grads);
  return loss;
}

double Agent::actor_objective_gradient(const Matrix& states, LayerStack& grads, bool invert) const {
  Actor::Cache acache;
  const Matrix action = params_.actor.forward(states, acache);
  Critic::Cache ccache;
  const Matrix q = params_.critic.forward(states, action, ccache);
  const double n = static_cast<double>(states.cols());

  LayerStack scratch = zeros_like(params_.critic.layers());
  const Matrix ones = Matrix::Constant(1, states.cols(), 1.0 / n);
  Matrix d_action = params_.critic.backward(ccache, ones, scratch);
  if (invert) {
    // Inversion acts on the per-sample gradient; the 1/n factor is positive
    // and commutes with it.
    d_action = invert_gradients(d_action, action, lower_, upper_);
  }
  grads = zeros_like(params_.actor.layers());
  params_.actor.backward(acache, d_action, grads);
  return q.sum() / n;
}

void Agent::actor_update(const Batch& b) {
  LayerStack ascent;
  const double objective = actor_objective_gradient(b.states, ascent, hp_.invert_gradients);
  if (!std::isfinite(objective)) throw NonFiniteLossError("actor objective is not finite");
  // The optimizer minimizes, so hand it the negated ascent direction.
  for (auto& l : ascent) {
    l.weights = -l.weights;
    l.bias = -l.bias;
  }
  actor_opt_.step(params_.actor.layers(), ascent);
}

void Agent::soft_update_targets() {
  soft_update(params_.actor_target.layers(), params_.actor.layers(), hp_.tau);
  soft_update(params_.critic_target.layers(), params_.critic.layers(), hp_.tau);
}

}  // namespace balance::ddpg
