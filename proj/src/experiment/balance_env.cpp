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

#include "balance/experiment/balance_env.hpp"

#include <cmath>
#include <random>

namespace balance::experiment {

JointVector joint_lower(const BipedModel& model) {
  JointVector v;
  for (std::size_t j = 0; j < kNumJoints; ++j) v[static_cast<Eigen::Index>(j)] = model.joints[j].lower;
  return v;
}

JointVector joint_upper(const BipedModel& model) {
  JointVector v;
  for (std::size_t j = 0; j < kNumJoints; ++j) v[static_cast<Eigen::Index>(j)] = model.joints[j].upper;
  return v;
}

RewardBreakdown state_reward(const ExperimentConfig& cfg, const BipedState& state) {
  const BodyKinematics kin = link_kinematics(cfg.model, state);
  const ComState com = com_state(cfg.model, state);
  RewardConfig rc = cfg.reward;
  rc.com_x_target = 0.5 * (sole_point(cfg.model, state, Pivot::Heel).x() + sole_point(cfg.model, state, Pivot::Toe).x());
  RewardInputs in;
  in.torso_pitch = kin[index(Link::Torso)].angle;
  in.pelvis_pitch = kin[index(Link::Pelvis)].angle;
  in.com_x = com.x;
  in.com_z = com.z;
  in.com_xd = com.xd;
  in.com_zd = com.zd;
  return compute_reward(rc, in);
}

bool has_fallen(const ExperimentConfig& cfg, const BipedState& state) {
  const BodyKinematics kin = link_kinematics(cfg.model, state);
  return kin[index(Link::Pelvis)].com.y() < cfg.fall_pelvis_height ||
         std::abs(kin[index(Link::Torso)].angle) > cfg.fall_torso_pitch;
}

BipedState settled_state(const ExperimentConfig& cfg) {
  Simulation sim{cfg.model, nominal_state(cfg.model), std::nullopt, cfg.schedule.physics_dt()};
  LowLevelController llc(cfg.model, cfg.gains, cfg.schedule);
  const int steps = static_cast<int>(std::lround(cfg.settle_time * cfg.schedule.physics_hz));
  run_llc_window(sim, llc, JointVector::Zero(), steps);
  BipedState s = sim.state;
  s.time = 0.0;
  return s;
}

BipedRig::BipedRig(const ExperimentConfig& cfg)
    : sim_{cfg.model, nominal_state(cfg.model), std::nullopt, cfg.schedule.physics_dt()},
      llc_(cfg.model, cfg.gains, cfg.schedule),
      filters_(cfg.observation_cutoff_hz, cfg.schedule.hlc_hz),
      steps_per_action_(cfg.schedule.physics_steps_per_action()) {}

Observation BipedRig::reset(const BipedState& state) {
  sim_.state = state;
  llc_.reset();
  filters_.reset();
  obs_ = observe(sim_.model, sim_.state, filters_);
  return obs_;
}

Observation BipedRig::hlc_step(const JointVector& target, const PhysicsObserver& observer) {
  run_llc_window(sim_, llc_, target, steps_per_action_, observer);
  obs_ = observe(sim_.model, sim_.state, filters_);
  return obs_;
}

BalanceEnv::BalanceEnv(ExperimentConfig cfg)
    : cfg_(std::move(cfg)), settled_(settled_state(cfg_)), rig_(cfg_) {
  max_steps_ = static_cast<std::size_t>(std::lround(cfg_.episode_length * cfg_.schedule.hlc_hz));
}

ddpg::Vector BalanceEnv::action_lower() const { return joint_lower(cfg_.model); }
ddpg::Vector BalanceEnv::action_upper() const { return joint_upper(cfg_.model); }

ddpg::Vector BalanceEnv::reset(ddpg::Rng& rng) {
  steps_ = 0;
  push_.reset();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (u(rng) < cfg_.train_push_probability) {
    const double force = (2.0 * u(rng) - 1.0) * cfg_.train_push_max_force;
    const double onset = 0.2 + 1.8 * u(rng);
    push_ = ExternalPush{force, onset, cfg_.push.duration};
  }
  rig_.set_push(push_);
  return rig_.reset(settled_).features;
}

ddpg::StepResult BalanceEnv::step(const ddpg::Vector& action) {
  const JointVector target = JointVector(action).cwiseMax(joint_lower(cfg_.model)).cwiseMin(joint_upper(cfg_.model));
  ++steps_;
  ddpg::StepResult r;
  try {
    r.observation = rig_.hlc_step(target).features;
  } catch (const NonFiniteError&) {
    // The state is unusable; end the episode without credit.
    r.observation = rig_.observation().features;
    r.reward = 0.0;
    r.terminal = true;
    return r;
  }
  r.reward = state_reward(cfg_, rig_.state()).total;
  r.terminal = has_fallen(cfg_, rig_.state());
  r.truncated = !r.terminal && steps_ >= max_steps_;
  return r;
}

}  // namespace balance::experiment
