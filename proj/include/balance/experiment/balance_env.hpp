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

#include <optional>

#include "balance/control.hpp"
#include "balance/ddpg/trainer.hpp"
#include "balance/dynamics.hpp"
#include "balance/experiment/config.hpp"
#include "balance/observation.hpp"
#include "balance/reward.hpp"

namespace balance::experiment {

/// Reward of a true (unfiltered) state. The horizontal COM target is the
/// midpoint of the sole, so tilting the foot moves the target with it.
RewardBreakdown state_reward(const ExperimentConfig& cfg, const BipedState& state);

bool has_fallen(const ExperimentConfig& cfg, const BipedState& state);

/// Nominal pose held by the PD loop for cfg.settle_time seconds. The clock
/// of the returned state is reset to zero.
BipedState settled_state(const ExperimentConfig& cfg);

/// Simulator, PD loop and observation filters advanced together one
/// policy period at a time.
class BipedRig {
 public:
  explicit BipedRig(const ExperimentConfig& cfg);

  /// Starts from `state` with fresh filters; returns the first observation.
  Observation reset(const BipedState& state);
  /// Holds `target` for one policy period. Throws NonFiniteError.
  Observation hlc_step(const JointVector& target, const PhysicsObserver& observer = {});

  void set_push(std::optional<ExternalPush> push) { sim_.push = push; }
  const BipedState& state() const { return sim_.state; }
  const BipedModel& model() const { return sim_.model; }
  const LowLevelController& llc() const { return llc_; }
  const Observation& observation() const { return obs_; }

 private:
  Simulation sim_;
  LowLevelController llc_;
  ObservationFilterBank filters_;
  Observation obs_;
  int steps_per_action_;
};

/// Balance task for the learner: reset to the settled stance, random pelvis
/// pushes, fall termination and a time cap.
class BalanceEnv : public ddpg::Environment {
 public:
  explicit BalanceEnv(ExperimentConfig cfg);

  Eigen::Index observation_size() const override { return static_cast<Eigen::Index>(kObservationSize); }
  ddpg::Vector action_lower() const override;
  ddpg::Vector action_upper() const override;
  ddpg::Vector reset(ddpg::Rng& rng) override;
  ddpg::StepResult step(const ddpg::Vector& action) override;

  const BipedRig& rig() const { return rig_; }
  const std::optional<ExternalPush>& current_push() const { return push_; }

 private:
  ExperimentConfig cfg_;
  BipedState settled_;
  BipedRig rig_;
  std::optional<ExternalPush> push_;
  std::size_t steps_ = 0;
  std::size_t max_steps_ = 0;
};

JointVector joint_lower(const BipedModel& model);
JointVector joint_upper(const BipedModel& model);

}  // namespace balance::experiment
