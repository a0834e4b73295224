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

#include <array>
#include <cstddef>
#include <functional>

#include "balance/dynamics.hpp"
#include "balance/filter.hpp"

namespace balance {

/// Per-joint PD gains, ordered ankle, knee, hip, waist.
struct PdGains {
  JointVector kp{3160.0, 2580.0, 1080.0, 720.0};  // N m / rad
  JointVector kd{300.0, 150.0, 70.0, 60.0};       // N m s / rad

  void validate() const;
};

struct ControlSchedule {
  int physics_hz = 1000;
  int llc_hz = 1000;
  int hlc_hz = 25;
  double feedback_cutoff_hz = 50.0;

  void validate() const;
  int physics_steps_per_action() const { return physics_hz / hlc_hz; }
  int physics_steps_per_llc() const { return physics_hz / llc_hz; }
  double physics_dt() const { return 1.0 / physics_hz; }
  double hlc_dt() const { return 1.0 / hlc_hz; }
};

/// u = Kp (target - measured) - Kd rate, clamped to the torque limits.
JointVector pd_torque(const PdGains& gains, const JointVector& target, const JointVector& measured,
                      const JointVector& rate, const JointVector& torque_limits);

JointVector torque_limits(const BipedModel& model);

/// PD loop on low-pass filtered joint feedback.
class LowLevelController {
 public:
  LowLevelController(const BipedModel& model, PdGains gains = {}, ControlSchedule schedule = {});

  void reset();
  /// Samples the joint sensors through the feedback filters and returns the
  /// clamped PD torque. Call once per LLC tick.
  JointVector update(const BipedState& state, const JointVector& target);

  const JointVector& filtered_angles() const { return angles_; }
  const JointVector& filtered_rates() const { return rates_; }
  const PdGains& gains() const { return gains_; }
  const ControlSchedule& schedule() const { return schedule_; }

 private:
  PdGains gains_;
  ControlSchedule schedule_;
  JointVector limits_;
  std::array<LowPassFilter, kNumJoints> angle_filters_;
  std::array<LowPassFilter, kNumJoints> rate_filters_;
  JointVector angles_ = JointVector::Zero();
  JointVector rates_ = JointVector::Zero();
};

/// Called after every physics step with the post-step state and the torque
/// that was applied during it.
using PhysicsObserver = std::function<void(const BipedState&, const JointVector&)>;

/// Holds the target fixed for n physics steps, refreshing the PD torque at
/// the LLC rate. Propagates NonFiniteError.
BipedState run_llc_window(Simulation& sim, LowLevelController& llc, const JointVector& target, int n_steps,
                          const PhysicsObserver& observer = {});

}  // namespace balance
