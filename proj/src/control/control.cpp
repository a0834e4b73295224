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

#include "balance/control.hpp"

#include <stdexcept>

namespace balance {

void PdGains::validate() const {
  if (!(kp.array() > 0.0).all() || !(kd.array() > 0.0).all()) {
    throw std::invalid_argument("PD gains must be positive");
  }
}

void ControlSchedule::validate() const {
  if (physics_hz <= 0 || llc_hz <= 0 || hlc_hz <= 0) throw std::invalid_argument("rates must be positive");
  if (physics_hz < llc_hz || llc_hz < hlc_hz) {
    throw std::invalid_argument("rates must satisfy physics >= llc >= hlc");
  }
  if (physics_hz % llc_hz != 0 || llc_hz % hlc_hz != 0) {
    throw std::invalid_argument("rates must be integer multiples of each other");
  }
  if (!(feedback_cutoff_hz > 0.0) || !(2.0 * feedback_cutoff_hz < llc_hz)) {
    throw std::invalid_argument("feedback cutoff must be below the LLC Nyquist rate");
  }
}

JointVector pd_torque(const PdGains& gains, const JointVector& target, const JointVector& measured,
                      const JointVector& rate, const JointVector& torque_limits) {
  const JointVector u = gains.kp.cwiseProduct(target - measured) - gains.kd.cwiseProduct(rate);
  return u.cwiseMax(-torque_limits).cwiseMin(torque_limits);
}

JointVector torque_limits(const BipedModel& model) {
  JointVector l;
  for (std::size_t j = 0; j < kNumJoints; ++j) l[static_cast<Eigen::Index>(j)] = model.joints[j].torque_limit;
  return l;
}

LowLevelController::LowLevelController(const BipedModel& model, PdGains gains, ControlSchedule schedule)
    : gains_(gains), schedule_(schedule), limits_(torque_limits(model)) {
  gains_.validate();
  schedule_.validate();
  angle_filters_.fill(LowPassFilter(schedule_.feedback_cutoff_hz, schedule_.llc_hz));
  rate_filters_.fill(LowPassFilter(schedule_.feedback_cutoff_hz, schedule_.llc_hz));
}

void LowLevelController::reset() {
  for (auto& f : angle_filters_) f.reset();
  for (auto& f : rate_filters_) f.reset();
}

JointVector LowLevelController::update(const BipedState& state, const JointVector& target) {
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    const auto i = static_cast<Eigen::Index>(j);
    angles_[i] = angle_filters_[j].step(state.q[kFirstJoint + j]);
    rates_[i] = rate_filters_[j].step(state.qd[kFirstJoint + j]);
  }
  return pd_torque(gains_, target, angles_, rates_, limits_);
}

BipedState run_llc_window(Simulation& sim, LowLevelController& llc, const JointVector& target, int n_steps,
                          const PhysicsObserver& observer) {
  const int per_llc = llc.schedule().physics_steps_per_llc();
  JointVector torque = JointVector::Zero();
  for (int k = 0; k < n_steps; ++k) {
    if (k % per_llc == 0) torque = llc.update(sim.state, target);
    sim.advance(torque);
    if (observer) observer(sim.state, torque);
  }
  return sim.state;
}

}  // namespace balance
