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

#include "balance/observation.hpp"

namespace balance {

Observation raw_features(const BipedModel& model, const BipedState& state) {
  using namespace feature;
  const auto kin = link_kinematics(model, state);
  const auto& pelvis = kin[index(Link::Pelvis)];
  const auto& torso = kin[index(Link::Torso)];

  Observation o;
  auto& f = o.features;
  f[kPelvisHeight] = pelvis.com.y();
  f.segment<kNumJoints>(kJointAngles) = state.joint_angles();
  f.segment<kNumJoints>(kJointRates) = state.joint_rates();
  f[kTorsoPitch] = torso.angle;
  f[kPelvisPitch] = pelvis.angle;
  f[kTorsoRate] = torso.angular_velocity;
  f[kPelvisRate] = pelvis.angular_velocity;
  for (std::size_t i = 0; i < kNumLinks; ++i) {
    f.segment<2>(kLinkOffsets + 2 * i) =
        i == index(Link::Pelvis) ? Vec2::Zero() : Vec2(kin[i].com - pelvis.com);
    f.segment<2>(kLinkVelocities + 2 * i) = kin[i].com_velocity;
  }
  f[kContactFlags] = state.contact.at(Pivot::Heel).active ? 1.0 : 0.0;
  f[kContactFlags + 1] = state.contact.at(Pivot::Toe).active ? 1.0 : 0.0;
  return o;
}

ObservationFilterBank::ObservationFilterBank(double cutoff_hz, double sample_rate_hz) {
  filters_.fill(LowPassFilter(cutoff_hz, sample_rate_hz));
}

void ObservationFilterBank::reset() {
  for (auto& f : filters_) f.reset();
}

Observation ObservationFilterBank::apply(const Observation& raw) {
  Observation out = raw;
  for (std::size_t i = 0; i < feature::kContinuous; ++i) {
    out.features[static_cast<Eigen::Index>(i)] = filters_[i].step(raw.features[static_cast<Eigen::Index>(i)]);
  }
  return out;
}

Observation observe(const BipedModel& model, const BipedState& state, ObservationFilterBank& filters) {
  return filters.apply(raw_features(model, state));
}

}  // namespace balance
