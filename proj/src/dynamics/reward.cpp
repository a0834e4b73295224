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

#include "balance/reward.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace balance {

const char* objective_name(Objective o) {
  switch (o) {
    case Objective::TorsoPitch: return "torso_pitch";
    case Objective::PelvisPitch: return "pelvis_pitch";
    case Objective::ComX: return "com_x";
    case Objective::ComZ: return "com_z";
    case Objective::ComXVelocity: return "com_xd";
    case Objective::ComZVelocity: return "com_zd";
  }
  return "?";
}

ErrorRanges error_ranges(double l, double max_lean, double g) {
  if (!(l > 0.0) || !(max_lean > 0.0) || !(max_lean < std::numbers::pi / 2.0) || !(g > 0.0)) {
    throw std::invalid_argument("error_ranges: need l > 0, 0 < max_lean < pi/2, g > 0");
  }
  const double s = std::sin(max_lean), c = std::cos(max_lean);
  // Vertical speed reached falling from upright to the cone edge.
  const double fall_speed = std::sqrt(2.0 * g * (1.0 - c) * l);
  ErrorRanges e;
  e.range[index(Objective::TorsoPitch)] = std::numbers::pi / 2.0;
  e.range[index(Objective::PelvisPitch)] = std::numbers::pi / 2.0;
  e.range[index(Objective::ComX)] = s * l;
  e.range[index(Objective::ComZ)] = (1.0 - c) * l;
  e.range[index(Objective::ComXVelocity)] = s * l * std::sqrt(g / (c * l)) + c * fall_speed;
  e.range[index(Objective::ComZVelocity)] = s * fall_speed;
  return e;
}

ObjectiveArray normalization_factors(const ErrorRanges& e, double epsilon) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) throw std::invalid_argument("epsilon must be in (0, 1)");
  ObjectiveArray alpha{};
  for (std::size_t i = 0; i < kNumObjectives; ++i) {
    if (!(e.range[i] > 0.0)) throw std::invalid_argument("error ranges must be positive");
    alpha[i] = -std::log(epsilon) / (e.range[i] * e.range[i]);
  }
  return alpha;
}

void RewardConfig::recompute_alpha() {
  alpha = normalization_factors(error_ranges(pendulum_length, max_lean, gravity), epsilon);
}

void RewardConfig::validate() const {
  for (std::size_t i = 0; i < kNumObjectives; ++i) {
    if (!(weights[i] >= 0.0)) throw std::invalid_argument("reward weights must be non-negative");
    if (!(alpha[i] > 0.0)) throw std::invalid_argument("normalization factors must be positive");
  }
}

RewardConfig default_reward_config() {
  RewardConfig cfg;
  cfg.recompute_alpha();
  return cfg;
}

RewardBreakdown compute_reward(const RewardConfig& cfg, const RewardInputs& in) {
  const ObjectiveArray error{
      0.0 - in.torso_pitch,
      0.0 - in.pelvis_pitch,
      cfg.com_x_target - in.com_x,
      cfg.com_z_target - in.com_z,
      cfg.com_xd_target - in.com_xd,
      cfg.com_zd_target - in.com_zd,
  };
  RewardBreakdown r;
  for (std::size_t i = 0; i < kNumObjectives; ++i) {
    r.terms[i] = std::max(std::exp(-cfg.alpha[i] * error[i] * error[i]), std::numeric_limits<double>::min());
    r.total += cfg.weights[i] * r.terms[i];
  }
  return r;
}

}  // namespace balance
