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
#include <numbers>

namespace balance {

/// The six balance objectives, in reward order.
enum class Objective : std::size_t { TorsoPitch = 0, PelvisPitch, ComX, ComZ, ComXVelocity, ComZVelocity };
inline constexpr std::size_t kNumObjectives = 6;

constexpr std::size_t index(Objective o) { return static_cast<std::size_t>(o); }
const char* objective_name(Objective o);

using ObjectiveArray = std::array<double, kNumObjectives>;

/// Largest meaningful deviation of each quantity from its target, derived
/// from a pendulum of length l lying on the edge of the friction cone.
struct ErrorRanges {
  ObjectiveArray range{};
  double operator[](Objective o) const { return range[index(o)]; }
};

/// Six pairs (error range -> e) per objective.
ErrorRanges error_ranges(double pendulum_length, double max_lean, double gravity = 9.81);

/// alpha_i = -ln(eps) / e_i^2, so each term equals eps at its error range.
ObjectiveArray normalization_factors(const ErrorRanges& e, double epsilon);

struct RewardConfig {
  ObjectiveArray weights{1.0, 1.0, 1.0, 5.0, 1.0, 1.0};
  ObjectiveArray alpha{};
  /// Targets; pitch targets are always zero. The environment replaces
  /// com_x_target with the current foot-center x.
  double com_x_target = 0.0;
  double com_z_target = 1.084;
  double com_xd_target = 0.0;
  double com_zd_target = 0.0;
  double epsilon = 1e-5;
  double max_lean = std::numbers::pi / 4.0;
  double pendulum_length = 1.086;
  double gravity = 9.81;

  /// Recomputes alpha from epsilon, max_lean, pendulum_length and gravity.
  void recompute_alpha();
  /// Throws std::invalid_argument on negative weights or bad parameters.
  void validate() const;
};

RewardConfig default_reward_config();

struct RewardInputs {
  double torso_pitch = 0.0;
  double pelvis_pitch = 0.0;
  double com_x = 0.0;
  double com_z = 0.0;
  double com_xd = 0.0;
  double com_zd = 0.0;
};

struct RewardBreakdown {
  ObjectiveArray terms{};  // each in (0, 1]
  double total = 0.0;
  double operator[](Objective o) const { return terms[index(o)]; }
};

/// exp(-alpha (target - value)^2) per objective, weighted sum as total.
RewardBreakdown compute_reward(const RewardConfig& cfg, const RewardInputs& in);

}  // namespace balance
