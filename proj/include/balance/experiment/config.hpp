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
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "balance/control.hpp"
#include "balance/ddpg/agent.hpp"
#include "balance/model.hpp"
#include "balance/reward.hpp"

namespace balance::experiment {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct PushSpec {
  int direction = 1;          // +1 forward, -1 backward
  double magnitude = 728.0;   // N, unsigned
  double duration = 0.1;      // s
  double onset = 0.5;         // s after the settled trial starts

  double signed_force() const { return direction * magnitude; }
};

struct ExperimentConfig {
  BipedModel model = build_default_model();
  PdGains gains;
  ControlSchedule schedule;
  double observation_cutoff_hz = 10.0;
  RewardConfig reward = default_reward_config();
  ddpg::Hyperparams hyperparams;

  PushSpec push;
  std::vector<double> sweep_magnitudes{100, 200, 300, 400, 500, 600, 700, 728, 800, 900};

  std::uint64_t seed = 1;
  std::vector<std::uint64_t> eval_seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  double eval_perturbation = 0.02;  // rad, uniform on each joint angle

  double episode_length = 30.0;  // s
  double settle_time = 2.0;      // s of PD hold at the nominal pose

  double fall_pelvis_height = 0.7;  // m
  double fall_torso_pitch = 1.0;    // rad
  double balanced_com_velocity = 0.05;  // m/s

  // Random pelvis pushes during training.
  double train_push_probability = 0.5;
  double train_push_max_force = 800.0;  // N
  // Periodic validation during training; the best-scoring snapshot is kept.
  std::size_t validate_every = 100;  // episodes, 0 disables
  std::vector<std::uint64_t> validation_seeds{101, 102, 103, 104, 105};
  std::vector<double> validation_forces{300, 500, -300};  // N, signed

  double capacity_max_impulse = 150.0;  // N s
  double capacity_tolerance = 1.0;      // N s

  std::string output_dir = "out";

  /// Throws ConfigError when any section is inconsistent.
  void validate() const;
};

/// Applies "section.key = value" lines on top of cfg. Blank lines and text
/// after '#' are ignored. Unknown or repeated keys and malformed values
/// raise ConfigError naming the source and line.
void apply_config_text(ExperimentConfig& cfg, const std::string& text, const std::string& source = "<text>");

ExperimentConfig load_config(const std::filesystem::path& path);

/// Every known key with its current value, one per line, in a form that
/// apply_config_text accepts.
std::string dump_config(const ExperimentConfig& cfg);

std::vector<std::string> config_keys();

}  // namespace balance::experiment
