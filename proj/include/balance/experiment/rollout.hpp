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
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "balance/ddpg/agent.hpp"
#include "balance/experiment/balance_env.hpp"

namespace balance::experiment {

/// Maps the filtered observation to joint-angle targets.
using Policy = std::function<JointVector(const Observation&)>;

/// Always commands the same joint targets (zero is the nominal pose).
Policy hold_pose_policy(const JointVector& target = JointVector::Zero());
/// Wraps a private copy of the agent; safe to call from several threads.
Policy agent_policy(const ddpg::Agent& agent);

/// One physics-rate sample of a rollout.
struct RolloutSample {
  double time = 0.0;
  double ankle_reference = 0.0;
  double ankle_angle = 0.0;
  double torso_pitch = 0.0;
  double pelvis_pitch = 0.0;
  double foot_pitch = 0.0;
  double torso_rate = 0.0;
  double pelvis_rate = 0.0;
  double foot_rate = 0.0;
  double capture_point_x = 0.0;
  double com_x = 0.0;
  double com_z = 0.0;
  JointVector torque = JointVector::Zero();
  bool heel_contact = false;
  bool toe_contact = false;
  /// Ceiling about the single active pivot; NaN while both or neither
  /// contact is active.
  double ankle_torque_ceiling = 0.0;
  /// Reward of the most recent policy tick, held between ticks.
  RewardBreakdown reward;

  bool single_contact() const { return heel_contact != toe_contact; }
};

struct RolloutLog {
  double dt = 1e-3;
  std::vector<RolloutSample> samples;
};

enum class Verdict { Balanced, Fell };
const char* verdict_name(Verdict v);

struct TrialSummary {
  double force = 0.0;            // N, signed
  double impulse = 0.0;          // N s, signed
  Verdict verdict = Verdict::Fell;
  bool fell = false;
  bool blew_up = false;
  double final_com_xd = 0.0;
  double max_com_excursion = 0.0;   // m, |x_COM - x_COM(0)|
  double max_ankle_angle = 0.0;     // rad
  double min_ankle_angle = 0.0;     // rad
  double underactuation_time = 0.0; // s spent on a single contact point
  double toe_tilt_time = 0.0;       // s on the toe alone
  double peak_underactuated_torque = 0.0;  // N m, |ankle torque| on a single contact
  /// Largest |ankle torque| / ceiling over single-contact samples.
  double peak_ceiling_ratio = 0.0;
};

struct TrialResult {
  RolloutLog log;
  TrialSummary summary;
};

/// Raised when the simulation diverges; carries everything logged so far.
class SimulationBlowUp : public std::runtime_error {
 public:
  SimulationBlowUp(const std::string& what, RolloutLog partial)
      : std::runtime_error(what), log(std::move(partial)) {}
  RolloutLog log;
};

/// Settles, applies a pelvis pulse of `force` newtons (+ forward) for
/// cfg.push.duration at cfg.push.onset, and runs to cfg.episode_length or a
/// fall. Balanced iff no fall and the final |COM velocity| is below
/// cfg.balanced_com_velocity. Throws SimulationBlowUp.
TrialResult run_push_trial(const Policy& policy, const ExperimentConfig& cfg, double force, bool record = true);

/// Same as run_push_trial with the log discarded and blow-ups counted as falls.
TrialSummary push_outcome(const Policy& policy, const ExperimentConfig& cfg, double force);

/// Evaluates every magnitude (signed by cfg.push.direction) on independent
/// simulators in parallel; results are sorted by force.
std::vector<TrialSummary> run_sweep(const Policy& policy, const ExperimentConfig& cfg,
                                    const std::vector<double>& magnitudes);

struct CapacityProbe {
  double impulse = 0.0;  // N s, unsigned
  bool balanced = false;
};

struct CapacityReport {
  int direction = 1;
  double capacity = 0.0;       // N s, largest balanced impulse found
  double budget = 0.0;         // N s, capture-point rejectable impulse
  double ratio = 0.0;          // capacity / budget
  bool capped = false;         // balanced even at cfg.capacity_max_impulse
  std::vector<CapacityProbe> bisection;
  /// Re-simulated impulses above the first failure; all should fail.
  std::vector<CapacityProbe> monotonicity;
  bool monotonic = true;
};

/// Capture-point budget for the configured model in the given direction.
double capture_point_budget(const ExperimentConfig& cfg, int direction);

CapacityReport impulse_capacity_search(const Policy& policy, const ExperimentConfig& cfg, int direction);

struct StandingResult {
  std::uint64_t seed = 0;
  bool survived = false;
  double duration = 0.0;  // s simulated before a fall or the time cap
  double final_com_xd = 0.0;
};

/// Quiet standing from the settled stance with a small seeded joint-angle
/// perturbation; one rollout per seed, run concurrently.
std::vector<StandingResult> evaluate_standing(const Policy& policy, const ExperimentConfig& cfg,
                                              const std::vector<std::uint64_t>& seeds);

}  // namespace balance::experiment
