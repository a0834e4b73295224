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

#include "balance/experiment/rollout.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <thread>

#include "balance/capture_point.hpp"

namespace balance::experiment {
namespace {

RolloutSample make_sample(const ExperimentConfig& cfg, const BipedState& s, const JointVector& torque,
                          const JointVector& target, const RewardBreakdown& reward) {
  const BodyKinematics kin = link_kinematics(cfg.model, s);
  const ComState com = com_state(cfg.model, s);
  RolloutSample r;
  r.time = s.time;
  r.ankle_reference = target[index(Joint::Ankle)];
  r.ankle_angle = s.q[kFirstJoint + index(Joint::Ankle)];
  r.torso_pitch = kin[index(Link::Torso)].angle;
  r.pelvis_pitch = kin[index(Link::Pelvis)].angle;
  r.foot_pitch = kin[index(Link::Foot)].angle;
  r.torso_rate = kin[index(Link::Torso)].angular_velocity;
  r.pelvis_rate = kin[index(Link::Pelvis)].angular_velocity;
  r.foot_rate = kin[index(Link::Foot)].angular_velocity;
  r.capture_point_x = capture_point(LipState{com.x, com.xd, com.z, cfg.model.gravity});
  r.com_x = com.x;
  r.com_z = com.z;
  r.torque = torque;
  r.heel_contact = s.contact.at(Pivot::Heel).active;
  r.toe_contact = s.contact.at(Pivot::Toe).active;
  r.ankle_torque_ceiling = std::numeric_limits<double>::quiet_NaN();
  if (r.single_contact()) {
    r.ankle_torque_ceiling = foot_torque_ceiling(cfg.model, s, r.toe_contact ? Pivot::Toe : Pivot::Heel);
  }
  r.reward = reward;
  return r;
}

/// Running statistics gathered at every physics step whether or not the
/// full log is kept.
struct Tracker {
  double com_x0 = 0.0;
  TrialSummary summary;
  double dt = 1e-3;

  void add(const RolloutSample& r) {
    auto& s = summary;
    s.max_com_excursion = std::max(s.max_com_excursion, std::abs(r.com_x - com_x0));
    s.max_ankle_angle = std::max(s.max_ankle_angle, r.ankle_angle);
    s.min_ankle_angle = std::min(s.min_ankle_angle, r.ankle_angle);
    if (r.single_contact()) {
      s.underactuation_time += dt;
      if (r.toe_contact) s.toe_tilt_time += dt;
      const double tau = std::abs(r.torque[index(Joint::Ankle)]);
      s.peak_underactuated_torque = std::max(s.peak_underactuated_torque, tau);
      const double ratio = r.ankle_torque_ceiling > 0.0 ? tau / r.ankle_torque_ceiling
                                                        : (tau > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
      s.peak_ceiling_ratio = std::max(s.peak_ceiling_ratio, ratio);
    }
  }
};

template <typename T, typename F>
std::vector<T> parallel_map(std::size_t n, F&& f) {
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<T> out(n);
  for (std::size_t begin = 0; begin < n; begin += workers) {
    const std::size_t end = std::min(n, begin + workers);
    std::vector<std::future<T>> futures;
    for (std::size_t i = begin; i < end; ++i) futures.push_back(std::async(std::launch::async, f, i));
    for (std::size_t i = begin; i < end; ++i) out[i] = futures[i - begin].get();
  }
  return out;
}

}  // namespace

const char* verdict_name(Verdict v) { return v == Verdict::Balanced ? "balanced" : "fell"; }

Policy hold_pose_policy(const JointVector& target) {
  return [target](const Observation&) { return target; };
}

Policy agent_policy(const ddpg::Agent& agent) {
  auto snapshot = std::make_shared<const ddpg::Agent>(agent);
  return [snapshot](const Observation& obs) -> JointVector {
    return JointVector(snapshot->act(ddpg::Vector(obs.features)));
  };
}

TrialResult run_push_trial(const Policy& policy, const ExperimentConfig& cfg, double force, bool record) {
  BipedRig rig(cfg);
  Observation obs = rig.reset(settled_state(cfg));
  if (force != 0.0) rig.set_push(ExternalPush{force, cfg.push.onset, cfg.push.duration});

  TrialResult result;
  result.log.dt = cfg.schedule.physics_dt();
  Tracker tracker;
  tracker.dt = result.log.dt;
  tracker.com_x0 = com_state(cfg.model, rig.state()).x;
  const double ankle0 = rig.state().q[kFirstJoint + index(Joint::Ankle)];
  tracker.summary.max_ankle_angle = ankle0;
  tracker.summary.min_ankle_angle = ankle0;
  tracker.summary.force = force;
  tracker.summary.impulse = force * cfg.push.duration;

  RewardBreakdown reward = state_reward(cfg, rig.state());
  JointVector target = JointVector::Zero();
  const PhysicsObserver observer = [&](const BipedState& s, const JointVector& torque) {
    const RolloutSample sample = make_sample(cfg, s, torque, target, reward);
    tracker.add(sample);
    if (record) result.log.samples.push_back(sample);
  };

  const auto ticks = static_cast<std::size_t>(std::lround(cfg.episode_length * cfg.schedule.hlc_hz));
  bool fell = false;
  try {
    for (std::size_t k = 0; k < ticks && !fell; ++k) {
      target = policy(obs).cwiseMax(joint_lower(cfg.model)).cwiseMin(joint_upper(cfg.model));
      obs = rig.hlc_step(target, observer);
      reward = state_reward(cfg, rig.state());
      fell = has_fallen(cfg, rig.state());
    }
  } catch (const NonFiniteError& e) {
    throw SimulationBlowUp(e.what(), std::move(result.log));
  }

  auto& s = tracker.summary;
  s.fell = fell;
  s.final_com_xd = com_state(cfg.model, rig.state()).xd;
  s.verdict = !fell && std::abs(s.final_com_xd) < cfg.balanced_com_velocity ? Verdict::Balanced : Verdict::Fell;
  result.summary = s;
  return result;
}

TrialSummary push_outcome(const Policy& policy, const ExperimentConfig& cfg, double force) {
  try {
    return run_push_trial(policy, cfg, force, false).summary;
  } catch (const SimulationBlowUp&) {
    TrialSummary s;
    s.force = force;
    s.impulse = force * cfg.push.duration;
    s.fell = true;
    s.blew_up = true;
    return s;
  }
}

std::vector<TrialSummary> run_sweep(const Policy& policy, const ExperimentConfig& cfg,
                                    const std::vector<double>& magnitudes) {
  auto out = parallel_map<TrialSummary>(magnitudes.size(), [&](std::size_t i) {
    return push_outcome(policy, cfg, cfg.push.direction * std::abs(magnitudes[i]));
  });
  std::sort(out.begin(), out.end(), [](const TrialSummary& a, const TrialSummary& b) { return a.force < b.force; });
  return out;
}

double capture_point_budget(const ExperimentConfig& cfg, int direction) {
  const BipedState nominal = nominal_state(cfg.model);
  const ComState com = com_state(cfg.model, nominal);
  const Pivot edge = direction > 0 ? Pivot::Toe : Pivot::Heel;
  const double offset = sole_point(cfg.model, nominal, edge).x() - com.x;
  return impulse_budget(cfg.model.total_mass(), com.z, offset, cfg.push.duration, cfg.model.gravity).impulse;
}

CapacityReport impulse_capacity_search(const Policy& policy, const ExperimentConfig& cfg, int direction) {
  CapacityReport rep;
  rep.direction = direction > 0 ? 1 : -1;
  rep.budget = capture_point_budget(cfg, rep.direction);

  const auto balanced_at = [&](double impulse) {
    const double force = rep.direction * impulse / cfg.push.duration;
    return push_outcome(policy, cfg, force).verdict == Verdict::Balanced;
  };
  const auto probe = [&](double impulse) {
    const bool ok = balanced_at(impulse);
    rep.bisection.push_back({impulse, ok});
    return ok;
  };

  double lo = 0.0;
  double hi = cfg.capacity_max_impulse;
  if (!probe(0.0)) {
    hi = 0.0;
  } else if (probe(hi)) {
    lo = hi;
    rep.capped = true;
  } else {
    while (hi - lo > cfg.capacity_tolerance) {
      const double mid = 0.5 * (lo + hi);
      (probe(mid) ? lo : hi) = mid;
    }
  }
  rep.capacity = lo;
  rep.ratio = std::abs(rep.budget) > 0.0 ? rep.capacity / std::abs(rep.budget) : 0.0;

  if (!rep.capped) {
    // Bisection assumes failure is monotone in impulse; spot-check above the
    // first failing value.
    const double first_fail = std::max(hi, cfg.capacity_tolerance);
    const double step = std::max(cfg.capacity_tolerance, 0.1 * first_fail);
    for (int k = 1; k <= 3; ++k) {
      const double j = first_fail + k * step;
      const bool ok = balanced_at(j);
      rep.monotonicity.push_back({j, ok});
      if (ok) rep.monotonic = false;
    }
  }
  return rep;
}

std::vector<StandingResult> evaluate_standing(const Policy& policy, const ExperimentConfig& cfg,
                                              const std::vector<std::uint64_t>& seeds) {
  const BipedState settled = settled_state(cfg);
  return parallel_map<StandingResult>(seeds.size(), [&](std::size_t i) {
    StandingResult r;
    r.seed = seeds[i];
    ddpg::Rng rng(seeds[i]);
    std::uniform_real_distribution<double> u(-cfg.eval_perturbation, cfg.eval_perturbation);
    BipedState start = settled;
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      const auto& jp = cfg.model.joints[j];
      start.q[kFirstJoint + j] = std::clamp(start.q[kFirstJoint + j] + u(rng), jp.lower, jp.upper);
    }
    BipedRig rig(cfg);
    Observation obs = rig.reset(start);
    const auto ticks = static_cast<std::size_t>(std::lround(cfg.episode_length * cfg.schedule.hlc_hz));
    bool fell = false;
    try {
      for (std::size_t k = 0; k < ticks && !fell; ++k) {
        const JointVector target =
            policy(obs).cwiseMax(joint_lower(cfg.model)).cwiseMin(joint_upper(cfg.model));
        obs = rig.hlc_step(target);
        fell = has_fallen(cfg, rig.state());
      }
    } catch (const NonFiniteError&) {
      fell = true;
    }
    r.survived = !fell;
    r.duration = rig.state().time;
    r.final_com_xd = com_state(cfg.model, rig.state()).xd;
    return r;
  });
}

}  // namespace balance::experiment
