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

#include <Eigen/Core>
#include <array>
#include <optional>
#include <stdexcept>
#include <string>

#include "balance/model.hpp"

namespace balance {

using Vec2 = Eigen::Vector2d;
using GenVector = Eigen::Matrix<double, kNumDofs, 1>;
using GenMatrix = Eigen::Matrix<double, kNumDofs, kNumDofs>;
using JointVector = Eigen::Matrix<double, kNumJoints, 1>;

/// Generalized coordinate layout.
enum Dof : std::size_t { kFootX = 0, kFootZ = 1, kFootPitch = 2, kFirstJoint = 3 };

enum class Pivot : std::size_t { Heel = 0, Toe = 1 };

struct ContactPoint {
  bool active = false;
  double normal = 0.0;       // N, >= 0
  double tangential = 0.0;   // N, |.| <= mu * normal
  double penetration = 0.0;  // m
  double anchor_x = 0.0;     // m, stiction spring rest point while active
};

struct ContactState {
  std::array<ContactPoint, 2> points{};  // indexed by Pivot
  const ContactPoint& at(Pivot p) const { return points[static_cast<std::size_t>(p)]; }
  ContactPoint& at(Pivot p) { return points[static_cast<std::size_t>(p)]; }
};

/// q = (foot x, foot z, foot pitch, ankle, knee, hip, waist); the foot pose
/// is the ankle position and the sole's pitch.
struct BipedState {
  GenVector q = GenVector::Zero();
  GenVector qd = GenVector::Zero();
  double time = 0.0;
  ContactState contact{};

  JointVector joint_angles() const { return q.tail<kNumJoints>(); }
  JointVector joint_rates() const { return qd.tail<kNumJoints>(); }
};

/// Horizontal force applied at the pelvis COM; positive pushes forward.
struct ExternalPush {
  double force = 0.0;     // N
  double start = 0.0;     // s
  double duration = 0.1;  // s

  bool active_at(double t) const { return t >= start && t < start + duration; }
  double impulse() const { return force * duration; }
};

struct ComState {
  double x = 0.0;
  double z = 0.0;
  double xd = 0.0;
  double zd = 0.0;
};

/// World-frame kinematics of every link.
struct LinkKinematics {
  Vec2 joint = Vec2::Zero();  // proximal joint (ankle for the foot)
  Vec2 com = Vec2::Zero();
  Vec2 com_velocity = Vec2::Zero();
  double angle = 0.0;         // absolute pitch, + tilts the link top forward
  double angular_velocity = 0.0;
};

using BodyKinematics = std::array<LinkKinematics, kNumLinks>;

class NonFiniteError : public std::runtime_error {
 public:
  explicit NonFiniteError(const std::string& what) : std::runtime_error(what) {}
};

class PivotInactiveError : public std::runtime_error {
 public:
  explicit PivotInactiveError(const std::string& what) : std::runtime_error(what) {}
};

BodyKinematics link_kinematics(const BipedModel& model, const BipedState& state);

/// World position of the heel or toe tip.
Vec2 sole_point(const BipedModel& model, const BipedState& state, Pivot p);

/// Joint-space inertia including actuator armature.
GenMatrix mass_matrix(const BipedModel& model, const GenVector& q);

ComState com_state(const BipedModel& model, const BipedState& state);

/// Kinetic plus gravitational potential energy (ground at z = 0).
double mechanical_energy(const BipedModel& model, const BipedState& state);

/// Upright pose (all joints zero) with the sole resting on the ground.
BipedState nominal_state(const BipedModel& model);

/// Advances one semi-implicit Euler step. Torques are clamped to the joint
/// limits before use. Throws NonFiniteError when the result is NaN/Inf or a
/// generalized velocity exceeds 1e6 (m/s or rad/s).
BipedState step(const BipedModel& model, const BipedState& state, const JointVector& joint_torques,
                const std::optional<ExternalPush>& push, double dt);

/// Clamps each torque to its joint's limit.
JointVector clamp_torques(const BipedModel& model, const JointVector& torques);

/// Largest ankle torque the foot can sustain while balanced on the given
/// edge: body weight times the horizontal ankle-to-edge distance in the
/// current (possibly tilted) foot pose. Throws PivotInactiveError if the
/// pivot is not touching the ground.
double foot_torque_ceiling(const BipedModel& model, const BipedState& state, Pivot pivot);

/// Owns a model and its evolving state.
struct Simulation {
  BipedModel model;
  BipedState state;
  std::optional<ExternalPush> push;
  double dt = 1e-3;

  void advance(const JointVector& joint_torques) {
    state = step(model, state, joint_torques, push, dt);
  }
};

}  // namespace balance
