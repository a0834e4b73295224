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
#include <string>

namespace balance {

inline constexpr std::size_t kNumLinks = 5;
inline constexpr std::size_t kNumJoints = 4;
/// Floating foot (x, z, pitch) plus the four joint angles.
inline constexpr std::size_t kNumDofs = 3 + kNumJoints;

enum class Link : std::size_t { Foot = 0, Shank, Thigh, Pelvis, Torso };
/// Joint j connects link j (proximal) to link j + 1 (distal).
enum class Joint : std::size_t { Ankle = 0, Knee, Hip, Waist };

constexpr std::size_t index(Link l) { return static_cast<std::size_t>(l); }
constexpr std::size_t index(Joint j) { return static_cast<std::size_t>(j); }

const char* link_name(Link l);
const char* joint_name(Joint j);

/// Rigid planar link. Local frame: +z runs from the proximal joint towards
/// the distal joint, +x points forward. For the foot the frame origin is
/// the ankle and +z is the foot's up direction.
struct LinkParams {
  double mass = 0.0;      // kg
  double length = 0.0;    // m, proximal-to-distal joint distance
  double com_x = 0.0;     // m, local
  double com_z = 0.0;     // m, local
  double inertia = 0.0;   // kg m^2 about the link COM
};

struct JointParams {
  double lower = 0.0;         // rad
  double upper = 0.0;         // rad
  double torque_limit = 0.0;  // N m
  double armature = 0.0;      // kg m^2, reflected actuator inertia
};

struct FootGeometry {
  double heel = 0.111;      // m, horizontal ankle-to-heel distance
  double toe = 0.189;       // m, horizontal ankle-to-toe distance
  double thickness = 0.08;  // m, sole-to-ankle height
};

struct ContactParams {
  double stiffness = 1.0e6;  // N/m, normal and tangential
  double damping = 5.0e3;    // N s/m
  double friction = 1.0;     // Coulomb coefficient
  bool enabled = true;
};

struct BipedModel {
  std::array<LinkParams, kNumLinks> links{};
  std::array<JointParams, kNumJoints> joints{};
  FootGeometry foot{};
  ContactParams contact{};
  double gravity = 9.81;

  double total_mass() const;
  const LinkParams& link(Link l) const { return links[index(l)]; }
  const JointParams& joint(Joint j) const { return joints[index(j)]; }
  /// Throws std::invalid_argument when a physical parameter is out of range.
  void validate() const;
};

/// Valkyrie-proportioned planar biped, calibrated so that the nominal
/// upright pose has its COM 1.084 m above the ground and directly over the
/// ankle (0.189 m behind the toe tip, 0.111 m ahead of the heel tip).
BipedModel build_default_model();

}  // namespace balance
