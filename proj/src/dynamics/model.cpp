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

#include "balance/model.hpp"

#include <cmath>
#include <stdexcept>

namespace balance {

const char* link_name(Link l) {
  switch (l) {
    case Link::Foot: return "foot";
    case Link::Shank: return "shank";
    case Link::Thigh: return "thigh";
    case Link::Pelvis: return "pelvis";
    case Link::Torso: return "torso";
  }
  return "?";
}

const char* joint_name(Joint j) {
  switch (j) {
    case Joint::Ankle: return "ankle";
    case Joint::Knee: return "knee";
    case Joint::Hip: return "hip";
    case Joint::Waist: return "waist";
  }
  return "?";
}

double BipedModel::total_mass() const {
  double m = 0.0;
  for (const auto& l : links) m += l.mass;
  return m;
}

void BipedModel::validate() const {
  for (std::size_t i = 0; i < kNumLinks; ++i) {
    const auto& l = links[i];
    if (!(l.mass > 0.0) || !(l.inertia > 0.0) || !(l.length > 0.0)) {
      throw std::invalid_argument(std::string("non-positive mass, inertia or length on link ") +
                                  link_name(static_cast<Link>(i)));
    }
  }
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    const auto& jp = joints[j];
    if (!(jp.lower < jp.upper) || !(jp.torque_limit > 0.0) || jp.armature < 0.0) {
      throw std::invalid_argument(std::string("invalid limits on joint ") +
                                  joint_name(static_cast<Joint>(j)));
    }
  }
  if (!(foot.heel > 0.0) || !(foot.toe > 0.0) || !(foot.thickness > 0.0)) {
    throw std::invalid_argument("foot geometry must be positive");
  }
  if (!(contact.stiffness > 0.0) || contact.damping < 0.0 || !(contact.friction > 0.0)) {
    throw std::invalid_argument("invalid contact parameters");
  }
  if (!(gravity >= 0.0) || !std::isfinite(gravity)) throw std::invalid_argument("invalid gravity");
}

BipedModel build_default_model() {
  // Mass split 5 / 12 / 22 / 19 / 42 % of 127.6 kg over a 1.8 m humanoid
  // skeleton. The torso COM offset absorbs the arms and head and is solved
  // so that the upright pose puts the aggregate COM at 1.084 m.
  BipedModel m;
  m.foot = FootGeometry{0.111, 0.189, 0.08};

  const double foot_len = m.foot.heel + m.foot.toe;
  m.links[index(Link::Foot)] = {6.38, foot_len, 0.0, -0.5 * m.foot.thickness,
                                6.38 * (foot_len * foot_len + 0.08 * 0.08) / 12.0};
  m.links[index(Link::Shank)] = {15.312, 0.48, 0.0, 0.2688, 15.312 * 0.48 * 0.48 / 12.0};
  m.links[index(Link::Thigh)] = {28.072, 0.48, 0.0, 0.288, 28.072 * 0.48 * 0.48 / 12.0};
  m.links[index(Link::Pelvis)] = {24.244, 0.24, 0.0, 0.12, 24.244 * (0.24 * 0.24 + 0.25 * 0.25) / 12.0};
  m.links[index(Link::Torso)] = {53.592, 0.55, 0.0, 0.2275809523809524,
                                 53.592 * (0.55 * 0.55 + 0.30 * 0.30) / 12.0};

  // Positive joint angles tilt the distal link forward relative to the
  // proximal one. The knee cannot hyperextend past straight.
  m.joints[index(Joint::Ankle)] = {-0.80, 0.50, 500.0, 0.5};
  m.joints[index(Joint::Knee)] = {-2.00, 0.00, 500.0, 0.3};
  m.joints[index(Joint::Hip)] = {-0.50, 1.80, 500.0, 0.3};
  m.joints[index(Joint::Waist)] = {-0.40, 0.60, 500.0, 0.2};

  m.contact = ContactParams{};
  m.gravity = 9.81;
  return m;
}

}  // namespace balance
