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
#include <cstddef>

#include "balance/dynamics.hpp"
#include "balance/filter.hpp"

namespace balance {

/*
 * Feature layout (5 links):
 *   pelvis height                 n = 1,  offset 0
 *   joint angles                  n = 4,  offset 1
 *   joint rates                   n = 4,  offset 5
 *   torso, pelvis pitch           n = 2,  offset 9
 *   torso, pelvis pitch rate      n = 2,  offset 11
 *   link COM minus pelvis COM     n = 10, offset 13   (x, z per link)
 *   link COM velocity             n = 10, offset 23   (x, z per link)
 *   heel, toe contact flags       n = 2,  offset 33
 */
namespace feature {
inline constexpr std::size_t kPelvisHeight = 0;
inline constexpr std::size_t kJointAngles = 1;
inline constexpr std::size_t kJointRates = 5;
inline constexpr std::size_t kTorsoPitch = 9;
inline constexpr std::size_t kPelvisPitch = 10;
inline constexpr std::size_t kTorsoRate = 11;
inline constexpr std::size_t kPelvisRate = 12;
inline constexpr std::size_t kLinkOffsets = 13;
inline constexpr std::size_t kLinkVelocities = 23;
inline constexpr std::size_t kContactFlags = 33;
inline constexpr std::size_t kContinuous = 33;
}  // namespace feature

constexpr std::size_t observation_size(std::size_t links) {
  return 1 + (links - 1) + (links - 1) + 2 + 2 + 2 * links + 2 * links + 2;
}

inline constexpr std::size_t kObservationSize = observation_size(kNumLinks);
static_assert(kObservationSize == 35);

using ObservationVector = Eigen::Matrix<double, kObservationSize, 1>;

struct Observation {
  ObservationVector features = ObservationVector::Zero();

  double pelvis_height() const { return features[feature::kPelvisHeight]; }
  double torso_pitch() const { return features[feature::kTorsoPitch]; }
  double pelvis_pitch() const { return features[feature::kPelvisPitch]; }
  double heel_contact() const { return features[feature::kContactFlags]; }
  double toe_contact() const { return features[feature::kContactFlags + 1]; }
  Vec2 link_offset(Link l) const {
    return features.segment<2>(feature::kLinkOffsets + 2 * index(l));
  }
  Vec2 link_velocity(Link l) const {
    return features.segment<2>(feature::kLinkVelocities + 2 * index(l));
  }
};

/// Unfiltered feature vector.
Observation raw_features(const BipedModel& model, const BipedState& state);

/// One low-pass filter per continuous feature, all at the sampling rate of
/// the consumer (the high-level controller).
class ObservationFilterBank {
 public:
  ObservationFilterBank(double cutoff_hz = 10.0, double sample_rate_hz = 25.0);

  void reset();
  Observation apply(const Observation& raw);

 private:
  std::array<LowPassFilter, feature::kContinuous> filters_;
};

/// Filtered observation; contact flags bypass the filters.
Observation observe(const BipedModel& model, const BipedState& state, ObservationFilterBank& filters);

}  // namespace balance
