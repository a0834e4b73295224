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

#include "balance/ddpg/network.hpp"

namespace balance::ddpg {

/// Zero-mean Ornstein-Uhlenbeck process, one channel per action dimension:
///   x <- x - decay * x * dt + sigma * sqrt(2 * decay * dt) * N(0, 1)
/// The stationary standard deviation is close to sigma and the lag-1
/// autocorrelation is 1 - decay * dt.
class OrnsteinUhlenbeck {
 public:
  OrnsteinUhlenbeck() = default;
  OrnsteinUhlenbeck(Vector sigma, double decay, std::uint64_t seed);

  void reset();
  /// Advances the process and returns the new sample times `scale`.
  Vector sample(double dt = 1.0, double scale = 1.0);

  const Vector& sigma() const { return sigma_; }
  double decay() const { return decay_; }

 private:
  Vector sigma_;
  double decay_ = 0.15;
  Vector x_;
  Rng rng_;
};

}  // namespace balance::ddpg
