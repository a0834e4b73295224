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

#include "balance/ddpg/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace balance::ddpg {

OrnsteinUhlenbeck::OrnsteinUhlenbeck(Vector sigma, double decay, std::uint64_t seed)
    : sigma_(std::move(sigma)), decay_(decay), x_(Vector::Zero(sigma_.size())), rng_(seed) {
  if (!(decay > 0.0) || !(decay <= 1.0)) throw std::invalid_argument("OU decay must be in (0, 1]");
}

void OrnsteinUhlenbeck::reset() { x_.setZero(); }

Vector OrnsteinUhlenbeck::sample(double dt, double scale) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double diffusion = std::sqrt(2.0 * decay_ * dt);
  for (Eigen::Index i = 0; i < x_.size(); ++i) {
    x_[i] += -decay_ * x_[i] * dt + sigma_[i] * diffusion * n(rng_);
  }
  return scale * x_;
}

}  // namespace balance::ddpg
