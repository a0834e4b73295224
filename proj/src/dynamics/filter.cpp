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

#include "balance/filter.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace balance {

LowPassFilter::LowPassFilter(double cutoff_hz, double sample_rate_hz)
    : cutoff_(cutoff_hz), sample_rate_(sample_rate_hz) {
  if (!(cutoff_hz > 0.0) || !(sample_rate_hz > 2.0 * cutoff_hz)) {
    throw std::invalid_argument("cutoff must be positive and below Nyquist");
  }
  const double k = std::tan(std::numbers::pi * cutoff_hz / sample_rate_hz);
  const double k2 = k * k;
  const double norm = 1.0 / (1.0 + std::numbers::sqrt2 * k + k2);
  b_ = {k2 * norm, 2.0 * k2 * norm, k2 * norm};
  a_ = {2.0 * (k2 - 1.0) * norm, (1.0 - std::numbers::sqrt2 * k + k2) * norm};
}

double LowPassFilter::step(double x) {
  if (!primed_) {
    // Steady state for a constant input x: y = x.
    z1_ = x * (1.0 - b_[0]);
    z2_ = x * (b_[2] - a_[1]);
    primed_ = true;
  }
  const double y = b_[0] * x + z1_;
  z1_ = b_[1] * x - a_[0] * y + z2_;
  z2_ = b_[2] * x - a_[1] * y;
  return y;
}

}  // namespace balance
