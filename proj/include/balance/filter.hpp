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

namespace balance {

/// Second-order Butterworth low-pass, discretized with the bilinear
/// transform pre-warped at the cutoff. Runs in transposed direct form II.
/// The first sample primes the delay line to its steady state so a
/// constant input passes through without a startup transient.
class LowPassFilter {
 public:
  LowPassFilter() = default;
  LowPassFilter(double cutoff_hz, double sample_rate_hz);

  double step(double sample);
  void reset() { primed_ = false; }

  double cutoff() const { return cutoff_; }
  double sample_rate() const { return sample_rate_; }
  static constexpr int order() { return 2; }

  /// Numerator b0..b2 and denominator a1, a2 (a0 = 1).
  const std::array<double, 3>& b() const { return b_; }
  const std::array<double, 2>& a() const { return a_; }

 private:
  double cutoff_ = 0.0;
  double sample_rate_ = 0.0;
  std::array<double, 3> b_{1.0, 0.0, 0.0};
  std::array<double, 2> a_{0.0, 0.0};
  double z1_ = 0.0;
  double z2_ = 0.0;
  bool primed_ = false;
};

/// One step of the filter recursion.
inline double filter_step(LowPassFilter& f, double sample) { return f.step(sample); }

}  // namespace balance
