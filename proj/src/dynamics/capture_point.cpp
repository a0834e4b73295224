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

#include "balance/capture_point.hpp"

#include <cmath>
#include <stdexcept>

namespace balance {

double capture_point(const LipState& s) { return s.x + s.xd * std::sqrt(s.height / s.gravity); }

ImpulseBudget impulse_budget(double mass, double com_height, double cop_offset, double pulse_duration,
                             double gravity) {
  if (!(mass > 0.0) || !(com_height > 0.0) || !(pulse_duration > 0.0) || !(gravity > 0.0)) {
    throw std::invalid_argument("impulse_budget: mass, height, duration and gravity must be positive");
  }
  ImpulseBudget b;
  b.mass = mass;
  b.com_height = com_height;
  b.cop_offset = cop_offset;
  b.pulse_duration = pulse_duration;
  b.impulse = mass * std::sqrt(gravity / com_height) * cop_offset;
  b.max_velocity = b.impulse / mass;
  b.max_force = b.impulse / pulse_duration;
  return b;
}

std::vector<LipState> lip_simulate(const LipState& s, double cop_x, double horizon, double dt) {
  if (!(dt > 0.0) || dt > 1e-3) throw std::invalid_argument("lip_simulate: dt must be in (0, 1 ms]");
  if (!(s.height > 0.0) || !(s.gravity > 0.0)) throw std::invalid_argument("lip_simulate: invalid LIP");
  const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
  const double w2 = s.gravity / s.height;
  std::vector<LipState> traj;
  traj.reserve(steps + 1);
  traj.push_back(s);
  LipState cur = s;
  // Classic RK4. Its update matrix is a polynomial in the system matrix, so
  // the pendulum's stable manifold is preserved exactly; an integrator that
  // perturbs it would excite the divergent mode (growth e^{wt}).
  const auto accel = [&](double x) { return w2 * (x - cop_x); };
  for (std::size_t k = 0; k < steps; ++k) {
    const double x = cur.x, v = cur.xd;
    const double k1x = v, k1v = accel(x);
    const double k2x = v + 0.5 * dt * k1v, k2v = accel(x + 0.5 * dt * k1x);
    const double k3x = v + 0.5 * dt * k2v, k3v = accel(x + 0.5 * dt * k2x);
    const double k4x = v + dt * k3v, k4v = accel(x + dt * k3x);
    cur.x = x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    cur.xd = v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    traj.push_back(cur);
  }
  return traj;
}

}  // namespace balance
