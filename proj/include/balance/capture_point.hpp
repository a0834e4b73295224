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

#include <vector>

namespace balance {

/// Linear inverted pendulum at constant COM height.
struct LipState {
  double x = 0.0;       // m
  double xd = 0.0;      // m/s
  double height = 1.0;  // m
  double gravity = 9.81;
};

/// Disturbance limits implied by a constant COP offset from the COM.
struct ImpulseBudget {
  double impulse = 0.0;       // N s, rejectable impulse
  double max_velocity = 0.0;  // m/s
  double max_force = 0.0;     // N, for the given pulse duration
  double pulse_duration = 0.0;
  double cop_offset = 0.0;
  double mass = 0.0;
  double com_height = 0.0;
};

/// x + xd * sqrt(z0 / g).
double capture_point(const LipState& s);

/// J = m sqrt(g / z) * offset, V = J / m, F = J / t. The sign of the
/// offset carries through to every output.
ImpulseBudget impulse_budget(double mass, double com_height, double cop_offset, double pulse_duration,
                             double gravity = 9.81);

/// Integrates xdd = (g / z0) (x - cop) with fixed-step RK4. Returns the
/// trajectory including the initial state. Requires dt <= 1 ms.
std::vector<LipState> lip_simulate(const LipState& s, double cop_x, double horizon, double dt = 1e-3);

}  // namespace balance
