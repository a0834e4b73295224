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

#include <algorithm>
#include <random>

#include "balance/ddpg/trainer.hpp"

namespace balance::ddpg {

/// One-dimensional point mass that should be driven to the origin. The
/// action in [-1, 1] scales a bounded acceleration; the reward is
/// -(x^2 + 0.1 v^2).
/// Small and fast, used to check that the learner learns at all.
class PointMassEnv : public Environment {
 public:
  explicit PointMassEnv(double dt = 0.05, double start_range = 1.0, double max_accel = 4.0)
      : dt_(dt), start_range_(start_range), max_accel_(max_accel) {}

  Eigen::Index observation_size() const override { return 2; }
  Vector action_lower() const override { return Vector::Constant(1, -1.0); }
  Vector action_upper() const override { return Vector::Constant(1, 1.0); }

  Vector reset(Rng& rng) override {
    std::uniform_real_distribution<double> u(-start_range_, start_range_);
    x_ = u(rng);
    v_ = 0.0;
    return observation();
  }

  StepResult step(const Vector& action) override {
    const double a = std::clamp(action[0], -1.0, 1.0);
    v_ += max_accel_ * a * dt_;
    x_ += v_ * dt_;
    return {observation(), -(x_ * x_ + 0.1 * v_ * v_), false, false};
  }

  double position() const { return x_; }
  double velocity() const { return v_; }

 private:
  Vector observation() const {
    Vector o(2);
    o << x_, v_;
    return o;
  }

  double dt_, start_range_, max_accel_;
  double x_ = 0.0, v_ = 0.0;
};

}  // namespace balance::ddpg
