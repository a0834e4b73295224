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

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "balance/control.hpp"
#include "balance/dynamics.hpp"
#include "balance/filter.hpp"

using namespace balance;

TEST_CASE("PD gains follow the actuator table") {
  const PdGains g;
  CHECK(g.kp == JointVector(3160, 2580, 1080, 720));
  CHECK(g.kd == JointVector(300, 150, 70, 60));
  const ControlSchedule s;
  CHECK(s.physics_steps_per_action() == 40);
  CHECK(s.physics_steps_per_llc() == 1);
  CHECK(s.feedback_cutoff_hz == 50.0);
}

TEST_CASE("pd_torque hand examples and clamping") {
  const PdGains g;
  const JointVector lim = JointVector::Constant(500.0);
  const JointVector zero = JointVector::Zero();
  CHECK(pd_torque(g, zero, zero, zero, lim) == zero);

  const JointVector u = pd_torque(g, JointVector(0.1, 0, 0, 0), zero, zero, lim);
  CHECK(u[0] == doctest::Approx(316.0));
  CHECK(u.tail<3>() == JointVector::Zero().tail<3>());

  const JointVector v = pd_torque(g, zero, zero, JointVector(0, 1, 0, 0), lim);
  CHECK(v[1] == doctest::Approx(-150.0));

  const JointVector big = pd_torque(g, JointVector(1, -1, 1, -1), zero, zero, lim);
  CHECK(big == JointVector(500, -500, 500, -500));
}

TEST_CASE("zero-length window leaves the state unchanged") {
  const BipedModel m = build_default_model();
  Simulation sim{m, nominal_state(m), std::nullopt, 1e-3};
  LowLevelController llc(m);
  const BipedState before = sim.state;
  const BipedState after = run_llc_window(sim, llc, JointVector::Constant(0.2), 0);
  CHECK(after.q == before.q);
  CHECK(after.qd == before.qd);
  CHECK(after.time == before.time);
}

TEST_CASE("holding the current pose of a stable stance") {
  const BipedModel m = build_default_model();
  for (const JointVector pose : {JointVector(0, 0, 0, 0), JointVector(0.02, -0.05, 0.03, 0.0)}) {
    BipedState s0 = nominal_state(m);
    s0.q.tail<kNumJoints>() = pose;
    Simulation sim{m, s0, std::nullopt, 1e-3};
    LowLevelController llc(m);
    const BipedState end = run_llc_window(sim, llc, pose, 2000);
    for (std::size_t j = 0; j < kNumJoints; ++j) CHECK(std::abs(end.q[kFirstJoint + j] - pose[j]) < 0.02);
  }
}

TEST_CASE("knee step response with gravity and contact off") {
  BipedModel m = build_default_model();
  m.gravity = 0.0;
  m.contact.enabled = false;
  BipedState s0 = nominal_state(m);
  s0.q[kFirstJoint + 1] = -0.5;
  s0.contact = ContactState{};
  Simulation sim{m, s0, std::nullopt, 1e-3};
  LowLevelController llc(m);
  const JointVector target(0.0, -0.4, 0.0, 0.0);
  double peak = -1e9;
  double settled_at = -1.0;
  run_llc_window(sim, llc, target, 2000, [&](const BipedState& s, const JointVector&) {
    const double knee = s.q[kFirstJoint + 1];
    peak = std::max(peak, knee);
    const bool inside = std::abs(knee - (-0.4)) <= 0.01;
    if (inside && settled_at < 0) settled_at = s.time;
    if (!inside) settled_at = -1.0;
  });
  MESSAGE("knee settled at " << settled_at << " s, peak " << peak);
  CHECK(settled_at >= 0.0);
  CHECK(settled_at <= 1.0);
  CHECK((peak - (-0.4)) / 0.1 < 0.5);
}

TEST_CASE("feedback is filtered and torques stay inside the limits") {
  const BipedModel m = build_default_model();
  BipedState s0 = nominal_state(m);
  Simulation sim{m, s0, ExternalPush{600.0, 0.0, 0.1}, 1e-3};
  LowLevelController llc(m);
  // Replay the same feedback path by hand from the observed states.
  std::array<LowPassFilter, kNumJoints> fa, fr;
  for (std::size_t j = 0; j < kNumJoints; ++j) fa[j] = fr[j] = LowPassFilter(50.0, 1000.0);
  BipedState prev = sim.state;
  const JointVector target(0.1, -0.2, 0.1, 0.0);
  int checked = 0;
  run_llc_window(sim, llc, target, 400, [&](const BipedState& s, const JointVector& tau) {
    JointVector ang, rate;
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      ang[j] = fa[j].step(prev.q[kFirstJoint + j]);
      rate[j] = fr[j].step(prev.qd[kFirstJoint + j]);
    }
    const JointVector expected = pd_torque(PdGains{}, target, ang, rate, torque_limits(m));
    REQUIRE((tau - expected).cwiseAbs().maxCoeff() < 1e-9);
    REQUIRE(tau.cwiseAbs().maxCoeff() <= 500.0);
    prev = s;
    ++checked;
  });
  CHECK(checked == 400);
}

TEST_CASE("rate contract: 40 LLC ticks per action, no drift over 60 s") {
  const BipedModel m = build_default_model();
  Simulation sim{m, nominal_state(m), std::nullopt, 1e-3};
  LowLevelController llc(m);
  const ControlSchedule sched;
  long ticks = 0;
  for (int a = 0; a < 60 * sched.hlc_hz; ++a) {
    long window = 0;
    run_llc_window(sim, llc, JointVector::Zero(), sched.physics_steps_per_action(),
                   [&](const BipedState&, const JointVector&) { ++window; });
    REQUIRE(window == 40);
    ticks += window;
  }
  CHECK(ticks == 60000);
  CHECK(sim.state.time == doctest::Approx(60.0).epsilon(1e-9));
}

TEST_CASE("gain and schedule validation") {
  PdGains g;
  g.kp[0] = -1.0;
  CHECK_THROWS(g.validate());
  ControlSchedule s;
  s.hlc_hz = 0;
  CHECK_THROWS(s.validate());
}
