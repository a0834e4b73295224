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

#include "balance/dynamics.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>

namespace balance {
namespace {

using PointJacobian = Eigen::Matrix<double, 2, kNumDofs>;

Vec2 rotate(double angle, const Vec2& local) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {local.x() * c + local.y() * s, -local.x() * s + local.y() * c};
}

/// d/d(angle) of a rotated vector.
Vec2 perp(const Vec2& w) { return {w.y(), -w.x()}; }

struct Frames {
  std::array<double, kNumLinks> angle{};
  std::array<double, kNumLinks> omega{};
  std::array<Vec2, kNumLinks> joint{};  // proximal joint of each link
  std::array<Vec2, kNumLinks> com{};
};

Frames compute_frames(const BipedModel& model, const GenVector& q, const GenVector& qd) {
  Frames f;
  const Vec2 base(q[kFootX], q[kFootZ]);
  f.angle[0] = q[kFootPitch];
  f.omega[0] = qd[kFootPitch];
  f.joint[0] = base;
  for (std::size_t i = 1; i < kNumLinks; ++i) {
    f.angle[i] = f.angle[i - 1] + q[kFirstJoint + i - 1];
    f.omega[i] = f.omega[i - 1] + qd[kFirstJoint + i - 1];
  }
  f.joint[1] = base;
  for (std::size_t i = 2; i < kNumLinks; ++i) {
    f.joint[i] = f.joint[i - 1] + rotate(f.angle[i - 1], Vec2(0.0, model.links[i - 1].length));
  }
  for (std::size_t i = 0; i < kNumLinks; ++i) {
    const auto& l = model.links[i];
    f.com[i] = f.joint[i] + rotate(f.angle[i], Vec2(l.com_x, l.com_z));
  }
  return f;
}

PointJacobian point_jacobian(const Frames& f, std::size_t link, const Vec2& p) {
  PointJacobian J = PointJacobian::Zero();
  J(0, kFootX) = 1.0;
  J(1, kFootZ) = 1.0;
  J.col(kFootPitch) = perp(p - f.joint[0]);
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    if (link >= j + 1) J.col(kFirstJoint + j) = perp(p - f.joint[j + 1]);
  }
  return J;
}

/// Angular-velocity Jacobian row of a link.
Eigen::Matrix<double, 1, kNumDofs> angular_jacobian(std::size_t link) {
  Eigen::Matrix<double, 1, kNumDofs> j = Eigen::Matrix<double, 1, kNumDofs>::Zero();
  j(kFootPitch) = 1.0;
  for (std::size_t k = 0; k < link; ++k) j(kFirstJoint + k) = 1.0;
  return j;
}

/// Point acceleration at zero generalized acceleration (centripetal terms).
Vec2 bias_acceleration(const Frames& f, std::size_t link, const Vec2& p) {
  Vec2 a = Vec2::Zero();
  for (std::size_t k = 1; k < link; ++k) {
    a -= f.omega[k] * f.omega[k] * (f.joint[k + 1] - f.joint[k]);
  }
  a -= f.omega[link] * f.omega[link] * (p - f.joint[link]);
  return a;
}

Vec2 sole_local(const BipedModel& model, Pivot p) {
  return p == Pivot::Heel ? Vec2(-model.foot.heel, -model.foot.thickness)
                          : Vec2(model.foot.toe, -model.foot.thickness);
}

GenMatrix assemble_mass_matrix(const BipedModel& model, const Frames& f) {
  GenMatrix M = GenMatrix::Zero();
  for (std::size_t i = 0; i < kNumLinks; ++i) {
    const auto& l = model.links[i];
    const PointJacobian J = point_jacobian(f, i, f.com[i]);
    const auto jw = angular_jacobian(i);
    M.noalias() += l.mass * J.transpose() * J;
    M.noalias() += l.inertia * jw.transpose() * jw;
  }
  for (std::size_t j = 0; j < kNumJoints; ++j) M(kFirstJoint + j, kFirstJoint + j) += model.joints[j].armature;
  return M;
}

// No physical motion of this robot comes near this speed; an unstable
// integration passes it long before overflowing to infinity.
constexpr double kDivergentSpeed = 1.0e6;

bool all_finite(const GenVector& v) { return v.allFinite(); }

/// Penalty contact with a stiction spring anchored where the point touched
/// down; the anchor slides when the Coulomb bound is reached.
ContactPoint contact_force(const ContactParams& cp, const ContactPoint& prev, const Vec2& p,
                           const Vec2& v) {
  ContactPoint out;
  const double depth = -p.y();
  if (!cp.enabled || depth < 0.0) return out;
  out.active = true;
  out.penetration = depth;
  out.normal = std::max(0.0, cp.stiffness * depth - cp.damping * v.y());
  const double anchor = prev.active ? prev.anchor_x : p.x();
  double t = -cp.stiffness * (p.x() - anchor) - cp.damping * v.x();
  const double bound = cp.friction * out.normal;
  out.anchor_x = anchor;
  if (std::abs(t) > bound) {
    t = std::copysign(bound, t);
    out.anchor_x = p.x() + t / cp.stiffness;
  }
  out.tangential = t;
  return out;
}

/// Inelastic joint-limit impulses: joints that would leave their range this
/// step get their velocity set so they land exactly on the limit. Small
/// active-set loop; a limit whose impulse would pull outward is released.
void apply_joint_limits(const BipedModel& model, const GenVector& q, const Eigen::LDLT<GenMatrix>& ldlt,
                        GenVector& qd, double dt) {
  const GenVector free_qd = qd;
  std::array<int, kNumJoints> side{};  // +1 upper, -1 lower, 0 free
  std::array<bool, kNumJoints> released{};

  for (std::size_t iter = 0; iter < 2 * kNumJoints + 1; ++iter) {
    bool added = false;
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      if (side[j] != 0 || released[j]) continue;
      const auto& jp = model.joints[j];
      const double qn = q[kFirstJoint + j] + dt * qd[kFirstJoint + j];
      if (qn > jp.upper) side[j] = 1, added = true;
      if (qn < jp.lower) side[j] = -1, added = true;
    }
    if (!added) return;

    bool released_any = true;
    while (released_any) {
      released_any = false;
      std::array<std::size_t, kNumJoints> rows{};
      Eigen::Index n = 0;
      for (std::size_t j = 0; j < kNumJoints; ++j) {
        if (side[j] != 0) rows[static_cast<std::size_t>(n++)] = j;
      }
      if (n == 0) {
        qd = free_qd;
        break;
      }
      Eigen::MatrixXd St = Eigen::MatrixXd::Zero(kNumDofs, n);
      Eigen::VectorXd rhs(n);
      for (Eigen::Index k = 0; k < n; ++k) {
        const std::size_t j = rows[static_cast<std::size_t>(k)];
        const auto& jp = model.joints[j];
        const double limit = side[j] > 0 ? jp.upper : jp.lower;
        St(static_cast<Eigen::Index>(kFirstJoint + j), k) = 1.0;
        rhs[k] = (limit - q[kFirstJoint + j]) / dt - free_qd[kFirstJoint + j];
      }
      const Eigen::MatrixXd MinvSt = ldlt.solve(St);
      const Eigen::MatrixXd A = St.transpose() * MinvSt;
      const Eigen::VectorXd lambda = A.ldlt().solve(rhs);
      qd = free_qd + MinvSt * lambda;
      for (Eigen::Index k = 0; k < n; ++k) {
        const std::size_t j = rows[static_cast<std::size_t>(k)];
        if (side[j] * lambda[k] > 0.0) {
          side[j] = 0;
          released[j] = true;
          released_any = true;
        }
      }
    }
  }
}

}  // namespace

BodyKinematics link_kinematics(const BipedModel& model, const BipedState& state) {
  const Frames f = compute_frames(model, state.q, state.qd);
  BodyKinematics out;
  for (std::size_t i = 0; i < kNumLinks; ++i) {
    out[i].joint = f.joint[i];
    out[i].com = f.com[i];
    out[i].angle = f.angle[i];
    out[i].angular_velocity = f.omega[i];
    out[i].com_velocity = point_jacobian(f, i, f.com[i]) * state.qd;
  }
  return out;
}

Vec2 sole_point(const BipedModel& model, const BipedState& state, Pivot p) {
  return Vec2(state.q[kFootX], state.q[kFootZ]) + rotate(state.q[kFootPitch], sole_local(model, p));
}

GenMatrix mass_matrix(const BipedModel& model, const GenVector& q) {
  return assemble_mass_matrix(model, compute_frames(model, q, GenVector::Zero()));
}

ComState com_state(const BipedModel& model, const BipedState& state) {
  const auto kin = link_kinematics(model, state);
  ComState c;
  double mass = 0.0;
  for (std::size_t i = 0; i < kNumLinks; ++i) {
    const double m = model.links[i].mass;
    c.x += m * kin[i].com.x();
    c.z += m * kin[i].com.y();
    c.xd += m * kin[i].com_velocity.x();
    c.zd += m * kin[i].com_velocity.y();
    mass += m;
  }
  c.x /= mass;
  c.z /= mass;
  c.xd /= mass;
  c.zd /= mass;
  return c;
}

double mechanical_energy(const BipedModel& model, const BipedState& state) {
  const Frames f = compute_frames(model, state.q, state.qd);
  const GenMatrix M = assemble_mass_matrix(model, f);
  double e = 0.5 * state.qd.dot(M * state.qd);
  for (std::size_t i = 0; i < kNumLinks; ++i) e += model.links[i].mass * model.gravity * f.com[i].y();
  return e;
}

BipedState nominal_state(const BipedModel& model) {
  BipedState s;
  s.q[kFootZ] = model.foot.thickness;
  for (auto p : {Pivot::Heel, Pivot::Toe}) {
    auto& c = s.contact.at(p);
    c.active = model.contact.enabled;
    c.anchor_x = sole_point(model, s, p).x();
  }
  return s;
}

JointVector clamp_torques(const BipedModel& model, const JointVector& torques) {
  JointVector out;
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    const double lim = model.joints[j].torque_limit;
    out[static_cast<Eigen::Index>(j)] = std::clamp(torques[static_cast<Eigen::Index>(j)], -lim, lim);
  }
  return out;
}

BipedState step(const BipedModel& model, const BipedState& state, const JointVector& joint_torques,
                const std::optional<ExternalPush>& push, double dt) {
  if (!joint_torques.allFinite()) throw NonFiniteError("non-finite joint torque");
  const JointVector tau = clamp_torques(model, joint_torques);

  const Frames f = compute_frames(model, state.q, state.qd);
  const GenMatrix M = assemble_mass_matrix(model, f);

  GenVector force = GenVector::Zero();
  const Vec2 gravity(0.0, -model.gravity);
  for (std::size_t i = 0; i < kNumLinks; ++i) {
    const double m = model.links[i].mass;
    const PointJacobian J = point_jacobian(f, i, f.com[i]);
    force.noalias() += J.transpose() * (m * gravity - m * bias_acceleration(f, i, f.com[i]));
  }
  force.tail<kNumJoints>() += tau;

  BipedState next;
  for (auto p : {Pivot::Heel, Pivot::Toe}) {
    const Vec2 pos = f.joint[0] + rotate(f.angle[0], sole_local(model, p));
    const PointJacobian J = point_jacobian(f, 0, pos);
    const Vec2 vel = J * state.qd;
    const ContactPoint c = contact_force(model.contact, state.contact.at(p), pos, vel);
    next.contact.at(p) = c;
    if (c.active) force.noalias() += J.transpose() * Vec2(c.tangential, c.normal);
  }

  if (push && push->active_at(state.time)) {
    const std::size_t pelvis = index(Link::Pelvis);
    const PointJacobian J = point_jacobian(f, pelvis, f.com[pelvis]);
    force.noalias() += J.transpose() * Vec2(push->force, 0.0);
  }

  const Eigen::LDLT<GenMatrix> ldlt(M);
  const GenVector qdd = ldlt.solve(force);

  next.qd = state.qd + dt * qdd;
  apply_joint_limits(model, state.q, ldlt, next.qd, dt);
  next.q = state.q + dt * next.qd;
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    const auto& jp = model.joints[j];
    next.q[kFirstJoint + j] = std::clamp(next.q[kFirstJoint + j], jp.lower, jp.upper);
  }
  next.time = state.time + dt;

  if (!all_finite(next.q) || !all_finite(next.qd) || next.qd.cwiseAbs().maxCoeff() > kDivergentSpeed) {
    throw NonFiniteError("integration diverged at t = " + std::to_string(state.time));
  }
  return next;
}

double foot_torque_ceiling(const BipedModel& model, const BipedState& state, Pivot pivot) {
  if (!state.contact.at(pivot).active) {
    throw PivotInactiveError(pivot == Pivot::Heel ? "heel is not in contact" : "toe is not in contact");
  }
  // With the foot balanced on an edge, the ground reaction carries the body
  // weight and the ankle torque it can resist is that weight times the
  // horizontal lever from the ankle to the edge. Pushing harder rolls the
  // foot further.
  const double ankle_x = state.q[kFootX];
  const Vec2 p = sole_point(model, state, pivot);
  return model.total_mass() * model.gravity * std::abs(p.x() - ankle_x);
}

}  // namespace balance
