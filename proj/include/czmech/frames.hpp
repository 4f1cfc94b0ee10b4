#pragma once

// Frame placements, the 6x6 wrench/twist transformation group, its
// differential generators, angular-velocity extraction, Poisson rotation
// integration, and Galilean boosts.
//
// Frame bookkeeping: a Placement (C, d) maps frame-p coordinates to frame-0
// coordinates, x0 = C xp + d, with d expressed in frame 0. Every velocity
// struct names the frame its components are expressed in; constructors
// establish the cross-frame consistency so callers cannot mix frames.

#include "czmech/numerics.hpp"
#include "czmech/screw.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace czmech {

/// Proper rotation, validated on construction (orthonormality and
/// det = +1 within 1e-10).
class Rotation {
public:
  Rotation() : c_(Mat3::Identity()) {}

  explicit Rotation(const Mat3& c) : c_(c) {
    if ((c.transpose() * c - Mat3::Identity()).norm() > 1e-10)
      throw std::invalid_argument("Rotation: matrix is not orthonormal");
    if (std::abs(c.determinant() - 1.0) > 1e-10)
      throw std::invalid_argument("Rotation: determinant is not +1");
  }

  static Rotation identity() { return Rotation(); }

  /// Rodrigues form; axis need not be normalized.
  static Rotation about_axis(const Vec3& axis, double angle) {
    const double n = axis.norm();
    if (n == 0.0) return Rotation();
    const Mat3 k = cross_matrix(Vec3(axis / n));
    return Rotation(Mat3(Mat3::Identity() + std::sin(angle) * k +
                         (1.0 - std::cos(angle)) * (k * k)));
  }

  const Mat3& matrix() const { return c_; }
  Rotation inverse() const {
    Rotation r;
    r.c_ = c_.transpose();
    return r;
  }
  Vec3 operator*(const Vec3& v) const { return c_ * v; }

  double orthogonality_residual() const {
    return (c_.transpose() * c_ - Mat3::Identity()).norm();
  }

private:
  Mat3 c_;
};

/// Rigid placement of frame p in frame 0.
struct Placement {
  Rotation rotation;        // C_{0,p}
  Vec3 translation = Vec3::Zero();  // d_{0,p}, frame-0 components

  static Placement identity() { return {}; }

  Vec3 to_world(const Vec3& xp) const { return rotation * xp + translation; }
  Vec3 to_body(const Vec3& x0) const { return rotation.inverse() * (x0 - translation); }
};

inline Placement compose(const Placement& a, const Placement& b) {
  return {Rotation(Mat3(a.rotation.matrix() * b.rotation.matrix())),
          Vec3(a.rotation * b.translation + a.translation)};
}

inline Placement invert(const Placement& p) {
  const Rotation ct = p.rotation.inverse();
  return {ct, Vec3(-(ct * p.translation))};
}

/// 6x6 block-swap exchanging the resultant and torque slots.
inline Mat6 block_swap() {
  Mat6 pi = Mat6::Zero();
  pi.topRightCorner<3, 3>() = Mat3::Identity();
  pi.bottomLeftCorner<3, 3>() = Mat3::Identity();
  return pi;
}

/// Wrench transformation of a placement: maps a frame-p wrench reduction at
/// O_p to the frame-0 reduction at O_0. Both block factorizations
/// C^+ D^p and D^0 C^+ are formed and cross-checked.
class WrenchTransform {
public:
  explicit WrenchTransform(const Placement& p) : placement_(p) {
    const Mat3& c = p.rotation.matrix();
    const Vec3 dp = p.rotation.inverse() * p.translation;
    Mat6 via_dp = Mat6::Zero(), via_d0 = Mat6::Zero();
    via_dp.topLeftCorner<3, 3>() = c;
    via_dp.bottomRightCorner<3, 3>() = c;
    via_dp.bottomLeftCorner<3, 3>() = c * cross_matrix(dp);
    via_d0.topLeftCorner<3, 3>() = c;
    via_d0.bottomRightCorner<3, 3>() = c;
    via_d0.bottomLeftCorner<3, 3>() = cross_matrix(p.translation) * c;
    if ((via_dp - via_d0).norm() > 1e-12 * std::max(1.0, via_dp.norm()))
      throw std::invalid_argument("WrenchTransform: factorization mismatch (invalid rotation?)");
    l_ = via_dp;
    factorization_gap_ = (via_dp - via_d0).norm();
  }

  const Mat6& matrix() const { return l_; }
  const Placement& placement() const { return placement_; }
  double factorization_gap() const { return factorization_gap_; }

  WrenchReduction3 operator*(const WrenchReduction3& wp) const {
    const Vec6 out = l_ * wp.stacked();
    return {out.head<3>(), out.tail<3>(), Vec3::Zero()};
  }

private:
  Placement placement_;
  Mat6 l_;
  double factorization_gap_ = 0.0;
};

inline Mat6 wrench_transform(const Placement& p) { return WrenchTransform(p).matrix(); }

/// Twist counterpart: Pi L^wr Pi, mapping frame-p twist reductions at O_p to
/// frame-0 twist reductions at O_0.
inline Mat6 twist_transform(const Placement& p) {
  const Mat6 pi = block_swap();
  return pi * wrench_transform(p) * pi;
}

/// Velocity of frame p relative to frame 0 in both coordinate forms. The
/// body pair (v_p, omega_p) is the quasi-velocity twist at O_p; the spatial
/// pair (v0, omega0) is the same kinematic slider reduced at O_0, i.e.
/// v0 = ddot - omega0 x d, not the raw translation rate.
class FrameVelocity {
public:
  /// From body-frame quasi-velocities.
  static FrameVelocity from_body(const Placement& pl, const Vec3& v_p, const Vec3& omega_p) {
    FrameVelocity fv;
    fv.v_p_ = v_p;
    fv.omega_p_ = omega_p;
    fv.omega_0_ = pl.rotation * omega_p;
    const Vec3 ddot = pl.rotation * v_p;
    fv.v_0_ = ddot - fv.omega_0_.cross(pl.translation);
    fv.translation_rate_ = ddot;
    return fv;
  }

  /// From the frame-0 translation rate ddot and frame-0 angular velocity.
  static FrameVelocity from_spatial(const Placement& pl, const Vec3& ddot, const Vec3& omega_0) {
    FrameVelocity fv;
    fv.omega_0_ = omega_0;
    fv.v_0_ = ddot - omega_0.cross(pl.translation);
    fv.omega_p_ = pl.rotation.inverse() * omega_0;
    fv.v_p_ = pl.rotation.inverse() * ddot;
    fv.translation_rate_ = ddot;
    return fv;
  }

  static FrameVelocity zero() { return FrameVelocity(); }

  const Vec3& v_body() const { return v_p_; }
  const Vec3& omega_body() const { return omega_p_; }
  const Vec3& v_spatial() const { return v_0_; }
  const Vec3& omega_spatial() const { return omega_0_; }
  const Vec3& translation_rate() const { return translation_rate_; }

private:
  FrameVelocity() = default;
  Vec3 v_p_ = Vec3::Zero(), omega_p_ = Vec3::Zero();
  Vec3 v_0_ = Vec3::Zero(), omega_0_ = Vec3::Zero();
  Vec3 translation_rate_ = Vec3::Zero();
};

/// Lower-triangular generator block [[w x, 0], [v x, w x]].
inline Mat6 wrench_generator(const Vec3& v, const Vec3& omega) {
  Mat6 g = Mat6::Zero();
  g.topLeftCorner<3, 3>() = cross_matrix(omega);
  g.bottomRightCorner<3, 3>() = cross_matrix(omega);
  g.bottomLeftCorner<3, 3>() = cross_matrix(v);
  return g;
}

struct Generators {
  Mat6 phi_wrench;  // body-frame: Ldot = L * phi
  Mat6 psi_wrench;  // frame-0:    Ldot = psi * L
  Mat6 phi_twist;   // -phi_wrench^T
  Mat6 psi_twist;   // -psi_wrench^T
};

inline Generators generators(const FrameVelocity& vel) {
  Generators g;
  g.phi_wrench = wrench_generator(vel.v_body(), vel.omega_body());
  g.psi_wrench = wrench_generator(vel.v_spatial(), vel.omega_spatial());
  g.phi_twist = -g.phi_wrench.transpose();
  g.psi_twist = -g.psi_wrench.transpose();
  return g;
}

/// Body-frame angular velocity from C and Cdot; rejects inputs whose
/// C^T Cdot fails antisymmetry beyond 1e-8 (inconsistent derivative).
inline Vec3 angular_velocity(const Rotation& c, const Mat3& cdot) {
  const Mat3 w = c.matrix().transpose() * cdot;
  const double scale = std::max(1.0, w.norm());
  if ((w + w.transpose()).norm() > 1e-8 * scale)
    throw std::invalid_argument("angular_velocity: C^T*Cdot is not antisymmetric");
  const Mat3 skew = 0.5 * (w - w.transpose());
  return Vec3(skew(2, 1), skew(0, 2), skew(1, 0));
}

/// Integrates Cdot = C wx(t) with an RK4 step followed by projection onto
/// the nearest rotation; the returned trajectory has steps+1 entries and
/// every entry satisfies the orthogonality bound 1e-12.
inline std::vector<Rotation> integrate_rotation(const Rotation& c0,
                                                const std::function<Vec3(double)>& omega_p,
                                                double h, int steps) {
  if (!(h > 0.0)) throw std::invalid_argument("integrate_rotation: h must be positive");
  std::vector<Rotation> traj;
  traj.reserve(static_cast<std::size_t>(steps) + 1);
  traj.push_back(c0);
  Mat3 c = c0.matrix();
  double t = 0.0;
  auto rhs = [&omega_p](double tt, const Mat3& m) -> Mat3 {
    return m * cross_matrix(omega_p(tt));
  };
  for (int i = 0; i < steps; ++i) {
    c = rk4_step(rhs, c, t, h);
    c = nearest_rotation(c);
    t += h;
    traj.push_back(Rotation(c));
  }
  return traj;
}

/// Placement of a uniformly translating frame: (C, d0 + v0 t).
inline Placement galilean_boost(const Vec3& d0, const Vec3& v0, const Rotation& c, double t) {
  return {c, Vec3(d0 + v0 * t)};
}

}  // namespace czmech
