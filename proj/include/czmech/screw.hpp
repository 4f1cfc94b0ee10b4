#pragma once

// Sliders (bound resultant/torque pairs), their reductions and rebasing,
// wrench/twist stackings, alternant maps and dual vectors/pairs in spatial
// dimensions 2, 3 and 4, and weighted screw totals.
//
// Conventions, fixed once for the whole library:
//   * a slider is (resultant p, torque q) bound at a point x;
//   * reduction at y leaves p alone and transports the torque by
//       q_y = q_x + alternant(x - y, p)        (3D: q_y = q_x + (x-y) x p),
//     so a bound force's moment about y is the usual (x - y) x p;
//   * alternant(r, p) is the compact (dual) representation of the skew
//     tensor p (x) r - r (x) p.

#include "czmech/numerics.hpp"

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace czmech {

template <int N>
inline constexpr int torque_dim_v = (N == 2) ? 1 : (N == 3) ? 3 : 8;

template <int N>
using VecN = Eigen::Matrix<double, N, 1>;

/// Compact torque representation: scalar (n=2), 3-vector (n=3), or the
/// canonical-basis 8-vector col{w1,w2,w3,0,v1,v2,v3,0} of a 4D dual pair.
template <int N>
using Torque = Eigen::Matrix<double, torque_dim_v<N>, 1>;

inline Mat3 cross_matrix(const Vec3& r) {
  Mat3 m;
  m << 0.0, -r.z(), r.y(),
       r.z(), 0.0, -r.x(),
       -r.y(), r.x(), 0.0;
  return m;
}

/// Skew 2nd-order tensor stored by its dual data, so antisymmetry holds by
/// construction. N = 3 stores one axial vector; N = 4 stores the dual pair
/// (omega, varpi) of the canonical-basis block pattern.
template <int N>
class SkewTensor;

template <>
class SkewTensor<2> {
public:
  SkewTensor() : s_(0.0) {}
  explicit SkewTensor(double s) : s_(s) {}

  static SkewTensor from_matrix(const Mat2& m, double tol = 1e-12) {
    const double scale = std::max(1.0, m.norm());
    if ((m + m.transpose()).norm() > tol * scale)
      throw std::invalid_argument("SkewTensor<2>: matrix is not antisymmetric");
    return SkewTensor(m(1, 0));
  }

  double dual() const { return s_; }
  Mat2 matrix() const {
    Mat2 m;
    m << 0.0, -s_, s_, 0.0;
    return m;
  }

private:
  double s_;
};

template <>
class SkewTensor<3> {
public:
  SkewTensor() : axial_(Vec3::Zero()) {}
  explicit SkewTensor(const Vec3& axial) : axial_(axial) {}

  /// Reads a 3x3 matrix expected to be antisymmetric; rejects violations
  /// beyond `tol` instead of silently symmetrizing.
  static SkewTensor from_matrix(const Mat3& m, double tol = 1e-12) {
    const double scale = std::max(1.0, m.norm());
    if ((m + m.transpose()).norm() > tol * scale)
      throw std::invalid_argument("SkewTensor<3>: matrix is not antisymmetric");
    return SkewTensor(Vec3(m(2, 1), m(0, 2), m(1, 0)));
  }

  const Vec3& dual() const { return axial_; }
  Mat3 matrix() const { return cross_matrix(axial_); }
  Vec3 operator*(const Vec3& u) const { return axial_.cross(u); }

private:
  Vec3 axial_;
};

template <>
class SkewTensor<4> {
public:
  SkewTensor() : omega_(Vec3::Zero()), varpi_(Vec3::Zero()) {}
  SkewTensor(const Vec3& omega, const Vec3& varpi) : omega_(omega), varpi_(varpi) {}

  static SkewTensor from_matrix(const Mat4& m, double tol = 1e-12) {
    const double scale = std::max(1.0, m.norm());
    if ((m + m.transpose()).norm() > tol * scale)
      throw std::invalid_argument("SkewTensor<4>: matrix is not antisymmetric");
    return SkewTensor(Vec3(m(2, 1), m(0, 2), m(1, 0)),
                      Vec3(m(0, 3), m(1, 3), m(2, 3)));
  }

  const Vec3& omega() const { return omega_; }
  const Vec3& varpi() const { return varpi_; }

  Mat4 matrix() const {
    Mat4 m = Mat4::Zero();
    m.topLeftCorner<3, 3>() = cross_matrix(omega_);
    m.block<3, 1>(0, 3) = varpi_;
    m.block<1, 3>(3, 0) = -varpi_.transpose();
    return m;
  }

private:
  Vec3 omega_;
  Vec3 varpi_;
};

inline Vec3 dual_vector(const SkewTensor<3>& s) { return s.dual(); }
inline Vec3 dual_vector(const Mat3& m) { return SkewTensor<3>::from_matrix(m).dual(); }

/// Dual pair of a skew 4x4 tensor as two 4-vectors whose 4th canonical-basis
/// components are exactly zero.
inline std::pair<Vec4, Vec4> dual_pair_4d(const SkewTensor<4>& s) {
  Vec4 omega = Vec4::Zero(), varpi = Vec4::Zero();
  omega.head<3>() = s.omega();
  varpi.head<3>() = s.varpi();
  return {omega, varpi};
}

inline Torque<4> torque4(const Vec3& omega, const Vec3& varpi) {
  Torque<4> q = Torque<4>::Zero();
  q.segment<3>(0) = omega;
  q.segment<3>(4) = varpi;
  return q;
}

/// Checks the structural zeros of a canonical 4D torque stacking.
inline void validate_torque4(const Torque<4>& q) {
  if (q[3] != 0.0 || q[7] != 0.0)
    throw std::invalid_argument("Torque<4>: components 4 and 8 must be exactly zero");
}

inline SkewTensor<4> skew_of_torque4(const Torque<4>& q) {
  validate_torque4(q);
  return SkewTensor<4>(q.segment<3>(0), q.segment<3>(4));
}

inline Torque<4> torque_of_skew(const SkewTensor<4>& s) { return torque4(s.omega(), s.varpi()); }

/// Dual representation of p (x) r - r (x) p.
template <int N>
Torque<N> alternant(const VecN<N>& r, const VecN<N>& p) {
  if constexpr (N == 2) {
    Torque<2> q;
    q[0] = r.x() * p.y() - r.y() * p.x();
    return q;
  } else if constexpr (N == 3) {
    return r.cross(p);
  } else {
    const Vec3 r3 = r.template head<3>(), p3 = p.template head<3>();
    const Vec3 omega = r3.cross(p3);
    const Vec3 varpi(r[3] * p[0] - r[0] * p[3],
                     r[3] * p[1] - r[1] * p[3],
                     r[3] * p[2] - r[2] * p[3]);
    return torque4(omega, varpi);
  }
}

/// The matrix form of the alternant, mapping p to alternant(r, p): the cross
/// matrix for n = 3, the 1x2 row [-r2, r1] for n = 2, and the 8x4 block
/// display for n = 4.
template <int N>
Eigen::Matrix<double, torque_dim_v<N>, N> reduction_matrix(const VecN<N>& r) {
  Eigen::Matrix<double, torque_dim_v<N>, N> m;
  if constexpr (N == 2) {
    m << -r.y(), r.x();
  } else if constexpr (N == 3) {
    m = cross_matrix(r);
  } else {
    m.setZero();
    m.template topLeftCorner<3, 3>() = cross_matrix(r.template head<3>());
    m(4, 0) = r[3];
    m(5, 1) = r[3];
    m(6, 2) = r[3];
    m(4, 3) = -r[0];
    m(5, 3) = -r[1];
    m(6, 3) = -r[2];
  }
  return m;
}

/// A resultant/torque pair bound at a base point.
template <int N>
struct Slider {
  VecN<N> resultant = VecN<N>::Zero();
  Torque<N> torque = Torque<N>::Zero();
  VecN<N> base = VecN<N>::Zero();

  static Slider homogeneous(const VecN<N>& p, const VecN<N>& base) {
    return {p, Torque<N>::Zero(), base};
  }
  bool is_homogeneous(double tol = 0.0) const { return torque.norm() <= tol; }
};

/// Wrench stacking [p; q] evaluated at a reduction point.
template <int N>
struct WrenchReduction {
  VecN<N> resultant = VecN<N>::Zero();
  Torque<N> torque = Torque<N>::Zero();
  VecN<N> point = VecN<N>::Zero();

  Eigen::Matrix<double, N + torque_dim_v<N>, 1> stacked() const {
    Eigen::Matrix<double, N + torque_dim_v<N>, 1> out;
    out.template head<N>() = resultant;
    out.template tail<torque_dim_v<N>>() = torque;
    return out;
  }
};

/// Twist stacking [q; p] at a reduction point; same data, swapped blocks.
template <int N>
struct TwistReduction {
  Torque<N> torque = Torque<N>::Zero();
  VecN<N> resultant = VecN<N>::Zero();
  VecN<N> point = VecN<N>::Zero();

  Eigen::Matrix<double, N + torque_dim_v<N>, 1> stacked() const {
    Eigen::Matrix<double, N + torque_dim_v<N>, 1> out;
    out.template head<torque_dim_v<N>>() = torque;
    out.template tail<N>() = resultant;
    return out;
  }
};

template <int N, typename Derived>
WrenchReduction<N> reduce(const Slider<N>& s, const Eigen::MatrixBase<Derived>& y_expr) {
  const VecN<N> y = y_expr;
  return {s.resultant, Torque<N>(s.torque + alternant<N>(VecN<N>(s.base - y), s.resultant)), y};
}

/// Rebinds the slider at z; reductions are unchanged for every probe point.
template <int N, typename Derived>
Slider<N> rebase(const Slider<N>& s, const Eigen::MatrixBase<Derived>& z_expr) {
  const VecN<N> z = z_expr;
  const WrenchReduction<N> at_z = reduce(s, z);
  return {at_z.resultant, at_z.torque, z};
}

template <int N>
TwistReduction<N> twist_of(const WrenchReduction<N>& w) {
  return {w.torque, w.resultant, w.point};
}

template <int N>
WrenchReduction<N> wrench_of(const TwistReduction<N>& t) {
  return {t.resultant, t.torque, t.point};
}

template <int N>
struct ScrewTotal {
  WrenchReduction<N> total;
  Torque<N> intrinsic_torque = Torque<N>::Zero();   // sum of base torques
  Torque<N> resultant_torque = Torque<N>::Zero();   // transported moment part
};

template <int N>
struct WeightedSlider {
  double weight = 1.0;
  Slider<N> slider;
};

/// Weighted total of sliders reduced at y, with the torque split into its
/// intrinsic and resultant parts (their sum is the total torque).
template <int N, typename Derived>
ScrewTotal<N> screw_total(std::span<const WeightedSlider<N>> items,
                          const Eigen::MatrixBase<Derived>& y_expr) {
  const VecN<N> y = y_expr;
  std::vector<VecN<N>> ps;
  std::vector<Torque<N>> intr, res;
  ps.reserve(items.size());
  intr.reserve(items.size());
  res.reserve(items.size());
  for (const auto& [w, s] : items) {
    if (!std::isfinite(w)) throw std::invalid_argument("screw_total: non-finite weight");
    ps.push_back(VecN<N>(w * s.resultant));
    intr.push_back(Torque<N>(w * s.torque));
    res.push_back(Torque<N>(w * alternant<N>(VecN<N>(s.base - y), s.resultant)));
  }
  ScrewTotal<N> out;
  out.intrinsic_torque = ps.empty() ? Torque<N>::Zero() : pairwise_sum<Torque<N>>(intr);
  out.resultant_torque = ps.empty() ? Torque<N>::Zero() : pairwise_sum<Torque<N>>(res);
  out.total.resultant = ps.empty() ? VecN<N>::Zero() : pairwise_sum<VecN<N>>(ps);
  out.total.torque = out.intrinsic_torque + out.resultant_torque;
  out.total.point = y;
  return out;
}

template <int N, typename Derived>
ScrewTotal<N> screw_total(const std::vector<WeightedSlider<N>>& items,
                          const Eigen::MatrixBase<Derived>& y) {
  return screw_total(std::span<const WeightedSlider<N>>(items), y);
}

using Slider2 = Slider<2>;
using Slider3 = Slider<3>;
using Slider4 = Slider<4>;
using WrenchReduction3 = WrenchReduction<3>;
using TwistReduction3 = TwistReduction<3>;

}  // namespace czmech
