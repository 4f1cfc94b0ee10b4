#pragma once

// The four multiplicative groups of linear isotropic tensor maps (3D/2D x
// general/symmetric): application, coefficient-level composition, determinant
// conditions, closed-form inverses; plus strain evolution and Hooke-class
// stress evaluation.
//
// Composition is done at coefficient level through each case's structure
// matrix R (the group-theoretic content); applying maps and composing the
// appliers exists in the tests as the independent oracle only.

#include "czmech/numerics.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace czmech {

/// Singular isotropic map; the message names the vanished determinant factor.
class SingularMapError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

namespace detail {
/// |det| threshold scaled by coefficient magnitude to the homogeneity degree
/// of the determinant formula.
inline double det_threshold(double coeff_scale, int degree) {
  double s = std::max(coeff_scale, 1e-30);
  double t = 1.0;
  for (int i = 0; i < degree; ++i) t *= s;
  return 1e-12 * t;
}
}  // namespace detail

inline Mat2 tilde2() {
  Mat2 t;
  t << 0.0, -1.0, 1.0, 0.0;
  return t;
}

// ---------------------------------------------------------------------------
// 3D general: P(Z) = p0 I + p1 tr(Z) I + p2 Z + p3 Z^T
// ---------------------------------------------------------------------------
struct IsoMap3 {
  double p0 = 0.0, p1 = 0.0, p2 = 1.0, p3 = 0.0;

  static IsoMap3 identity() { return {0.0, 0.0, 1.0, 0.0}; }

  double coeff_scale() const {
    return std::max({std::abs(p0), std::abs(p1), std::abs(p2), std::abs(p3)});
  }

  /// det of the 4x4 composition matrix: (3p1+p2+p3)(p2^2-p3^2).
  double determinant() const { return (3 * p1 + p2 + p3) * (p2 * p2 - p3 * p3); }

  Mat3 apply(const Mat3& z) const {
    return p0 * Mat3::Identity() + p1 * z.trace() * Mat3::Identity() + p2 * z +
           p3 * z.transpose();
  }

  /// Structure matrix: composing outer coefficients q through an inner map p
  /// gives r = R(p) q.
  Mat4 structure_matrix() const {
    Mat4 r;
    r << 1, 3 * p0, p0, p0,
         0, 3 * p1 + p2 + p3, p1, p1,
         0, 0, p2, p3,
         0, 0, p3, p2;
    return r;
  }
};

inline bool is_well_defined(const IsoMap3& m, double* det = nullptr) {
  const double d = m.determinant();
  if (det) *det = d;
  return std::abs(d) > detail::det_threshold(m.coeff_scale(), 3);
}

/// Coefficient-level composition: apply(compose(q, p), Z) = apply(q, apply(p, Z)).
inline IsoMap3 compose(const IsoMap3& outer, const IsoMap3& inner) {
  const Vec4 q(outer.p0, outer.p1, outer.p2, outer.p3);
  const Vec4 r = inner.structure_matrix() * q;
  return {r[0], r[1], r[2], r[3]};
}

inline IsoMap3 invert(const IsoMap3& m) {
  const double trace_factor = 3 * m.p1 + m.p2 + m.p3;
  const double sym_factor = m.p2 * m.p2 - m.p3 * m.p3;
  const double scale = m.coeff_scale();
  if (std::abs(trace_factor) <= detail::det_threshold(scale, 1))
    throw SingularMapError("IsoMap3: 3*p1 + p2 + p3 vanishes");
  if (std::abs(sym_factor) <= detail::det_threshold(scale, 2))
    throw SingularMapError("IsoMap3: p2^2 - p3^2 vanishes");
  return {-m.p0 / trace_factor,
          -m.p1 / ((m.p2 + m.p3) * trace_factor),
          m.p2 / sym_factor,
          -m.p3 / sym_factor};
}

// ---------------------------------------------------------------------------
// 3D symmetric: P(Z) = p0 I + p1 tr(Z) I + p2 Z, Z symmetric
// ---------------------------------------------------------------------------
struct IsoMapSym3 {
  double p0 = 0.0, p1 = 0.0, p2 = 1.0;

  static IsoMapSym3 identity() { return {0.0, 0.0, 1.0}; }
  double coeff_scale() const { return std::max({std::abs(p0), std::abs(p1), std::abs(p2)}); }
  double determinant() const { return (3 * p1 + p2) * p2; }

  Mat3 apply(const Mat3& z) const {
    if ((z - z.transpose()).norm() > 1e-10 * std::max(1.0, z.norm()))
      throw std::invalid_argument("IsoMapSym3: argument must be symmetric");
    return p0 * Mat3::Identity() + p1 * z.trace() * Mat3::Identity() + p2 * z;
  }

  Mat3 structure_matrix() const {
    Mat3 r;
    r << 1, 3 * p0, p0,
         0, 3 * p1 + p2, p1,
         0, 0, p2;
    return r;
  }
};

inline bool is_well_defined(const IsoMapSym3& m, double* det = nullptr) {
  const double d = m.determinant();
  if (det) *det = d;
  return std::abs(d) > detail::det_threshold(m.coeff_scale(), 2);
}

inline IsoMapSym3 compose(const IsoMapSym3& outer, const IsoMapSym3& inner) {
  const Vec3 r = inner.structure_matrix() * Vec3(outer.p0, outer.p1, outer.p2);
  return {r[0], r[1], r[2]};
}

inline IsoMapSym3 invert(const IsoMapSym3& m) {
  const double trace_factor = 3 * m.p1 + m.p2;
  const double scale = m.coeff_scale();
  if (std::abs(trace_factor) <= detail::det_threshold(scale, 1))
    throw SingularMapError("IsoMapSym3: 3*p1 + p2 vanishes");
  if (std::abs(m.p2) <= detail::det_threshold(scale, 1))
    throw SingularMapError("IsoMapSym3: p2 vanishes");
  return {-m.p0 / trace_factor, -m.p1 / (m.p2 * trace_factor), 1.0 / m.p2};
}

// ---------------------------------------------------------------------------
// 2D general:
//   P(Z) = p0 I + pt0 J + p1 tr(Z) I + p2 tr(JZ) I
//          + p3 Z + p4 Z^T + p5 JZ + p6 Z^T J,   J = [[0,-1],[1,0]]
// ---------------------------------------------------------------------------
struct IsoMap2 {
  // Coefficient order everywhere: {p0, pt0, p1, p2, p3, p4, p5, p6}.
  double p0 = 0.0, pt0 = 0.0, p1 = 0.0, p2 = 0.0, p3 = 1.0, p4 = 0.0, p5 = 0.0, p6 = 0.0;

  static IsoMap2 identity() { return {0, 0, 0, 0, 1, 0, 0, 0}; }

  Eigen::Matrix<double, 8, 1> coeffs() const {
    Eigen::Matrix<double, 8, 1> c;
    c << p0, pt0, p1, p2, p3, p4, p5, p6;
    return c;
  }
  static IsoMap2 from_coeffs(const Eigen::Matrix<double, 8, 1>& c) {
    return {c[0], c[1], c[2], c[3], c[4], c[5], c[6], c[7]};
  }

  double coeff_scale() const { return coeffs().cwiseAbs().maxCoeff(); }

  /// det R = -4 [(2p1+p3+p4)(p3-p4) + (2p2+p5-p6)(p5+p6)]^2 [(p3+p4)^2 + (p5-p6)^2]
  double determinant() const {
    const double a = (2 * p1 + p3 + p4) * (p3 - p4) + (2 * p2 + p5 - p6) * (p5 + p6);
    const double b = (p3 + p4) * (p3 + p4) + (p5 - p6) * (p5 - p6);
    return -4.0 * a * a * b;
  }

  Mat2 apply(const Mat2& z) const {
    const Mat2 j = tilde2();
    return p0 * Mat2::Identity() + pt0 * j + p1 * z.trace() * Mat2::Identity() +
           p2 * (j * z).trace() * Mat2::Identity() + p3 * z + p4 * z.transpose() +
           p5 * j * z + p6 * z.transpose() * j;
  }

  Eigen::Matrix<double, 8, 8> structure_matrix() const {
    Eigen::Matrix<double, 8, 8> r;
    r << 1, 0, 2 * p0, -2 * pt0, p0, p0, -pt0, pt0,
         0, 1, 0, 0, pt0, -pt0, p0, p0,
         0, 0, 2 * p1 + p3 + p4, -(p5 + p6), p1, p1, -p6, p6,
         0, 0, 2 * p2 + p5 - p6, p3 - p4, p2, p2, -p4, p4,
         0, 0, 0, 0, p3, p4, p6 - p5 - p2, -p2,
         0, 0, 0, 0, p4, p3, p2, p2 + p5 - p6,
         0, 0, 0, 0, p5, -p6, p1 + p3 + p4, p1,
         0, 0, 0, 0, p6, -p5, p1, p1 + p3 + p4;
    return r;
  }
};

inline bool is_well_defined(const IsoMap2& m, double* det = nullptr) {
  const double d = m.determinant();
  if (det) *det = d;
  return std::abs(d) > detail::det_threshold(m.coeff_scale(), 6);
}

inline IsoMap2 compose(const IsoMap2& outer, const IsoMap2& inner) {
  return IsoMap2::from_coeffs(inner.structure_matrix() * outer.coeffs());
}

/// Closed-form inverse via the block structure of R: the lower-right 4x4
/// yields {q3..q6} from e1, the upper-left 4x4 then gives {q0, qt0, q1, q2}.
inline IsoMap2 invert(const IsoMap2& m) {
  const double scale = m.coeff_scale();
  const double a = (2 * m.p1 + m.p3 + m.p4) * (m.p3 - m.p4) +
                   (2 * m.p2 + m.p5 - m.p6) * (m.p5 + m.p6);
  const double b = (m.p3 + m.p4) * (m.p3 + m.p4) + (m.p5 - m.p6) * (m.p5 - m.p6);
  if (std::abs(a) <= detail::det_threshold(scale, 2))
    throw SingularMapError("IsoMap2: (2p1+p3+p4)(p3-p4) + (2p2+p5-p6)(p5+p6) vanishes");
  if (std::abs(b) <= detail::det_threshold(scale, 2))
    throw SingularMapError("IsoMap2: (p3+p4)^2 + (p5-p6)^2 vanishes");

  const Eigen::Matrix<double, 8, 8> r = m.structure_matrix();
  const Mat4 upper = r.topLeftCorner<4, 4>();
  const Mat4 mixed = r.topRightCorner<4, 4>();
  const Mat4 lower = r.bottomRightCorner<4, 4>();
  const Vec4 q_low = lower.partialPivLu().solve(Vec4(1, 0, 0, 0));
  const Vec4 q_high = -upper.partialPivLu().solve(Vec4(mixed * q_low));
  Eigen::Matrix<double, 8, 1> q;
  q << q_high, q_low;
  return IsoMap2::from_coeffs(q);
}

// ---------------------------------------------------------------------------
// 2D symmetric: P(Z) = p0 I + p1 tr(Z) I + p2 Z + p3 (JZ - ZJ), Z symmetric
// ---------------------------------------------------------------------------
struct IsoMapSym2 {
  double p0 = 0.0, p1 = 0.0, p2 = 1.0, p3 = 0.0;

  static IsoMapSym2 identity() { return {0, 0, 1, 0}; }
  double coeff_scale() const {
    return std::max({std::abs(p0), std::abs(p1), std::abs(p2), std::abs(p3)});
  }
  double determinant() const { return (2 * p1 + p2) * (p2 * p2 + 4 * p3 * p3); }

  Mat2 apply(const Mat2& z) const {
    if ((z - z.transpose()).norm() > 1e-10 * std::max(1.0, z.norm()))
      throw std::invalid_argument("IsoMapSym2: argument must be symmetric");
    const Mat2 j = tilde2();
    return p0 * Mat2::Identity() + p1 * z.trace() * Mat2::Identity() + p2 * z +
           p3 * (j * z - z * j);
  }

  Mat4 structure_matrix() const {
    Mat4 r;
    r << 1, 2 * p0, p0, 0,
         0, 2 * p1 + p2, p1, 2 * p3,
         0, 0, p2, -4 * p3,
         0, 0, p3, p2;
    return r;
  }
};

inline bool is_well_defined(const IsoMapSym2& m, double* det = nullptr) {
  const double d = m.determinant();
  if (det) *det = d;
  return std::abs(d) > detail::det_threshold(m.coeff_scale(), 3);
}

inline IsoMapSym2 compose(const IsoMapSym2& outer, const IsoMapSym2& inner) {
  const Vec4 r = inner.structure_matrix() * Vec4(outer.p0, outer.p1, outer.p2, outer.p3);
  return {r[0], r[1], r[2], r[3]};
}

inline IsoMapSym2 invert(const IsoMapSym2& m) {
  const double scale = m.coeff_scale();
  const double trace_factor = 2 * m.p1 + m.p2;
  const double spin_factor = m.p2 * m.p2 + 4 * m.p3 * m.p3;
  if (std::abs(trace_factor) <= detail::det_threshold(scale, 1))
    throw SingularMapError("IsoMapSym2: 2*p1 + p2 vanishes");
  if (std::abs(spin_factor) <= detail::det_threshold(scale, 2))
    throw SingularMapError("IsoMapSym2: p2^2 + 4*p3^2 vanishes");
  const Vec4 q = m.structure_matrix().partialPivLu().solve(Vec4(0, 0, 1, 0));
  return {q[0], q[1], q[2], q[3]};
}

// ---------------------------------------------------------------------------
// Alternative coefficient basis for the 3D general case:
//   P(Z) = c0 I + c1 tr(Z) I + c_sym (Z + Z^T)/2 + c_skew (Z - Z^T)/2.
// Same span as {I, trZ I, Z, Z^T}; conversion helpers, not a fifth case.
// ---------------------------------------------------------------------------
struct IsoMap3SymSkew {
  double c0 = 0.0, c1 = 0.0, c_sym = 0.0, c_skew = 0.0;
};

inline IsoMap3SymSkew to_sym_skew_basis(const IsoMap3& m) {
  return {m.p0, m.p1, m.p2 + m.p3, m.p2 - m.p3};
}

inline IsoMap3 from_sym_skew_basis(const IsoMap3SymSkew& c) {
  return {c.c0, c.c1, 0.5 * (c.c_sym + c.c_skew), 0.5 * (c.c_sym - c.c_skew)};
}

// ---------------------------------------------------------------------------
// Strain state and Hooke-class stress
// ---------------------------------------------------------------------------

/// Integrated displacement-gradient state; Z is its symmetric part.
struct StrainState {
  Mat3 S = Mat3::Zero();
  Mat3 Sdot = Mat3::Zero();

  Mat3 strain_sym() const { return 0.5 * (S + S.transpose()); }
  Mat3 rate_sym() const { return 0.5 * (Sdot + Sdot.transpose()); }
};

/// Integrates Sdot(t) = G(t) with RK4; trajectory has steps+1 states, each
/// carrying the instantaneous rate.
inline std::vector<StrainState> strain_evolve(const std::function<Mat3(double)>& g,
                                              const Mat3& s0, double h, int steps) {
  if (!(h > 0.0)) throw std::invalid_argument("strain_evolve: h must be positive");
  std::vector<StrainState> traj;
  traj.reserve(static_cast<std::size_t>(steps) + 1);
  Mat3 s = s0;
  double t = 0.0;
  traj.push_back({s, g(t)});
  auto rhs = [&g](double tt, const Mat3&) { return g(tt); };
  for (int i = 0; i < steps; ++i) {
    s = rk4_step(rhs, s, t, h);
    t += h;
    traj.push_back({s, g(t)});
  }
  return traj;
}

/// Planar counterpart for the 2D map cases.
struct StrainState2 {
  Mat2 S = Mat2::Zero();
  Mat2 Sdot = Mat2::Zero();

  Mat2 strain_sym() const { return 0.5 * (S + S.transpose()); }
  Mat2 rate_sym() const { return 0.5 * (Sdot + Sdot.transpose()); }
};

enum class MediumKind { elastic, viscous };

/// Hooke-class stress: the isotropic map applied to the symmetrized strain
/// (elastic) or symmetrized strain rate (viscous).
template <typename Map, typename State>
auto stress(const Map& m, const State& state, MediumKind kind) {
  if (!is_well_defined(m)) throw SingularMapError("stress: constitutive map is singular");
  const auto z = (kind == MediumKind::elastic) ? state.strain_sym() : state.rate_sym();
  return m.apply(z);
}

}  // namespace czmech
