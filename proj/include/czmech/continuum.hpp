#pragma once

// Numerical verification of the continuum identities: the moment-transport
// lemma for stress fields, the polar-medium balance with couple stress, and
// the Cauchy balance with symmetric stress. Manufactured fields only: no PDE
// is solved, residuals are evaluated by midpoint quadrature and 2nd-order
// central differences, sampling shrunk one stencil width inside the box.

#include "czmech/numerics.hpp"
#include "czmech/screw.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace czmech {

/// Closed-form tensor field with optional closed-form divergence.
struct TensorField {
  std::function<Mat3(const Vec3&)> eval;
  std::function<Vec3(const Vec3&)> divergence;  // optional analytic row divergence
};

struct BoxSpec {
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Ones();
};

struct ResidualLevel {
  double h = 0.0;
  double max_abs = 0.0;
  double mean_abs = 0.0;
};

/// Residuals at two (or more) resolutions plus the estimated convergence
/// order: the two-point log2 rate between the first two levels, and the
/// least-squares slope with its fit residual when more levels are present.
struct BalanceResidualReport {
  std::vector<ResidualLevel> levels;
  double order = 0.0;
  double order_fit_residual = 0.0;
  bool symmetry_violation = false;
  double max_asymmetry = 0.0;

  void finalize() {
    if (levels.size() >= 2) {
      std::vector<double> hs, rs;
      for (const auto& l : levels) {
        hs.push_back(l.h);
        rs.push_back(std::max(l.max_abs, 1e-300));
      }
      order = std::log2(rs[0] / rs[1]) / std::log2(hs[0] / hs[1]);
      const auto [slope, resid] = convergence_order(hs, rs);
      order_fit_residual = resid;
      if (levels.size() > 2) order = slope;
    }
  }
};

/// Dual vector of the antisymmetric part P^T - P; annihilates the symmetric
/// part of P.
inline Vec3 antisymmetric_dual(const Mat3& p) {
  const Mat3 a = p.transpose() - p;
  return Vec3(a(2, 1), a(0, 2), a(1, 0));
}

namespace detail {

/// Row divergence (div P)_i = d_j P_ij by central differences.
inline Vec3 divergence_fd(const std::function<Mat3(const Vec3&)>& f, const Vec3& x, double h) {
  Vec3 out = Vec3::Zero();
  for (int j = 0; j < 3; ++j) {
    Vec3 e = Vec3::Zero();
    e[j] = h;
    out += (f(Vec3(x + e)).col(j) - f(Vec3(x - e)).col(j)) / (2.0 * h);
  }
  return out;
}

struct InteriorGrid {
  std::vector<Vec3> points;
  double cell_volume = 0.0;
};

/// Midpoint-rule nodes on the box shrunk inward by one stencil width h.
inline InteriorGrid interior_grid(const BoxSpec& box, double h, int n) {
  if (n < 3) throw std::invalid_argument("continuum: resolution must be at least 3 per axis");
  InteriorGrid g;
  const Vec3 lo = box.lo + Vec3::Constant(h);
  const Vec3 hi = box.hi - Vec3::Constant(h);
  const Vec3 dx = (hi - lo) / static_cast<double>(n);
  g.cell_volume = dx.prod();
  if (!(g.cell_volume > 0.0))
    throw std::invalid_argument("continuum: box too small for the stencil width");
  g.points.reserve(static_cast<std::size_t>(n) * n * n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        g.points.push_back(lo + Vec3((i + 0.5) * dx.x(), (j + 0.5) * dx.y(), (k + 0.5) * dx.z()));
  return g;
}

}  // namespace detail

/// Both forms of the moment-transport identity for a stress field P and
/// moment point y, with moment arm (y - x):
///   integral:  int div((y-x)x P) dV  =  int ((y-x)x div P + tau) dV
///   pointwise: div((y-x)x P) = (y-x)x div P + tau,   tau = dual(P^T - P).
struct Lemma1Report {
  BalanceResidualReport integral_form;   // |LHS - RHS| of the volume identity
  BalanceResidualReport pointwise_form;  // max-norm of the pointwise residual
  std::vector<Vec3> integral_lhs;        // per level, for reference
  std::vector<Vec3> integral_rhs;
};

inline Lemma1Report lemma1_residual(const TensorField& field, const Vec3& y, const BoxSpec& box,
                                    double h, int resolution = 12, int levels = 2) {
  if (!field.eval) throw std::invalid_argument("lemma1_residual: field evaluator required");
  Lemma1Report report;
  // Quadrature nodes are held fixed across levels (errors common to both
  // sides cancel); only the stencil width is refined.
  const auto grid = detail::interior_grid(box, h, resolution);
  double hh = h;
  for (int level = 0; level < levels; ++level, hh *= 0.5) {
    auto moment_field = [&](const Vec3& x) -> Mat3 {
      return cross_matrix(Vec3(y - x)) * field.eval(x);
    };
    Vec3 lhs = Vec3::Zero(), rhs = Vec3::Zero();
    double point_max = 0.0, point_sum = 0.0;
    for (const Vec3& x : grid.points) {
      const Vec3 div_moment = detail::divergence_fd(moment_field, x, hh);
      const Vec3 div_p = field.divergence ? field.divergence(x)
                                          : detail::divergence_fd(field.eval, x, hh);
      const Vec3 tau = antisymmetric_dual(field.eval(x));
      const Vec3 right = Vec3(cross_matrix(Vec3(y - x)) * div_p + tau);
      lhs += div_moment;
      rhs += right;
      const double pr = (div_moment - right).norm();
      point_max = std::max(point_max, pr);
      point_sum += pr;
    }
    lhs *= grid.cell_volume;
    rhs *= grid.cell_volume;
    report.integral_lhs.push_back(lhs);
    report.integral_rhs.push_back(rhs);
    report.integral_form.levels.push_back({hh, (lhs - rhs).norm(), (lhs - rhs).norm()});
    report.pointwise_form.levels.push_back(
        {hh, point_max, point_sum / static_cast<double>(grid.points.size())});
  }
  report.integral_form.finalize();
  report.pointwise_form.finalize();
  return report;
}

/// Manufactured fields for the polar balance
///   (rho d/dt + nu) [[I,A],[A^T,B]] (v; mu) = rho (gamma; delta) + div(P; Q) + (0; tau).
/// Material derivatives of v and mu are supplied analytically; only the
/// divergences of P and Q are discretized.
struct PolarFields {
  std::function<double(const Vec3&)> rho;
  std::function<double(const Vec3&)> nu;
  std::function<Vec3(const Vec3&)> v, mu;
  std::function<Vec3(const Vec3&)> v_dot, mu_dot;  // material derivatives
  Mat3 A = Mat3::Zero();
  Mat3 B = Mat3::Zero();
  std::function<Vec3(const Vec3&)> gamma, delta;
  std::function<Mat3(const Vec3&)> stress, couple_stress;
};

inline BalanceResidualReport polar_balance_residual(const PolarFields& f,
                                                    std::span<const Vec3> points, double h,
                                                    int levels = 2) {
  BalanceResidualReport report;
  double hh = h;
  for (int level = 0; level < levels; ++level, hh *= 0.5) {
    double max_abs = 0.0, sum = 0.0;
    for (const Vec3& x : points) {
      Vec6 vmu, vmu_dot, gd;
      vmu << f.v(x), f.mu(x);
      vmu_dot << f.v_dot(x), f.mu_dot(x);
      gd << f.gamma(x), f.delta(x);
      Mat6 th;
      th.topLeftCorner<3, 3>() = Mat3::Identity();
      th.topRightCorner<3, 3>() = f.A;
      th.bottomLeftCorner<3, 3>() = f.A.transpose();
      th.bottomRightCorner<3, 3>() = f.B;
      Vec6 div_pq;
      div_pq << detail::divergence_fd(f.stress, x, hh),
          detail::divergence_fd(f.couple_stress, x, hh);
      Vec6 tau6 = Vec6::Zero();
      tau6.tail<3>() = antisymmetric_dual(f.stress(x));
      const Vec6 resid =
          f.rho(x) * (th * vmu_dot) + f.nu(x) * (th * vmu) - f.rho(x) * gd - div_pq - tau6;
      const double r = resid.norm();
      max_abs = std::max(max_abs, r);
      sum += r;
    }
    report.levels.push_back({hh, max_abs, sum / static_cast<double>(points.size())});
  }
  report.finalize();
  return report;
}

/// Manufactured fields for the Cauchy balance (rho d/dt + nu) v = rho g + div P
/// with symmetric stress; asymmetry beyond 1e-10 is flagged in the report.
struct CauchyFields {
  std::function<double(const Vec3&)> rho;
  std::function<double(const Vec3&)> nu;
  std::function<Vec3(const Vec3&)> v, v_dot;
  std::function<Vec3(const Vec3&)> g;
  std::function<Mat3(const Vec3&)> stress;
};

inline BalanceResidualReport cauchy_balance_residual(const CauchyFields& f,
                                                     std::span<const Vec3> points, double h,
                                                     int levels = 2) {
  BalanceResidualReport report;
  for (const Vec3& x : points) {
    const Mat3 p = f.stress(x);
    const double asym = (p - p.transpose()).norm();
    report.max_asymmetry = std::max(report.max_asymmetry, asym);
    if (asym > 1e-10 * std::max(1.0, p.norm())) report.symmetry_violation = true;
  }
  double hh = h;
  for (int level = 0; level < levels; ++level, hh *= 0.5) {
    double max_abs = 0.0, sum = 0.0;
    for (const Vec3& x : points) {
      const Vec3 resid = f.rho(x) * f.v_dot(x) + f.nu(x) * f.v(x) - f.rho(x) * f.g(x) -
                         detail::divergence_fd(f.stress, x, hh);
      const double r = resid.norm();
      max_abs = std::max(max_abs, r);
      sum += r;
    }
    report.levels.push_back({hh, max_abs, sum / static_cast<double>(points.size())});
  }
  report.finalize();
  return report;
}

}  // namespace czmech
