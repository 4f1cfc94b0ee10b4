#pragma once

// Mass, momentum-screw, inertia, kinetic-energy and gravity measures over
// mixed absolutely-continuous + pure-point distributions, transport
// derivatives of density-weighted integrals, and grid continuity residuals.
//
// The absolutely continuous part is represented by caller-supplied quadrature
// nodes (midpoint rule by default); this module never meshes geometry.

#include "czmech/numerics.hpp"
#include "czmech/screw.hpp"

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace czmech {

/// Quadrature node of the absolutely continuous component.
struct AcNode {
  Vec3 x = Vec3::Zero();  // position [m]
  double w = 0.0;         // quadrature weight [m^3]
  double rho = 0.0;       // density [kg/m^3]
  double nu = 0.0;        // source density [kg/(m^3 s)]
};

/// Pure (discrete) mass point.
struct PpPoint {
  Vec3 x = Vec3::Zero();
  double m = 0.0;   // [kg]
  double nu = 0.0;  // mass rate [kg/s]
};

struct MassDistribution {
  std::vector<AcNode> ac;
  std::vector<PpPoint> pp;

  std::size_t node_count() const { return ac.size() + pp.size(); }

  void validate() const {
    for (const auto& n : ac) {
      if (!(n.w > 0.0)) throw std::invalid_argument("MassDistribution: ac weight must be > 0");
      if (!(n.rho >= 0.0)) throw std::invalid_argument("MassDistribution: ac density must be >= 0");
      if (!n.x.allFinite()) throw std::invalid_argument("MassDistribution: non-finite ac position");
    }
    for (const auto& p : pp) {
      if (!(p.m >= 0.0)) throw std::invalid_argument("MassDistribution: pp mass must be >= 0");
      if (!p.x.allFinite()) throw std::invalid_argument("MassDistribution: non-finite pp position");
    }
  }
};

/// Translational/rotational state of one material point.
struct PointState {
  Vec3 v = Vec3::Zero();
  Vec3 mu = Vec3::Zero();
};

/// Block inertia density theta = rho [[I, A], [A^T, B]]. For a pure point the
/// rho slot carries the point's mass. Validated symmetric PSD within 1e-10.
struct InertiaDensity {
  double rho = 0.0;
  Mat3 A = Mat3::Zero();
  Mat3 B = Mat3::Zero();

  InertiaDensity() = default;
  InertiaDensity(double rho_, const Mat3& a, const Mat3& b) : rho(rho_), A(a), B(b) {
    const Mat6 th = assembled();
    const double scale = std::max(1.0, th.norm());
    if ((th - th.transpose()).norm() > 1e-10 * scale)
      throw std::invalid_argument("InertiaDensity: assembled block is not symmetric");
    Eigen::SelfAdjointEigenSolver<Mat6> es(th);
    if (es.eigenvalues().minCoeff() < -1e-10 * scale)
      throw std::invalid_argument("InertiaDensity: assembled block is not positive semidefinite");
  }

  static InertiaDensity point_mass(double m) { return InertiaDensity(m, Mat3::Zero(), Mat3::Zero()); }

  Mat6 assembled() const {
    Mat6 th;
    th.topLeftCorner<3, 3>() = rho * Mat3::Identity();
    th.topRightCorner<3, 3>() = rho * A;
    th.bottomLeftCorner<3, 3>() = rho * A.transpose();
    th.bottomRightCorner<3, 3>() = rho * B;
    return th;
  }

  Vec6 apply(const PointState& s) const {
    Vec6 vm;
    vm << s.v, s.mu;
    return assembled() * vm;
  }
};

inline double total_mass(const MassDistribution& d) {
  d.validate();
  std::vector<double> terms;
  terms.reserve(d.node_count());
  for (const auto& n : d.ac) terms.push_back(n.w * n.rho);
  for (const auto& p : d.pp) terms.push_back(p.m);
  return terms.empty() ? 0.0 : pairwise_sum<double>(terms);
}

namespace detail {
inline void check_aligned(const MassDistribution& d, std::size_t states, std::size_t thetas) {
  if (states != d.node_count() || thetas != d.node_count())
    throw std::invalid_argument("measures: states/inertia lists must align with nodes (ac then pp)");
}
}  // namespace detail

/// Momentum screw of the distribution reduced at y. Per node the slider is
/// (p, q) = theta (v; mu) bound at the node position; ac nodes enter with
/// their quadrature weight, pure points with unit weight.
inline WrenchReduction3 momentum_screw(const MassDistribution& d,
                                       std::span<const PointState> states,
                                       std::span<const InertiaDensity> thetas,
                                       const Vec3& y) {
  d.validate();
  detail::check_aligned(d, states.size(), thetas.size());
  std::vector<WeightedSlider<3>> sliders;
  sliders.reserve(d.node_count());
  std::size_t i = 0;
  auto push = [&](const Vec3& x, double weight) {
    const Vec6 pq = thetas[i].apply(states[i]);
    sliders.push_back({weight, Slider3{pq.head<3>(), pq.tail<3>(), x}});
    ++i;
  };
  for (const auto& n : d.ac) push(n.x, n.w);
  for (const auto& p : d.pp) push(p.x, 1.0);
  return screw_total<3>(sliders, y).total;
}

/// Energy measure (v; mu)^T theta (v; mu) summed over the distribution.
/// Deliberately carries no 1/2 factor; nonnegative for PSD theta.
inline double kinetic_energy(const MassDistribution& d,
                             std::span<const PointState> states,
                             std::span<const InertiaDensity> thetas) {
  d.validate();
  detail::check_aligned(d, states.size(), thetas.size());
  std::vector<double> terms;
  terms.reserve(d.node_count());
  std::size_t i = 0;
  auto push = [&](double weight) {
    Vec6 vm;
    vm << states[i].v, states[i].mu;
    terms.push_back(weight * vm.dot(thetas[i].assembled() * vm));
    ++i;
  };
  for (const auto& n : d.ac) push(n.w);
  for ([[maybe_unused]] const auto& p : d.pp) push(1.0);
  return terms.empty() ? 0.0 : pairwise_sum<double>(terms);
}

/// Tensor inertia measure: the weighted sum of the 6x6 blocks.
inline Mat6 inertia_measure(const MassDistribution& d, std::span<const InertiaDensity> thetas) {
  d.validate();
  if (thetas.size() != d.node_count())
    throw std::invalid_argument("inertia_measure: inertia list must align with nodes");
  std::vector<Mat6> terms;
  terms.reserve(d.node_count());
  std::size_t i = 0;
  for (const auto& n : d.ac) terms.push_back(Mat6(n.w * thetas[i++].assembled()));
  for ([[maybe_unused]] const auto& p : d.pp) terms.push_back(thetas[i++].assembled());
  return terms.empty() ? Mat6::Zero() : pairwise_sum<Mat6>(terms);
}

struct GravityOptions {
  double min_separation = 1e-9;  // [m]; closer pairs are an error
  double softening = 0.0;        // Plummer length; 0 disables softening
};

struct GravityField {
  std::vector<Vec3> acceleration;  // aligned with target nodes, ac then pp
};

namespace detail {
constexpr std::size_t kNoSkip = static_cast<std::size_t>(-1);

inline void accumulate_gravity(const Vec3& x, const MassDistribution& sources, double gamma,
                               const GravityOptions& opts, std::size_t skip_index, Vec3& out) {
  std::vector<Vec3> terms;
  terms.reserve(sources.node_count());
  std::size_t j = 0;
  auto add = [&](const Vec3& y, double mass) {
    if (j++ == skip_index) return;
    const Vec3 r = y - x;  // attraction points from the field point to the source
    const double dist = r.norm();
    if (opts.softening > 0.0) {
      const double d2 = dist * dist + opts.softening * opts.softening;
      terms.push_back(Vec3(gamma * mass * r / (d2 * std::sqrt(d2))));
      return;
    }
    if (dist < opts.min_separation)
      throw NumericalError("gravity_field: source within min_separation of a target point");
    terms.push_back(Vec3(gamma * mass * r / (dist * dist * dist)));
  };
  for (const auto& n : sources.ac) add(n.x, n.w * n.rho);
  for (const auto& p : sources.pp) add(p.x, p.m);
  out = terms.empty() ? Vec3::Zero() : pairwise_sum<Vec3>(terms);
}
}  // namespace detail

/// Inverse-square acceleration at every target node due to all source nodes.
/// Coincident points are an error unless softening is enabled.
inline GravityField gravity_field(const MassDistribution& target, const MassDistribution& sources,
                                  double gamma, const GravityOptions& opts = {}) {
  target.validate();
  sources.validate();
  GravityField f;
  f.acceleration.resize(target.node_count());
  std::size_t i = 0;
  for (const auto& n : target.ac)
    detail::accumulate_gravity(n.x, sources, gamma, opts, detail::kNoSkip, f.acceleration[i++]);
  for (const auto& p : target.pp)
    detail::accumulate_gravity(p.x, sources, gamma, opts, detail::kNoSkip, f.acceleration[i++]);
  return f;
}

/// Field of a distribution on its own nodes, each node's self-contribution
/// excluded; distinct coincident nodes still error.
inline GravityField self_gravity_field(const MassDistribution& d, double gamma,
                                       const GravityOptions& opts = {}) {
  d.validate();
  GravityField f;
  f.acceleration.resize(d.node_count());
  std::size_t i = 0;
  for (const auto& n : d.ac) {
    detail::accumulate_gravity(n.x, d, gamma, opts, i, f.acceleration[i]);
    ++i;
  }
  for (const auto& p : d.pp) {
    detail::accumulate_gravity(p.x, d, gamma, opts, i, f.acceleration[i]);
    ++i;
  }
  return f;
}

/// Total gravitational wrench on the target: mass-weighted homogeneous
/// sliders with resultants gamma_x, reduced at y.
inline WrenchReduction3 gravity_screw(const MassDistribution& target, const GravityField& field,
                                      const Vec3& y) {
  if (field.acceleration.size() != target.node_count())
    throw std::invalid_argument("gravity_screw: field does not match target distribution");
  std::vector<WeightedSlider<3>> sliders;
  sliders.reserve(target.node_count());
  std::size_t i = 0;
  for (const auto& n : target.ac)
    sliders.push_back({n.w * n.rho, Slider3::homogeneous(field.acceleration[i++], n.x)});
  for (const auto& p : target.pp)
    sliders.push_back({p.m, Slider3::homogeneous(field.acceleration[i++], p.x)});
  return screw_total<3>(sliders, y).total;
}

/// Per-node data for the transport derivative of the rho-weighted integral
/// of f over the moving shape: value and material derivative of f.
struct FieldSample {
  double f = 0.0;
  double fdot = 0.0;  // df/dt along the node's world line
};

/// d/dt of the rho-weighted integral of f over the actual shape:
///   ac part  sum w (rho fdot + nu f),  pp part  sum (m fdot + nu f).
/// With f == 1 this is the net source rate; with nu == 0 and f == 1 it is
/// exactly zero (mass conservation).
inline double transport_derivative(const MassDistribution& d, std::span<const FieldSample> samples) {
  d.validate();
  if (samples.size() != d.node_count())
    throw std::invalid_argument("transport_derivative: samples must align with nodes (ac then pp)");
  std::vector<double> terms;
  terms.reserve(d.node_count());
  std::size_t i = 0;
  for (const auto& n : d.ac) {
    terms.push_back(n.w * (n.rho * samples[i].fdot + n.nu * samples[i].f));
    ++i;
  }
  for (const auto& p : d.pp) {
    terms.push_back(p.m * samples[i].fdot + p.nu * samples[i].f);
    ++i;
  }
  return terms.empty() ? 0.0 : pairwise_sum<double>(terms);
}

using ScalarField = std::function<double(const Vec3&, double)>;
using VectorField = std::function<Vec3(const Vec3&, double)>;

/// Axis-aligned sampling grid, n points per axis.
struct GridSpec {
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Ones();
  int n = 8;

  Vec3 spacing() const {
    return Vec3((hi - lo) / static_cast<double>(n - 1));
  }
};

struct ContinuityResidual {
  std::vector<double> residual;  // interior grid points, x-fastest ordering
  double max_abs = 0.0;
  double mean_abs = 0.0;
  double h = 0.0;  // max spatial spacing used by the differences
};

/// Residual of d rho/dt + div(v rho) - nu on the interior of a uniform grid,
/// central differences in space and time. Second-order for smooth fields.
inline ContinuityResidual continuity_residual(const ScalarField& rho, const VectorField& v,
                                              const ScalarField& nu, const GridSpec& grid,
                                              double t) {
  if (grid.n < 3) throw std::invalid_argument("continuity_residual: need at least 3 points per axis");
  const Vec3 dx = grid.spacing();
  const double dt = dx.maxCoeff();
  ContinuityResidual out;
  out.h = dt;
  out.residual.reserve(static_cast<std::size_t>(grid.n - 2) * (grid.n - 2) * (grid.n - 2));
  auto flux = [&](const Vec3& x, int axis) {
    return v(x, t)[axis] * rho(x, t);
  };
  for (int k = 1; k + 1 < grid.n; ++k)
    for (int j = 1; j + 1 < grid.n; ++j)
      for (int i = 1; i + 1 < grid.n; ++i) {
        const Vec3 x = grid.lo + Vec3(i * dx.x(), j * dx.y(), k * dx.z());
        const double ddt = (rho(x, t + dt) - rho(x, t - dt)) / (2.0 * dt);
        double div = 0.0;
        for (int a = 0; a < 3; ++a) {
          Vec3 e = Vec3::Zero();
          e[a] = dx[a];
          div += (flux(Vec3(x + e), a) - flux(Vec3(x - e), a)) / (2.0 * dx[a]);
        }
        out.residual.push_back(ddt + div - nu(x, t));
      }
  for (double r : out.residual) {
    out.max_abs = std::max(out.max_abs, std::abs(r));
    out.mean_abs += std::abs(r);
  }
  if (!out.residual.empty()) out.mean_abs /= static_cast<double>(out.residual.size());
  return out;
}

}  // namespace czmech
