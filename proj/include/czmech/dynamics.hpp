#pragma once

// Right-hand sides and fixed-step integrators for the motion equations:
// rigid body in quasi-velocities coupled with the Poisson rotation relation,
// variable-mass points, body-points with block inertia, gravitational
// N-body systems, and per-point multiphase continuity.

#include "czmech/frames.hpp"
#include "czmech/measures.hpp"
#include "czmech/numerics.hpp"
#include "czmech/screw.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace czmech {

/// Mass-normalized 6x6 inertia block of a point at offset r from the frame
/// origin: [[I, -rx], [rx, -(rx)^2]] scaled by the mass weight.
inline Mat6 point_inertia_block(const Vec3& r, double mass_weight) {
  const Mat3 rx = cross_matrix(r);
  Mat6 th;
  th.topLeftCorner<3, 3>() = Mat3::Identity();
  th.topRightCorner<3, 3>() = -rx;
  th.bottomLeftCorner<3, 3>() = rx;
  th.bottomRightCorner<3, 3>() = -(rx * rx);
  return Mat6(mass_weight * th);
}

/// Assembled body operators in the body frame: the inertia operator (mass
/// weighted) and the source operator (mass-rate weighted).
class RigidBodyModel {
public:
  /// Assembles from a body-frame distribution; rejects bodies whose inertia
  /// operator is singular (all mass at a point or on a line).
  static RigidBodyModel assemble(const MassDistribution& d) {
    d.validate();
    std::vector<Mat6> th_terms, q_terms;
    th_terms.reserve(d.node_count());
    q_terms.reserve(d.node_count());
    for (const auto& n : d.ac) {
      const Mat6 block = point_inertia_block(n.x, 1.0);
      th_terms.push_back(Mat6(n.w * n.rho * block));
      q_terms.push_back(Mat6(n.w * n.nu * block));
    }
    for (const auto& p : d.pp) {
      const Mat6 block = point_inertia_block(p.x, 1.0);
      th_terms.push_back(Mat6(p.m * block));
      q_terms.push_back(Mat6(p.nu * block));
    }
    const Mat6 theta = th_terms.empty() ? Mat6::Zero() : pairwise_sum<Mat6>(th_terms);
    const Mat6 qnu = q_terms.empty() ? Mat6::Zero() : pairwise_sum<Mat6>(q_terms);
    return from_operators(theta, qnu);
  }

  /// Direct construction from operators (e.g. closed-form sphere/top inertia).
  static RigidBodyModel from_operators(const Mat6& theta, const Mat6& q_nu = Mat6::Zero()) {
    const double scale = std::max(1.0, theta.norm());
    if ((theta - theta.transpose()).norm() > 1e-10 * scale)
      throw std::invalid_argument("RigidBodyModel: inertia operator is not symmetric");
    Eigen::SelfAdjointEigenSolver<Mat6> es(theta);
    const double min_eig = es.eigenvalues().minCoeff();
    const double max_eig = es.eigenvalues().maxCoeff();
    if (!(min_eig > 1e-12 * std::max(1.0, max_eig)))
      throw NumericalError("RigidBodyModel: degenerate body (singular inertia operator)");
    RigidBodyModel m;
    m.theta_ = theta;
    m.q_nu_ = q_nu;
    m.theta_lu_ = theta.partialPivLu();
    return m;
  }

  const Mat6& inertia() const { return theta_; }
  const Mat6& source_operator() const { return q_nu_; }
  Vec6 solve_inertia(const Vec6& rhs) const { return theta_lu_.solve(rhs); }

private:
  RigidBodyModel() = default;
  Mat6 theta_ = Mat6::Identity();
  Mat6 q_nu_ = Mat6::Zero();
  Eigen::PartialPivLU<Mat6> theta_lu_;
};

/// Pose plus quasi-velocity twist V = col{v_p, omega_p} at the body origin.
struct RigidBodyState {
  Placement placement;
  Vec6 quasi_velocity = Vec6::Zero();

  Vec3 v_body() const { return quasi_velocity.head<3>(); }
  Vec3 omega_body() const { return quasi_velocity.tail<3>(); }
};

/// Body-frame wrench applied to the body, as a function of time and state.
using WrenchFn = std::function<Vec6(double, const RigidBodyState&)>;

/// Quasi-velocity equation: Theta Vdot + (Q_nu + Phi(V) Theta) V = F, with
/// the convective generator built from V itself.
inline Vec6 newton_euler_rhs(const RigidBodyModel& model, const Vec6& v, const Vec6& wrench_p) {
  const Mat6 phi = wrench_generator(v.head<3>(), v.tail<3>());
  return model.solve_inertia(Vec6(wrench_p - (model.source_operator() + phi * model.inertia()) * v));
}

struct RigidStep {
  double t = 0.0;
  RigidBodyState state;
  double kinetic_energy = 0.0;   // (1/2) V^T Theta V
  Vec6 momentum_world = Vec6::Zero();  // L^wr (Theta V), frame-0 reduction
};

struct RigidTrajectory {
  std::vector<RigidStep> steps;
};

namespace detail {
inline RigidStep make_rigid_step(const RigidBodyModel& model, double t, const RigidBodyState& s) {
  RigidStep out;
  out.t = t;
  out.state = s;
  const Vec6 momentum_body = model.inertia() * s.quasi_velocity;
  out.kinetic_energy = 0.5 * s.quasi_velocity.dot(momentum_body);
  out.momentum_world = wrench_transform(s.placement) * momentum_body;
  return out;
}
}  // namespace detail

/// Coupled RK4 integration of the quasi-velocity equation, the Poisson
/// rotation relation and the translation rate, with per-step projection onto
/// the rotation manifold. Pre-projection drift beyond 1e-8 aborts (step size
/// too large for the motion).
inline RigidTrajectory simulate_rigid_body(const RigidBodyModel& model, const WrenchFn& wrench,
                                           const RigidBodyState& initial, double h, int steps) {
  if (!(h > 0.0)) throw std::invalid_argument("simulate_rigid_body: h must be positive");
  using State = Eigen::Matrix<double, 18, 1>;  // [V(6); vec(C)(9); d(3)]
  auto pack = [](const RigidBodyState& s) {
    State y;
    y.head<6>() = s.quasi_velocity;
    const Mat3& c = s.placement.rotation.matrix();
    for (int r = 0; r < 3; ++r)
      for (int col = 0; col < 3; ++col) y[6 + 3 * r + col] = c(r, col);
    y.tail<3>() = s.placement.translation;
    return y;
  };
  auto unpack_raw = [](const State& y, Mat3& c, Vec3& d, Vec6& v) {
    v = y.head<6>();
    for (int r = 0; r < 3; ++r)
      for (int col = 0; col < 3; ++col) c(r, col) = y[6 + 3 * r + col];
    d = y.tail<3>();
  };

  RigidTrajectory traj;
  traj.steps.reserve(static_cast<std::size_t>(steps) + 1);
  traj.steps.push_back(detail::make_rigid_step(model, 0.0, initial));

  State y = pack(initial);
  double t = 0.0;
  auto rhs = [&](double tt, const State& yy) -> State {
    Mat3 c;
    Vec3 d;
    Vec6 v;
    unpack_raw(yy, c, d, v);
    RigidBodyState s;
    s.placement = Placement{Rotation(nearest_rotation(c)), d};
    s.quasi_velocity = v;
    const Vec6 f = wrench(tt, s);
    const Vec6 vdot = newton_euler_rhs(model, v, f);
    const Mat3 cdot = c * cross_matrix(v.tail<3>());
    const Vec3 ddot = c * v.head<3>();
    State dy;
    dy.head<6>() = vdot;
    for (int r = 0; r < 3; ++r)
      for (int col = 0; col < 3; ++col) dy[6 + 3 * r + col] = cdot(r, col);
    dy.tail<3>() = ddot;
    return dy;
  };

  for (int i = 0; i < steps; ++i) {
    y = rk4_step(rhs, y, t, h);
    t += h;
    Mat3 c;
    Vec3 d;
    Vec6 v;
    unpack_raw(y, c, d, v);
    const double drift = (c.transpose() * c - Mat3::Identity()).norm();
    if (drift > 1e-8)
      throw NumericalError("simulate_rigid_body: rotation drift exceeds 1e-8 before projection");
    c = nearest_rotation(c);
    for (int r = 0; r < 3; ++r)
      for (int col = 0; col < 3; ++col) y[6 + 3 * r + col] = c(r, col);
    RigidBodyState s;
    s.placement = Placement{Rotation(c), d};
    s.quasi_velocity = v;
    traj.steps.push_back(detail::make_rigid_step(model, t, s));
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Variable-mass point
// ---------------------------------------------------------------------------

/// Variable-mass point model: mass rate nu(t), impressed force f, and the
/// velocity u of gained/lost mass (thrust term nu (u - v)).
struct MassPointModel {
  std::function<double(double)> nu;                       // [kg/s]; null = 0
  std::function<Vec3(double, const Vec3&, const Vec3&)> force;          // f(t, x, v)
  std::function<Vec3(double, const Vec3&, const Vec3&)> gain_velocity;  // u(t, x, v); null = 0
  double m_min = 1e-12;
};

struct MassPointStep {
  double t = 0.0;
  Vec3 x = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  double m = 0.0;
};

/// Acceleration of a variable-mass point: vdot = f/m when nu = 0, otherwise
/// the full form (f + nu (u - v))/m.
inline Vec3 mass_point_rhs(double m, double nu, const Vec3& f, const Vec3& u, const Vec3& v,
                           double m_min) {
  if (!(m > m_min)) throw NumericalError("mass_point: mass underflow");
  Vec3 a = f / m;
  if (nu != 0.0) a += nu * (u - v) / m;
  return a;
}

inline std::vector<MassPointStep> simulate_mass_point(const MassPointModel& model, const Vec3& x0,
                                                      const Vec3& v0, double m0, double h,
                                                      int steps) {
  if (!(h > 0.0)) throw std::invalid_argument("simulate_mass_point: h must be positive");
  using State = Eigen::Matrix<double, 7, 1>;  // [x; v; m]
  State y;
  y << x0, v0, m0;
  auto rhs = [&model](double t, const State& s) -> State {
    const Vec3 x = s.head<3>(), v = s.segment<3>(3);
    const double m = s[6];
    const double nu = model.nu ? model.nu(t) : 0.0;
    const Vec3 f = model.force ? model.force(t, x, v) : Vec3::Zero();
    const Vec3 u = model.gain_velocity ? model.gain_velocity(t, x, v) : Vec3::Zero();
    const Vec3 a = mass_point_rhs(m, nu, f, u, v, model.m_min);
    State dy;
    dy << v, a, nu;
    return dy;
  };
  std::vector<MassPointStep> traj;
  traj.reserve(static_cast<std::size_t>(steps) + 1);
  double t = 0.0;
  traj.push_back({t, x0, v0, m0});
  for (int i = 0; i < steps; ++i) {
    y = rk4_step(rhs, y, t, h);
    t += h;
    traj.push_back({t, y.head<3>(), y.segment<3>(3), y[6]});
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Body-point with block inertia
// ---------------------------------------------------------------------------

/// Body-point inertia density: scalar rho times the block [[I, A], [A^T, B]].
struct BodyPointInertia {
  double rho = 1.0;
  Mat3 A = Mat3::Zero();
  Mat3 B = Mat3::Identity();

  Mat6 block() const {
    Mat6 th;
    th.topLeftCorner<3, 3>() = Mat3::Identity();
    th.topRightCorner<3, 3>() = A;
    th.bottomLeftCorner<3, 3>() = A.transpose();
    th.bottomRightCorner<3, 3>() = B;
    return th;
  }

  void validate() const {
    if (!(rho > 0.0)) throw std::invalid_argument("BodyPointInertia: rho must be positive");
    const Mat6 th = block();
    const double scale = std::max(1.0, th.norm());
    if ((th - th.transpose()).norm() > 1e-10 * scale)
      throw std::invalid_argument("BodyPointInertia: block is not symmetric");
    Eigen::SelfAdjointEigenSolver<Mat6> es(th);
    if (es.eigenvalues().minCoeff() < -1e-10 * scale)
      throw std::invalid_argument("BodyPointInertia: block is not positive semidefinite");
  }
};

/// (rho d/dt + nu) [[I,A],[A^T,B]] (v; mu) = (alpha; beta), solved for
/// (vdot; mudot) as a 6x6 linear system.
inline Vec6 body_point_rhs(const BodyPointInertia& inertia, double nu, const Vec6& v_mu,
                           const Vec6& alpha_beta) {
  if (!(inertia.rho > 0.0)) throw NumericalError("body_point: nonpositive density");
  const Mat6 th = inertia.block();
  Eigen::FullPivLU<Mat6> lu(th);
  if (!lu.isInvertible()) throw NumericalError("body_point: singular block inertia");
  return lu.solve(Vec6((alpha_beta - nu * (th * v_mu)) / inertia.rho));
}

struct BodyPointStep {
  double t = 0.0;
  Vec3 v = Vec3::Zero();
  Vec3 mu = Vec3::Zero();
};

inline std::vector<BodyPointStep> simulate_body_point(
    const BodyPointInertia& inertia, const std::function<double(double)>& nu,
    const std::function<Vec6(double)>& alpha_beta, const Vec3& v0, const Vec3& mu0, double h,
    int steps) {
  if (!(h > 0.0)) throw std::invalid_argument("simulate_body_point: h must be positive");
  inertia.validate();
  Vec6 y;
  y << v0, mu0;
  auto rhs = [&](double t, const Vec6& s) -> Vec6 {
    return body_point_rhs(inertia, nu ? nu(t) : 0.0, s, alpha_beta(t));
  };
  std::vector<BodyPointStep> traj;
  traj.reserve(static_cast<std::size_t>(steps) + 1);
  double t = 0.0;
  traj.push_back({t, v0, mu0});
  for (int i = 0; i < steps; ++i) {
    y = rk4_step(rhs, y, t, h);
    t += h;
    traj.push_back({t, y.head<3>(), y.tail<3>()});
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Gravitational N-body
// ---------------------------------------------------------------------------

struct NBody {
  Vec3 x = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  double m = 1.0;
};

struct NBodySnapshot {
  double t = 0.0;
  std::vector<NBody> bodies;
  double energy = 0.0;           // (1/2) sum m v^2 - gamma sum_{i<j} m_i m_j / r_ij
  Vec3 momentum = Vec3::Zero();
  Vec3 angular_momentum = Vec3::Zero();  // about the origin
};

namespace detail {
inline void nbody_diagnostics(double gamma, NBodySnapshot& s) {
  double kin = 0.0, pot = 0.0;
  Vec3 mom = Vec3::Zero(), ang = Vec3::Zero();
  const std::size_t n = s.bodies.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& b = s.bodies[i];
    kin += 0.5 * b.m * b.v.squaredNorm();
    mom += b.m * b.v;
    ang += b.m * b.x.cross(b.v);
    for (std::size_t j = i + 1; j < n; ++j)
      pot -= gamma * b.m * s.bodies[j].m / (b.x - s.bodies[j].x).norm();
  }
  s.energy = kin + pot;
  s.momentum = mom;
  s.angular_momentum = ang;
}
}  // namespace detail

/// Fixed-step RK4 point-mass gravitation. Pairwise accelerations are summed
/// antisymmetrically, so total momentum is conserved to rounding. A pair
/// closer than min_separation aborts with a diagnostic.
inline std::vector<NBodySnapshot> nbody_simulate(const std::vector<NBody>& initial, double gamma,
                                                 double h, int steps,
                                                 double min_separation = 1e-9,
                                                 int record_every = 1) {
  if (!(h > 0.0)) throw std::invalid_argument("nbody_simulate: h must be positive");
  if (record_every < 1) throw std::invalid_argument("nbody_simulate: record_every must be >= 1");
  const std::size_t n = initial.size();
  using State = Eigen::VectorXd;  // [x0 v0 x1 v1 ...]
  State y(6 * n);
  for (std::size_t i = 0; i < n; ++i) {
    y.segment<3>(6 * i) = initial[i].x;
    y.segment<3>(6 * i + 3) = initial[i].v;
  }
  auto rhs = [&](double, const State& s) -> State {
    State dy(6 * n);
    std::vector<Vec3> acc(n, Vec3::Zero());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const Vec3 r = s.segment<3>(6 * j) - s.segment<3>(6 * i);
        const double dist = r.norm();
        if (dist < min_separation)
          throw NumericalError("nbody_simulate: close approach below min_separation (pair " +
                               std::to_string(i) + "," + std::to_string(j) + ")");
        const Vec3 g = gamma * r / (dist * dist * dist);
        acc[i] += initial[j].m * g;
        acc[j] -= initial[i].m * g;
      }
    for (std::size_t i = 0; i < n; ++i) {
      dy.segment<3>(6 * i) = s.segment<3>(6 * i + 3);
      dy.segment<3>(6 * i + 3) = acc[i];
    }
    return dy;
  };

  auto snapshot = [&](double t, const State& s) {
    NBodySnapshot snap;
    snap.t = t;
    snap.bodies.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      snap.bodies[i] = {s.segment<3>(6 * i), s.segment<3>(6 * i + 3), initial[i].m};
    }
    detail::nbody_diagnostics(gamma, snap);
    return snap;
  };

  std::vector<NBodySnapshot> traj;
  traj.reserve(static_cast<std::size_t>(steps / record_every) + 2);
  double t = 0.0;
  traj.push_back(snapshot(t, y));
  for (int i = 0; i < steps; ++i) {
    y = rk4_step(rhs, y, t, h);
    t += h;
    if ((i + 1) % record_every == 0 || i + 1 == steps) traj.push_back(snapshot(t, y));
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Multiphase point continuity
// ---------------------------------------------------------------------------

/// Per-material-point multiphase state: component densities, constant
/// micro-offsets, stoichiometric table and reaction rates.
struct MultiphaseState {
  Eigen::VectorXd rho;            // n components
  std::vector<Vec3> offsets;      // z^alpha, constant
  Eigen::MatrixXd stoichiometry;  // n x m, nu_{alpha I}
  Eigen::VectorXd rates;          // m reaction velocities J_I

  void validate() const {
    const auto n = rho.size();
    if (static_cast<Eigen::Index>(offsets.size()) != n ||
        stoichiometry.rows() != n || stoichiometry.cols() != rates.size())
      throw std::invalid_argument("MultiphaseState: inconsistent component/reaction shapes");
    if ((rho.array() < 0.0).any())
      throw std::invalid_argument("MultiphaseState: negative component density");
  }

  /// Formation rates gamma_alpha = sum_I nu_{alpha I} J_I.
  Eigen::VectorXd formation() const { return stoichiometry * rates; }

  double total_density() const { return rho.sum(); }

  /// First invariant of the component inertia tensor: 2 sum rho_a |z_a|^2.
  double micro_inertia_trace() const {
    double j = 0.0;
    for (Eigen::Index a = 0; a < rho.size(); ++a)
      j += 2.0 * rho[a] * offsets[static_cast<std::size_t>(a)].squaredNorm();
    return j;
  }

  /// Component inertia tensor sum rho_a (|z_a|^2 I - z_a (x) z_a).
  Mat3 micro_inertia() const {
    Mat3 j = Mat3::Zero();
    for (Eigen::Index a = 0; a < rho.size(); ++a) {
      const Vec3& z = offsets[static_cast<std::size_t>(a)];
      j += rho[a] * (z.squaredNorm() * Mat3::Identity() - z * z.transpose());
    }
    return j;
  }
};

/// One RK4 step of the per-component material continuity equations
/// d rho_a / dt = gamma_a - rho_a div v. Negative densities after the step
/// are a step-size error.
inline MultiphaseState multiphase_step(const MultiphaseState& state, double div_v, double h) {
  state.validate();
  const Eigen::VectorXd gamma = state.formation();
  auto rhs = [&](double, const Eigen::VectorXd& rho) -> Eigen::VectorXd {
    return gamma - div_v * rho;
  };
  MultiphaseState out = state;
  out.rho = rk4_step(rhs, state.rho, 0.0, h);
  if ((out.rho.array() < 0.0).any())
    throw NumericalError("multiphase_step: negative density (reduce the step size)");
  return out;
}

}  // namespace czmech
