// Acceptance suite: one test per criterion, one pass/fail line per criterion
// printed by the listener at the bottom. Run via ctest (-R acceptance) or
// directly; criterion 14 needs CZ_MECH_BIN pointing at the cz-mech binary.

#include "czmech/czmech.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace czmech;

namespace {

Slider3 random_slider(Rng& rng) {
  return Slider3{rng.vec3(-2, 2), rng.vec3(-2, 2), rng.vec3(-2, 2)};
}

Placement random_placement(Rng& rng) {
  return Placement{Rotation(rng.rotation()), rng.vec3(-2, 2)};
}

}  // namespace

TEST(Acceptance, Criterion01_ScrewReductionConsistency) {
  Rng rng(1001);
  double worst_two_path = 0.0, worst_split = 0.0, worst_shift = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Slider3 s = random_slider(rng);
    const Vec3 y = rng.vec3(-2, 2), z = rng.vec3(-2, 2);
    const auto direct = reduce(s, y);
    const auto via_z = reduce(rebase(s, z), y);
    worst_two_path = std::max(worst_two_path, rel_err(direct.torque, via_z.torque));

    std::vector<WeightedSlider<3>> items;
    const int n = 2 + static_cast<int>(rng.uniform(0, 4));
    for (int k = 0; k < n; ++k) items.push_back({rng.uniform(-2, 2), random_slider(rng)});
    const auto at_y = screw_total<3>(items, y);
    const auto at_z = screw_total<3>(items, z);
    worst_split = std::max(
        worst_split,
        rel_err(Vec3(at_y.intrinsic_torque + at_y.resultant_torque), Vec3(at_y.total.torque)));
    const Vec3 shifted = at_z.total.torque + alternant<3>(Vec3(z - y), at_z.total.resultant);
    worst_shift = std::max(worst_shift, rel_err(Vec3(at_y.total.torque), shifted));
  }
  EXPECT_LE(worst_two_path, 1e-12);
  EXPECT_LE(worst_split, 1e-12);
  EXPECT_LE(worst_shift, 1e-12);
}

TEST(Acceptance, Criterion02_Alternant4dMatrixEquivalence) {
  Rng rng(1002);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Vec4 r, p;
    for (int k = 0; k < 4; ++k) {
      r[k] = rng.uniform(-3, 3);
      p[k] = rng.uniform(-3, 3);
    }
    const Mat4 outer = p * r.transpose() - r * p.transpose();
    const auto skew = SkewTensor<4>::from_matrix(outer);
    const Torque<4> oracle = torque4(skew.omega(), skew.varpi());
    const Torque<4> via_matrix = reduction_matrix<4>(r) * p;
    worst = std::max(worst, (via_matrix - oracle).cwiseAbs().maxCoeff());
  }
  EXPECT_EQ(worst, 0.0);  // machine-exact
}

TEST(Acceptance, Criterion03_GalileanGroupLawsAndGenerators) {
  Rng rng(1003);
  double worst_closure = 0.0, worst_assoc = 0.0, worst_identity = 0.0, worst_inverse = 0.0,
         worst_factor = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Placement a = random_placement(rng), b = random_placement(rng), c = random_placement(rng);
    worst_closure = std::max(worst_closure,
                             rel_err(Mat6(wrench_transform(a) * wrench_transform(b)),
                                     wrench_transform(compose(a, b))));
    worst_assoc = std::max(worst_assoc, rel_err(wrench_transform(compose(compose(a, b), c)),
                                                wrench_transform(compose(a, compose(b, c)))));
    worst_identity = std::max(worst_identity,
                              rel_err(wrench_transform(compose(a, Placement::identity())),
                                      wrench_transform(a)));
    worst_inverse = std::max(worst_inverse,
                             rel_err(Mat6(wrench_transform(a) * wrench_transform(invert(a))),
                                     Mat6(Mat6::Identity())));
    worst_factor = std::max(worst_factor, WrenchTransform(a).factorization_gap());
  }
  EXPECT_LE(worst_closure, 1e-11);
  EXPECT_LE(worst_assoc, 1e-11);
  EXPECT_LE(worst_identity, 1e-12);
  EXPECT_LE(worst_inverse, 1e-11);
  EXPECT_LE(worst_factor, 1e-11);

  // generator identity by central differences: O(h^2) decay, ratio 100 +- 20
  auto traj = [](double t) {
    const Mat3 c = Rotation::about_axis(Vec3(0, 0, 1), 0.9 * t).matrix() *
                   Rotation::about_axis(Vec3(1, 0, 0), 0.4 * t).matrix();
    return Placement{Rotation(c), Vec3(std::sin(t), 0.5 * t * t, std::cos(t))};
  };
  const double t0 = 0.6, fd = 1e-7;
  const Placement pl = traj(t0);
  const Mat3 cdot = (traj(t0 + fd).rotation.matrix() - traj(t0 - fd).rotation.matrix()) / (2 * fd);
  const Vec3 ddot = (traj(t0 + fd).translation - traj(t0 - fd).translation) / (2 * fd);
  const Vec3 omega_p = angular_velocity(pl.rotation, cdot);
  const auto g = generators(FrameVelocity::from_body(pl, Vec3(pl.rotation.inverse() * ddot), omega_p));
  double resid[2];
  const double hs[2] = {1e-3, 1e-4};
  for (int k = 0; k < 2; ++k) {
    const Mat6 ldot =
        (wrench_transform(traj(t0 + hs[k])) - wrench_transform(traj(t0 - hs[k]))) / (2 * hs[k]);
    resid[k] = std::max((ldot - wrench_transform(pl) * g.phi_wrench).norm(),
                        (ldot - g.psi_wrench * wrench_transform(pl)).norm());
  }
  const double ratio = resid[0] / resid[1];
  EXPECT_GE(ratio, 80.0);
  EXPECT_LE(ratio, 120.0);
}

TEST(Acceptance, Criterion04_PoissonRotationIntegration) {
  const double w = std::numbers::pi / 2;
  auto omega = [w](double) { return Vec3(0, 0, w); };
  const auto traj = integrate_rotation(Rotation::identity(), omega, 1e-3, 1000);
  const Mat3 exact = Rotation::about_axis(Vec3(0, 0, 1), w).matrix();
  EXPECT_LE((traj.back().matrix() - exact).norm(), 1e-9);
  for (const auto& c : traj) EXPECT_LE(c.orthogonality_residual(), 1e-12);

  // 4th order: halving h shrinks the endpoint error ~16x (truncation regime)
  auto err_at = [&](double h) {
    const int steps = static_cast<int>(std::llround(1.0 / h));
    return (integrate_rotation(Rotation::identity(), omega, h, steps).back().matrix() - exact).norm();
  };
  const double ratio = err_at(1e-2) / err_at(5e-3);
  EXPECT_GE(ratio, 12.0);
  EXPECT_LE(ratio, 20.0);
}

TEST(Acceptance, Criterion05_NewtonEulerRigidBody) {
  // torque-free sphere: omega exactly constant
  Mat6 th_sphere = Mat6::Zero();
  th_sphere.topLeftCorner<3, 3>() = Mat3::Identity();
  th_sphere.bottomRightCorner<3, 3>() = 0.4 * Mat3::Identity();
  const auto sphere = RigidBodyModel::from_operators(th_sphere);
  auto zero = [](double, const RigidBodyState&) { return Vec6::Zero(); };
  RigidBodyState s0;
  s0.quasi_velocity << 0.3, -0.1, 0.2, 0.2, -0.5, 1.0;
  const auto sphere_traj = simulate_rigid_body(sphere, zero, s0, 1e-3, 10000);
  double worst_omega = 0.0;
  for (const auto& s : sphere_traj.steps)
    worst_omega = std::max(worst_omega,
                           (s.state.quasi_velocity.tail<3>() - Vec3(0.2, -0.5, 1.0)).norm());
  EXPECT_LE(worst_omega, 1e-12);

  // symmetric top: body-frame omega precesses at (C-A)/A * w3 over 10 periods
  const double a = 2.0, c = 1.0, w_perp = 0.2, w3 = 1.0;
  Mat6 th_top = Mat6::Zero();
  th_top.topLeftCorner<3, 3>() = Mat3::Identity();
  th_top.bottomRightCorner<3, 3>() = Vec3(a, a, c).asDiagonal();
  const auto top = RigidBodyModel::from_operators(th_top);
  RigidBodyState t0;
  t0.quasi_velocity << 0, 0, 0, w_perp, 0, w3;
  const double rate = (c - a) / a * w3;
  const double horizon = 10.0 * 2.0 * std::numbers::pi / std::abs(rate);
  const double h = 1e-3;
  const int steps = static_cast<int>(std::llround(horizon / h));
  const auto top_traj = simulate_rigid_body(top, zero, t0, h, steps);
  double worst_precession = 0.0;
  for (std::size_t k = 0; k < top_traj.steps.size(); k += 1000) {
    const double t = top_traj.steps[k].t;
    const Vec3 expect(w_perp * std::cos(rate * t), w_perp * std::sin(rate * t), w3);
    worst_precession =
        std::max(worst_precession, (top_traj.steps[k].state.quasi_velocity.tail<3>() - expect).norm());
  }
  EXPECT_LE(worst_precession, 1e-6);

  // energy and frame-0 momentum drift over 10^4 steps at h = 1e-3
  Mat6 th_asym = Mat6::Zero();
  th_asym.topLeftCorner<3, 3>() = 2.0 * Mat3::Identity();
  th_asym.bottomRightCorner<3, 3>() = Vec3(2.0, 3.0, 4.0).asDiagonal();
  const auto asym = RigidBodyModel::from_operators(th_asym);
  RigidBodyState a0;
  a0.quasi_velocity << 0.4, -0.1, 0.2, 1.1, 0.6, -0.8;
  const auto asym_traj = simulate_rigid_body(asym, zero, a0, 1e-3, 10000);
  double worst_e = 0.0, worst_p = 0.0;
  for (const auto& s : asym_traj.steps) {
    worst_e = std::max(worst_e, rel_err(s.kinetic_energy, asym_traj.steps.front().kinetic_energy));
    worst_p = std::max(worst_p, rel_err(s.momentum_world, asym_traj.steps.front().momentum_world));
  }
  EXPECT_LE(worst_e, 1e-9);
  EXPECT_LE(worst_p, 1e-9);
}

TEST(Acceptance, Criterion06_GalileanInvariance) {
  Mat6 th = Mat6::Zero();
  th.topLeftCorner<3, 3>() = 1.7 * Mat3::Identity();
  th.bottomRightCorner<3, 3>() = Vec3(2.0, 2.5, 3.5).asDiagonal();
  const auto model = RigidBodyModel::from_operators(th);
  auto zero = [](double, const RigidBodyState&) { return Vec6::Zero(); };

  RigidBodyState s0;
  s0.placement = Placement{Rotation::about_axis(Vec3(1, 0, 1), 0.4), Vec3(0.5, -1, 2)};
  s0.quasi_velocity << 0.4, -0.2, 0.1, 0.9, 0.3, -0.6;

  const Rotation cb = Rotation::about_axis(Vec3(0, 1, 0), 0.8);
  const Vec3 db0(1, 2, -0.5), vb(0.7, -0.3, 0.2);
  RigidBodyState b0;
  b0.placement = compose(invert(galilean_boost(db0, vb, cb, 0.0)), s0.placement);
  Vec6 vq = s0.quasi_velocity;
  vq.head<3>() -= s0.placement.rotation.inverse() * vb;
  b0.quasi_velocity = vq;

  const double h = 1e-3;
  const int steps = 5000;
  const auto base = simulate_rigid_body(model, zero, s0, h, steps);
  const auto boosted = simulate_rigid_body(model, zero, b0, h, steps);
  double worst = 0.0;
  for (std::size_t k = 0; k < base.steps.size(); ++k) {
    const double t = base.steps[k].t;
    const Placement mapped =
        compose(galilean_boost(db0, vb, cb, t), boosted.steps[k].state.placement);
    const auto& direct = base.steps[k].state.placement;
    worst = std::max(worst, (mapped.rotation.matrix() - direct.rotation.matrix()).norm());
    worst = std::max(worst, (mapped.translation - direct.translation).norm());
    Vec6 v_back = boosted.steps[k].state.quasi_velocity;
    v_back.head<3>() += mapped.rotation.inverse() * vb;
    worst = std::max(worst, (v_back - base.steps[k].state.quasi_velocity).norm());
  }
  EXPECT_LE(worst, 1e-9);
}

TEST(Acceptance, Criterion07_MeshcherskyMassPoint) {
  // Tsiolkovsky closed form at h = 1e-3
  const double m0 = 2.0, k = 0.4, c = 3.0;
  MassPointModel rocket;
  rocket.nu = [=](double t) { return -k * m0 * std::exp(-k * t); };
  rocket.gain_velocity = [=](double, const Vec3&, const Vec3& v) {
    return Vec3(v - c * Vec3::UnitX());
  };
  const auto traj = simulate_mass_point(rocket, Vec3::Zero(), Vec3::Zero(), m0, 1e-3, 1000);
  const double m_end = m0 * std::exp(-k * 1.0);
  EXPECT_LE((traj.back().v - c * std::log(m0 / m_end) * Vec3::UnitX()).norm(), 1e-9);

  // nu = 0 coincides bitwise with a plain Newton's-law integration
  auto force = [](double t, const Vec3& x, const Vec3& v) {
    return Vec3(std::sin(t) - 0.1 * v.x(), 0.2 * x.y(), 1.0);
  };
  MassPointModel plain;
  plain.force = force;
  plain.gain_velocity = [](double, const Vec3&, const Vec3& v) { return Vec3(v + Vec3(5, 5, 5)); };
  const double m = 1.7, h = 1e-2;
  const int steps = 300;
  const auto mp = simulate_mass_point(plain, Vec3(0.1, 0.2, 0.3), Vec3(1, 0, -1), m, h, steps);

  using State = Eigen::Matrix<double, 7, 1>;
  State y;
  y << 0.1, 0.2, 0.3, 1, 0, -1, m;
  auto rhs = [&](double t, const State& s) -> State {
    State dy;
    const Vec3 x = s.head<3>(), v = s.segment<3>(3);
    dy << v, Vec3(force(t, x, v) / s[6]), 0.0;
    return dy;
  };
  double t = 0.0;
  for (int i = 0; i < steps; ++i) {
    y = rk4_step(rhs, y, t, h);
    t += h;
  }
  EXPECT_EQ(mp.back().x, Vec3(y.head<3>()));
  EXPECT_EQ(mp.back().v, Vec3(y.segment<3>(3)));
  EXPECT_EQ(mp.back().m, m);
}

TEST(Acceptance, Criterion08_GravityOrbits) {
  // two equal unit masses at separation 2 on circular orbits: period 4 pi
  const std::vector<NBody> init{{Vec3(1, 0, 0), Vec3(0, 0.5, 0), 1.0},
                                {Vec3(-1, 0, 0), Vec3(0, -0.5, 0), 1.0}};
  const double h = 1e-3;
  const auto traj = nbody_simulate(init, 1.0, h, 13000, 1e-9, 1);
  // unwrap the separation angle to the first full revolution
  double prev = 0.0, total = 0.0, period = 0.0;
  for (std::size_t k = 1; k < traj.size() && period == 0.0; ++k) {
    const Vec3 r = traj[k].bodies[0].x - traj[k].bodies[1].x;
    const double th = std::atan2(r.y(), r.x());
    double dth = th - prev;
    while (dth > std::numbers::pi) dth -= 2 * std::numbers::pi;
    while (dth < -std::numbers::pi) dth += 2 * std::numbers::pi;
    const double before = total;
    total += dth;
    prev = th;
    if (std::abs(total) >= 2 * std::numbers::pi) {
      const double frac = (2 * std::numbers::pi - std::abs(before)) / std::abs(dth);
      period = traj[k - 1].t + frac * h;
    }
  }
  const double expect = std::numbers::pi * std::sqrt(2.0 * 8.0 / 1.0);  // pi sqrt(2 d^3 / (gamma m))
  ASSERT_GT(period, 0.0);
  EXPECT_LE(std::abs(period - expect) / expect, 1e-3);

  // 3-body conservation over 10^3 steps
  Rng rng(1008);
  std::vector<NBody> three;
  while (three.size() < 3) {
    const Vec3 x = rng.vec3(-1.5, 1.5);
    bool far = true;
    for (const auto& b : three) far = far && (b.x - x).norm() > 1.2;
    if (far) three.push_back({x, rng.vec3(-0.3, 0.3), rng.uniform(0.5, 1.5)});
  }
  const auto t3 = nbody_simulate(three, 1.0, 1e-3, 1000);
  double worst_e = 0.0, worst_p = 0.0;
  for (const auto& s : t3) {
    worst_e = std::max(worst_e, rel_err(s.energy, t3.front().energy));
    worst_p = std::max(worst_p, (s.momentum - t3.front().momentum).norm());
  }
  EXPECT_LE(worst_e, 1e-6);
  EXPECT_LE(worst_p, 1e-12);
}

namespace {

template <typename Map, typename MatT>
void check_case(Rng& rng, const std::function<Map(Rng&)>& draw,
                const std::function<MatT(Rng&)>& draw_z, double* worst_compose,
                double* worst_invert) {
  for (int pair = 0; pair < 500; ++pair) {
    const Map outer = draw(rng), inner = draw(rng);
    const Map both = compose(outer, inner);
    for (int k = 0; k < 20; ++k) {
      const MatT z = draw_z(rng);
      *worst_compose =
          std::max(*worst_compose, rel_err(both.apply(z), MatT(outer.apply(inner.apply(z)))));
    }
    const Map inv = invert(outer);
    const MatT z = draw_z(rng);
    *worst_invert = std::max(*worst_invert, rel_err(inv.apply(outer.apply(z)), z));
  }
}

}  // namespace

TEST(Acceptance, Criterion09_ConstitutiveGroups) {
  Rng rng(1009);
  auto draw_m3 = std::function<IsoMap3(Rng&)>([](Rng& r) {
    while (true) {
      IsoMap3 m{r.uniform(-2, 2), r.uniform(-2, 2), r.uniform(-2, 2), r.uniform(-2, 2)};
      if (std::abs(m.determinant()) > 1e-2) return m;
    }
  });
  auto draw_msym3 = std::function<IsoMapSym3(Rng&)>([](Rng& r) {
    while (true) {
      IsoMapSym3 m{r.uniform(-2, 2), r.uniform(-2, 2), r.uniform(-2, 2)};
      if (std::abs(m.determinant()) > 1e-2) return m;
    }
  });
  auto draw_m2 = std::function<IsoMap2(Rng&)>([](Rng& r) {
    while (true) {
      IsoMap2 m{r.uniform(-2, 2), r.uniform(-2, 2), r.uniform(-2, 2), r.uniform(-2, 2),
                r.uniform(-2, 2), r.uniform(-2, 2), r.uniform(-2, 2), r.uniform(-2, 2)};
      if (std::abs(m.determinant()) > 1e-2) return m;
    }
  });
  auto draw_msym2 = std::function<IsoMapSym2(Rng&)>([](Rng& r) {
    while (true) {
      IsoMapSym2 m{r.uniform(-2, 2), r.uniform(-2, 2), r.uniform(-2, 2), r.uniform(-2, 2)};
      if (std::abs(m.determinant()) > 1e-2) return m;
    }
  });
  auto draw_z3 = std::function<Mat3(Rng&)>([](Rng& r) {
    Mat3 z;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) z(i, j) = r.uniform(-2, 2);
    return z;
  });
  auto draw_zsym3 = std::function<Mat3(Rng&)>([draw_z3](Rng& r) {
    const Mat3 z = draw_z3(r);
    return Mat3(0.5 * (z + z.transpose()));
  });
  auto draw_z2 = std::function<Mat2(Rng&)>([](Rng& r) {
    Mat2 z;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) z(i, j) = r.uniform(-2, 2);
    return z;
  });
  auto draw_zsym2 = std::function<Mat2(Rng&)>([draw_z2](Rng& r) {
    const Mat2 z = draw_z2(r);
    return Mat2(0.5 * (z + z.transpose()));
  });

  double worst_compose = 0.0, worst_invert = 0.0;
  check_case<IsoMap3, Mat3>(rng, draw_m3, draw_z3, &worst_compose, &worst_invert);
  check_case<IsoMapSym3, Mat3>(rng, draw_msym3, draw_zsym3, &worst_compose, &worst_invert);
  check_case<IsoMap2, Mat2>(rng, draw_m2, draw_z2, &worst_compose, &worst_invert);
  check_case<IsoMapSym2, Mat2>(rng, draw_msym2, draw_zsym2, &worst_compose, &worst_invert);
  EXPECT_LE(worst_compose, 1e-11);
  EXPECT_LE(worst_invert, 1e-11);

  // determinant classification: 100 constructed singular + 100 regular per case
  for (int i = 0; i < 100; ++i) {
    EXPECT_FALSE(is_well_defined(IsoMap3{rng.uniform(-2, 2), 1.0, -3.0, 0.0}));
    EXPECT_FALSE(is_well_defined(IsoMap3{rng.uniform(-2, 2), rng.uniform(-2, 2), 1.3, 1.3}));
    EXPECT_FALSE(is_well_defined(IsoMapSym3{rng.uniform(-2, 2), 1.0, -3.0}));
    const double a2 = rng.uniform(0.5, 2.0), b2 = rng.uniform(0.5, 2.0);
    EXPECT_FALSE(is_well_defined(IsoMap2{rng.uniform(-2, 2), rng.uniform(-2, 2), 0, 0, a2, a2, b2, b2}));
    EXPECT_FALSE(is_well_defined(IsoMapSym2{rng.uniform(-2, 2), 1.0, -2.0, 0.0}));
    EXPECT_TRUE(is_well_defined(draw_m3(rng)));
    EXPECT_TRUE(is_well_defined(draw_msym3(rng)));
    EXPECT_TRUE(is_well_defined(draw_m2(rng)));
    EXPECT_TRUE(is_well_defined(draw_msym2(rng)));
  }

  // planar identity list, exact, 200 random Z
  const Mat2 j = tilde2();
  const Mat2 i2 = Mat2::Identity();
  for (int i = 0; i < 200; ++i) {
    const Mat2 z = draw_z2(rng);
    const double tr = z.trace(), trjz = (j * z).trace();
    EXPECT_EQ((j * z.transpose() - (j * z - trjz * i2)).norm(), 0.0);
    EXPECT_EQ((z * j - (trjz * i2 + z.transpose() * j)).norm(), 0.0);
    EXPECT_EQ((j * z * j - (z.transpose() - tr * i2)).norm(), 0.0);
    EXPECT_EQ((j * z.transpose() * j - (z - tr * i2)).norm(), 0.0);
    EXPECT_EQ((j * z.transpose()).trace(), -trjz);
    EXPECT_EQ((trjz * j - (z.transpose() - z)).norm(), 0.0);
  }
}

TEST(Acceptance, Criterion10_IsotropyUnderRotation) {
  Rng rng(1010);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    {
      const Mat3 c = rng.rotation();
      Mat3 z;
      for (int r = 0; r < 3; ++r)
        for (int cc = 0; cc < 3; ++cc) z(r, cc) = rng.uniform(-2, 2);
      IsoMap3 m{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
      worst = std::max(worst, rel_err(m.apply(Mat3(c * z * c.transpose())),
                                      Mat3(c * m.apply(z) * c.transpose())));
    }
    {
      const Mat2 c = rng.rotation2();
      Mat2 z;
      for (int r = 0; r < 2; ++r)
        for (int cc = 0; cc < 2; ++cc) z(r, cc) = rng.uniform(-2, 2);
      IsoMap2 m{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2),
                rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
      worst = std::max(worst, rel_err(m.apply(Mat2(c * z * c.transpose())),
                                      Mat2(c * m.apply(z) * c.transpose())));
    }
  }
  EXPECT_LE(worst, 1e-11);
}

TEST(Acceptance, Criterion11_BalanceResiduals) {
  // lemma-1 convergence at order 2.0 +- 0.2 across h, h/2
  TensorField f;
  f.eval = [](const Vec3& x) {
    Mat3 p;
    const double a = std::sin(x.x()) * std::cos(x.y());
    const double b = std::cos(x.y() + x.z());
    p << 2 + a, b, 0.3 * std::sin(x.z()),
         0.5 * b, 1 - a, 0.2 * std::cos(x.x()),
         0.1 * std::sin(x.y()), 0.4 * a, 1 + b;
    return p;
  };
  const auto lemma = lemma1_residual(f, Vec3(0.2, 0.1, -0.3), {Vec3::Zero(), Vec3::Ones()}, 0.02);
  EXPECT_NEAR(lemma.integral_form.order, 2.0, 0.2);
  EXPECT_NEAR(lemma.pointwise_form.order, 2.0, 0.2);

  // tau branch: constant antisymmetric stress reproduces the volume term
  const Vec3 w(0.7, -0.4, 0.2);
  TensorField fw;
  fw.eval = [w](const Vec3&) { return cross_matrix(w); };
  fw.divergence = [](const Vec3&) { return Vec3::Zero(); };
  const double h = 0.01;
  const auto tau_rep = lemma1_residual(fw, Vec3(0.5, 0.5, 0.5), {Vec3::Zero(), Vec3::Ones()}, h);
  const double volume = std::pow(1.0 - 2 * h, 3);
  EXPECT_LE(rel_err(tau_rep.integral_lhs[0], Vec3(-2.0 * volume * w)), 1e-12);
  EXPECT_LE(rel_err(tau_rep.integral_rhs[0], Vec3(-2.0 * volume * w)), 1e-12);

  // polar balance, manufactured: order 2.0 +- 0.2
  PolarFields pf;
  const double eps = 0.3;
  auto w_of = [](const Vec3& x) { return Vec3(std::sin(x.x()), std::sin(x.y()), std::sin(x.z())); };
  pf.rho = [](const Vec3& x) { return 2.0 + 0.2 * std::sin(x.x()); };
  pf.nu = [](const Vec3& x) { return 0.1 * std::cos(x.y()); };
  pf.v = [](const Vec3& x) { return Vec3(std::sin(x.y()), std::cos(x.z()), x.x() * x.y()); };
  pf.mu = [](const Vec3& x) { return Vec3(x.z(), std::sin(x.x()), 0.5 * x.y()); };
  pf.v_dot = [](const Vec3& x) { return Vec3(0.2 * x.x(), -0.1, std::sin(x.z())); };
  pf.mu_dot = [](const Vec3& x) { return Vec3(0.05 * x.y(), 0.1 * x.z(), -0.2); };
  pf.A << 0, 0.1, 0, 0.1, 0, 0, 0, 0, 0;
  pf.B = 0.5 * Mat3::Identity();
  pf.stress = [eps, w_of](const Vec3& x) {
    Mat3 p;
    const double a = std::sin(x.x()) * std::cos(x.y());
    p << 2 + a, 0.5 * std::cos(x.y()), 0,
         0.5 * std::cos(x.y()), 1 - a, 0.3 * std::sin(x.z()),
         0, 0.3 * std::sin(x.z()), 1 + a;
    return Mat3(p + eps * cross_matrix(w_of(x)));
  };
  pf.couple_stress = [w_of](const Vec3& x) { return Mat3(0.4 * cross_matrix(w_of(x))); };
  auto div_p = [](const Vec3& x) {
    const double ca = std::cos(x.x()) * std::cos(x.y());
    const double sa = -std::sin(x.x()) * std::sin(x.y());
    return Vec3(ca - 0.5 * std::sin(x.y()), -sa + 0.3 * std::cos(x.z()), 0.0);
  };
  Mat6 th;
  th.topLeftCorner<3, 3>() = Mat3::Identity();
  th.topRightCorner<3, 3>() = pf.A;
  th.bottomLeftCorner<3, 3>() = pf.A.transpose();
  th.bottomRightCorner<3, 3>() = pf.B;
  pf.gamma = [&, th](const Vec3& x) {
    Vec6 vmu, vmu_dot;
    vmu << pf.v(x), pf.mu(x);
    vmu_dot << pf.v_dot(x), pf.mu_dot(x);
    const Vec6 lhs = pf.rho(x) * (th * vmu_dot) + pf.nu(x) * (th * vmu);
    return Vec3((lhs.head<3>() - div_p(x)) / pf.rho(x));
  };
  pf.delta = [&, th, eps, w_of](const Vec3& x) {
    Vec6 vmu, vmu_dot;
    vmu << pf.v(x), pf.mu(x);
    vmu_dot << pf.v_dot(x), pf.mu_dot(x);
    const Vec6 lhs = pf.rho(x) * (th * vmu_dot) + pf.nu(x) * (th * vmu);
    const Vec3 tau = -2.0 * eps * w_of(x);
    return Vec3((lhs.tail<3>() - tau) / pf.rho(x));
  };
  Rng rng(1011);
  std::vector<Vec3> pts;
  for (int i = 0; i < 30; ++i) pts.push_back(rng.vec3(-0.8, 0.8));
  const auto polar = polar_balance_residual(pf, pts, 0.02);
  EXPECT_NEAR(polar.order, 2.0, 0.2);

  // cauchy balance, manufactured with an isotropic-map stress: order 2.0 +- 0.2
  const IsoMapSym3 map{0.5, 2.0, 3.0};
  CauchyFields cf;
  cf.rho = [](const Vec3& x) { return 1.5 + 0.1 * std::sin(x.z()); };
  cf.nu = [](const Vec3& x) { return 0.05 * std::cos(x.x()); };
  cf.v = [](const Vec3& x) { return Vec3(std::sin(x.y()), std::sin(x.z()), std::sin(x.x())); };
  cf.v_dot = [](const Vec3& x) { return Vec3(0.1 * x.x(), -0.2 * x.y(), 0.3); };
  cf.stress = [map](const Vec3& x) {
    Mat3 z;
    z << 0, std::cos(x.y()), std::cos(x.x()),
         std::cos(x.y()), 0, std::cos(x.z()),
         std::cos(x.x()), std::cos(x.z()), 0;
    return map.apply(Mat3(0.5 * z));
  };
  auto div_cp = [map](const Vec3& x) {
    return Vec3(-0.5 * map.p2 * Vec3(std::sin(x.y()), std::sin(x.z()), std::sin(x.x())));
  };
  cf.g = [&](const Vec3& x) {
    return Vec3((cf.rho(x) * cf.v_dot(x) + cf.nu(x) * cf.v(x) - div_cp(x)) / cf.rho(x));
  };
  const auto cauchy = cauchy_balance_residual(cf, pts, 0.02);
  EXPECT_NEAR(cauchy.order, 2.0, 0.2);
  EXPECT_FALSE(cauchy.symmetry_violation);
}

TEST(Acceptance, Criterion12_TransportContinuity) {
  // uniform expansion: mass constant to 1e-12 along the flow
  auto mass_at = [](double t) {
    MassDistribution d;
    const int n = 5;
    const double h0 = 1.0 / n;
    const double g = std::exp(t);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          const Vec3 x0((i + 0.5) * h0 - 0.5, (j + 0.5) * h0 - 0.5, (k + 0.5) * h0 - 0.5);
          d.ac.push_back({Vec3(g * x0), g * g * g * h0 * h0 * h0, 2.0 * std::exp(-3.0 * t), 0.0});
        }
    return total_mass(d);
  };
  const double m0 = mass_at(0.0);
  for (double t : {0.5, 1.0, 2.0}) EXPECT_LE(rel_err(mass_at(t), m0), 1e-12);

  // continuity residual is O(h^2) for the same manufactured flow
  auto rho = [](const Vec3&, double t) { return std::exp(-3.0 * t); };
  auto v = [](const Vec3& x, double) { return x; };
  auto nu = [](const Vec3&, double) { return 0.0; };
  const auto coarse = continuity_residual(rho, v, nu, {Vec3::Constant(-0.5), Vec3::Constant(0.5), 6}, 0.4);
  const auto fine = continuity_residual(rho, v, nu, {Vec3::Constant(-0.5), Vec3::Constant(0.5), 11}, 0.4);
  const double ratio = coarse.max_abs / fine.max_abs;
  EXPECT_GE(ratio, 3.0);
  EXPECT_LE(ratio, 5.0);

  // pure-point transport matches the finite difference of m(t) f(t)
  auto m_of = [](double t) { return 2.0 + std::sin(t); };
  auto f_of = [](double t) { return t * t + 1.0; };
  const double t = 0.7, dt = 1e-5;
  MassDistribution d;
  d.pp.push_back({Vec3::Zero(), m_of(t), std::cos(t)});
  std::vector<FieldSample> s{{f_of(t), 2.0 * t}};
  const double fd = (m_of(t + dt) * f_of(t + dt) - m_of(t - dt) * f_of(t - dt)) / (2 * dt);
  EXPECT_LE(std::abs(transport_derivative(d, s) - fd), 1e-8);
}

TEST(Acceptance, Criterion13_Multiphase) {
  Rng rng(1013);
  // component-sum identity per step; micro-inertia trace identity
  for (int trial = 0; trial < 50; ++trial) {
    MultiphaseState s;
    const int n = 3, m = 2;
    s.rho = Eigen::VectorXd::Zero(n);
    for (int a = 0; a < n; ++a) s.rho[a] = rng.uniform(0.5, 2.0);
    for (int a = 0; a < n; ++a) s.offsets.push_back(rng.vec3(-0.3, 0.3));
    s.stoichiometry = Eigen::MatrixXd(n, m);
    for (int a = 0; a < n; ++a)
      for (int j = 0; j < m; ++j) s.stoichiometry(a, j) = rng.uniform(-1, 1);
    s.rates = Eigen::VectorXd(m);
    for (int j = 0; j < m; ++j) s.rates[j] = rng.uniform(0, 0.3);
    const double div_v = rng.uniform(-0.3, 0.3);
    const Eigen::VectorXd gamma = s.formation();
    EXPECT_LE(std::abs((gamma - div_v * s.rho).sum() - (gamma.sum() - s.total_density() * div_v)),
              1e-14);
    // two summation orders of the same identity: equal to roundoff
    EXPECT_LE(rel_err(s.micro_inertia().trace(), s.micro_inertia_trace()), 1e-15);
  }

  // two-component transfer closed form to 1e-10
  MultiphaseState s;
  s.rho = Eigen::Vector2d(1.0, 0.5);
  s.offsets = {Vec3(0.1, 0, 0), Vec3(0, 0.2, 0)};
  s.stoichiometry = Eigen::MatrixXd(2, 1);
  s.stoichiometry << -1.0, 1.0;
  s.rates = Eigen::VectorXd::Constant(1, 0.25);
  MultiphaseState cur = s;
  for (int i = 0; i < 1000; ++i) cur = multiphase_step(cur, 0.0, 1e-3);
  EXPECT_LE(std::abs(cur.rho[0] - 0.75), 1e-10);
  EXPECT_LE(std::abs(cur.rho[1] - 0.75), 1e-10);
}

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  const char* bin = std::getenv("CZ_MECH_BIN");
  if (!bin) return {};
  const std::string cmd = std::string(bin) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {};
  CliResult res;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) res.output.append(buf.data(), n);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

}  // namespace

TEST(Acceptance, Criterion14_CliDeterminism) {
  namespace fs = std::filesystem;
  ASSERT_NE(std::getenv("CZ_MECH_BIN"), nullptr)
      << "CZ_MECH_BIN must point at the cz-mech binary";
  const fs::path dir = fs::temp_directory_path() / "czmech_acceptance";
  fs::create_directories(dir);
  const fs::path cfg = dir / "twobody.json";
  std::ofstream(cfg) << R"({
    "schema_version": 1,
    "kind": "nbody",
    "gamma": 1.0,
    "bodies": [
      {"x": [1, 0, 0], "v": [0, 0.5, 0], "m": 1.0},
      {"x": [-1, 0, 0], "v": [0, -0.5, 0], "m": 1.0}
    ],
    "integrator": {"h": 0.001, "steps": 1500},
    "output": {"every": 10}
  })";

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };

  const fs::path out1 = dir / "a.csv", out2 = dir / "b.csv";
  const auto r1 = run_cli("simulate nbody --config " + cfg.string() + " --out " + out1.string());
  const auto r2 = run_cli("simulate nbody --config " + cfg.string() + " --out " + out2.string());
  EXPECT_EQ(r1.exit_code, 0) << r1.output;
  EXPECT_EQ(r1.output, r2.output);
  EXPECT_EQ(slurp(out1), slurp(out2));
  EXPECT_FALSE(slurp(out1).empty());

  const auto v1 = run_cli("verify screw --trials 120 --seed 9");
  const auto v2 = run_cli("verify screw --trials 120 --seed 9");
  EXPECT_EQ(v1.exit_code, 0) << v1.output;
  EXPECT_EQ(v1.output, v2.output);

  // exit-code contract on malformed inputs
  const fs::path bad = dir / "bad.json";
  std::ofstream(bad) << R"({"schema_version": 1, "kind": "nbody", "gravity": 1.0,
    "bodies": [{"x": [0,0,0], "v": [0,0,0], "m": 1}],
    "integrator": {"h": 0.001, "steps": 5}})";
  const auto rbad = run_cli("simulate nbody --config " + bad.string());
  EXPECT_EQ(rbad.exit_code, 2);
  EXPECT_NE(rbad.output.find("gravity"), std::string::npos);
  EXPECT_EQ(run_cli("verify nosuchsuite").exit_code, 2);

  std::error_code ec;
  fs::remove_all(dir, ec);
}

namespace {

/// Prints one stable line per criterion after each test finishes.
class CriterionPrinter : public ::testing::EmptyTestEventListener {
  void OnTestEnd(const ::testing::TestInfo& info) override {
    const std::string name = info.name();
    if (name.rfind("Criterion", 0) != 0) return;
    std::printf("[%s] %s\n", info.result()->Passed() ? "PASS" : "FAIL", name.c_str());
    std::fflush(stdout);
  }
};

}  // namespace

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  ::testing::UnitTest::GetInstance()->listeners().Append(new CriterionPrinter);
  return RUN_ALL_TESTS();
}
