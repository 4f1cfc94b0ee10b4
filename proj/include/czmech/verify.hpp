#pragma once

// Property suites behind the `verify` CLI subcommand. Each property draws its
// own deterministic stream from (seed, property index), so suite results are
// reproducible byte-for-byte and independent of execution order. Tolerances
// are scaled by CZ_MECH_EPS.

#include "czmech/constitutive.hpp"
#include "czmech/continuum.hpp"
#include "czmech/dynamics.hpp"
#include "czmech/frames.hpp"
#include "czmech/measures.hpp"
#include "czmech/numerics.hpp"
#include "czmech/screw.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace czmech::verify {

struct PropertyResult {
  std::string name;
  int trials = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string counterexample;  // empty unless the property failed
};

struct VerificationReport {
  std::string suite;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<PropertyResult> properties;
  bool pass = true;
};

namespace detail {

/// Accumulates the worst residual over trials and captures the first
/// violating trial as a counterexample string.
class Property {
public:
  Property(std::string name, double tolerance) : result_{} {
    result_.name = std::move(name);
    result_.tolerance = tolerance * eps_scale();
  }

  void sample(double residual, const std::function<std::string()>& describe) {
    ++result_.trials;
    if (residual > result_.max_residual) result_.max_residual = residual;
    if (residual > result_.tolerance && result_.counterexample.empty())
      result_.counterexample = describe();
  }

  PropertyResult finish() {
    result_.pass = result_.counterexample.empty();
    return result_;
  }

private:
  PropertyResult result_;
};

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  return seed ^ (0x9e3779b97f4a7c15ull + (salt << 17) + (salt >> 3));
}

inline std::string describe_vec(const char* name, const Vec3& v) {
  return std::string(name) + "=[" + to_decimal_string(v.x()) + "," + to_decimal_string(v.y()) +
         "," + to_decimal_string(v.z()) + "]";
}

inline Slider3 random_slider(Rng& rng) {
  return Slider3{rng.vec3(-2, 2), rng.vec3(-2, 2), rng.vec3(-2, 2)};
}

inline std::string describe_slider(const Slider3& s) {
  return describe_vec("p", s.resultant) + " " + describe_vec("q", s.torque) + " " +
         describe_vec("base", s.base);
}

// ---------------------------------------------------------------------------

inline std::vector<PropertyResult> screw_suite(int trials, std::uint64_t seed) {
  std::vector<PropertyResult> out;

  {
    Property prop("reduction_two_path_consistency", 1e-12);
    Rng rng(mix_seed(seed, 1));
    for (int i = 0; i < trials; ++i) {
      const Slider3 s = random_slider(rng);
      const Vec3 z = rng.vec3(-2, 2), y = rng.vec3(-2, 2);
      const auto direct = reduce(s, y);
      const auto via_z = reduce(rebase(s, z), y);
      prop.sample(rel_err(direct.torque, via_z.torque),
                  [&] { return describe_slider(s) + " " + describe_vec("z", z) + " " + describe_vec("y", y); });
    }
    out.push_back(prop.finish());
  }

  {
    Property prop("reduction_affine_shift", 1e-12);
    Rng rng(mix_seed(seed, 2));
    for (int i = 0; i < trials; ++i) {
      const Slider3 s = random_slider(rng);
      const Vec3 y = rng.vec3(-2, 2), y2 = rng.vec3(-2, 2);
      const Vec3 lhs = reduce(s, y).torque;
      const Vec3 rhs = reduce(s, y2).torque + alternant<3>(Vec3(y2 - y), s.resultant);
      prop.sample(rel_err(lhs, rhs), [&] { return describe_slider(s); });
    }
    out.push_back(prop.finish());
  }

  {
    Property prop("torque_split_intrinsic_plus_resultant", 1e-12);
    Property shift("total_shift_identity", 1e-12);
    Rng rng(mix_seed(seed, 3));
    for (int i = 0; i < trials; ++i) {
      std::vector<WeightedSlider<3>> items;
      const int n = 2 + static_cast<int>(rng.uniform(0, 5));
      for (int k = 0; k < n; ++k) items.push_back({rng.uniform(-2, 2), random_slider(rng)});
      const Vec3 y = rng.vec3(-2, 2), z = rng.vec3(-2, 2);
      const auto at_y = screw_total<3>(items, y);
      const auto at_z = screw_total<3>(items, z);
      prop.sample(rel_err(Vec3(at_y.intrinsic_torque + at_y.resultant_torque), Vec3(at_y.total.torque)),
                  [&] { return "n=" + std::to_string(n); });
      const Vec3 shifted = at_z.total.torque + alternant<3>(Vec3(z - y), at_z.total.resultant);
      shift.sample(rel_err(Vec3(at_y.total.torque), shifted),
                   [&] { return "n=" + std::to_string(n) + " " + describe_vec("y", y) + " " + describe_vec("z", z); });
    }
    out.push_back(prop.finish());
    out.push_back(shift.finish());
  }

  {
    Property prop("alternant_outer_product_agreement", 1e-14);
    Rng rng(mix_seed(seed, 4));
    for (int i = 0; i < trials; ++i) {
      const Vec3 r = rng.vec3(-2, 2), p = rng.vec3(-2, 2);
      const Mat3 outer = p * r.transpose() - r * p.transpose();
      const Vec3 dual(outer(2, 1), outer(0, 2), outer(1, 0));
      prop.sample((alternant<3>(r, p) - dual).norm() + (alternant<3>(r, p) + alternant<3>(p, r)).norm(),
                  [&] { return describe_vec("r", r) + " " + describe_vec("p", p); });
    }
    out.push_back(prop.finish());
  }

  {
    Property prop("reduction_matrix_4d_exact", 0.0);
    Rng rng(mix_seed(seed, 5));
    for (int i = 0; i < trials; ++i) {
      Vec4 r, p;
      for (int k = 0; k < 4; ++k) {
        r[k] = rng.uniform(-2, 2);
        p[k] = rng.uniform(-2, 2);
      }
      const Mat4 outer = p * r.transpose() - r * p.transpose();
      const auto skew = SkewTensor<4>::from_matrix(outer);
      const Torque<4> oracle = torque4(skew.omega(), skew.varpi());
      const Torque<4> via_matrix = reduction_matrix<4>(r) * p;
      prop.sample((via_matrix - oracle).cwiseAbs().maxCoeff(), [&] {
        return "r=[" + to_decimal_string(r[0]) + "," + to_decimal_string(r[1]) + "," +
               to_decimal_string(r[2]) + "," + to_decimal_string(r[3]) + "]";
      });
    }
    out.push_back(prop.finish());
  }

  {
    Property prop("screw_total_linearity_permutation", 1e-13);
    Rng rng(mix_seed(seed, 6));
    for (int i = 0; i < trials; ++i) {
      std::vector<WeightedSlider<3>> items;
      for (int k = 0; k < 5; ++k) items.push_back({rng.uniform(-1, 1), random_slider(rng)});
      const Vec3 y = rng.vec3(-2, 2);
      const auto base = screw_total<3>(items, y);
      auto doubled = items;
      for (auto& it : doubled) it.weight *= 2.0;
      auto shuffled = items;
      std::swap(shuffled[0], shuffled[4]);
      std::swap(shuffled[1], shuffled[2]);
      const double r1 = rel_err(Vec6(2.0 * base.total.stacked()),
                                screw_total<3>(doubled, y).total.stacked());
      const double r2 = rel_err(base.total.stacked(), screw_total<3>(shuffled, y).total.stacked());
      prop.sample(std::max(r1, r2), [&] { return describe_vec("y", y); });
    }
    out.push_back(prop.finish());
  }

  return out;
}

// ---------------------------------------------------------------------------

inline std::vector<PropertyResult> galilean_suite(int trials, std::uint64_t seed) {
  std::vector<PropertyResult> out;
  auto random_placement = [](Rng& rng) {
    return Placement{Rotation(rng.rotation()), rng.vec3(-2, 2)};
  };

  {
    Property closure("group_closure", 1e-12);
    Property assoc("group_associativity", 1e-11);
    Property inverse("group_inverse", 1e-12);
    Rng rng(mix_seed(seed, 11));
    for (int i = 0; i < trials; ++i) {
      const Placement a = random_placement(rng), b = random_placement(rng), c = random_placement(rng);
      closure.sample(rel_err(Mat6(wrench_transform(a) * wrench_transform(b)),
                             wrench_transform(compose(a, b))),
                     [&] { return describe_vec("da", a.translation); });
      assoc.sample(rel_err(wrench_transform(compose(compose(a, b), c)),
                           wrench_transform(compose(a, compose(b, c)))),
                   [&] { return describe_vec("da", a.translation); });
      inverse.sample(rel_err(Mat6(wrench_transform(a) * wrench_transform(invert(a))),
                             Mat6(Mat6::Identity())),
                     [&] { return describe_vec("da", a.translation); });
    }
    out.push_back(closure.finish());
    out.push_back(assoc.finish());
    out.push_back(inverse.finish());
  }

  {
    Property prop("factorizations_agree", 1e-12);
    Rng rng(mix_seed(seed, 12));
    for (int i = 0; i < trials; ++i) {
      const Placement p = random_placement(rng);
      prop.sample(WrenchTransform(p).factorization_gap(),
                  [&] { return describe_vec("d", p.translation); });
    }
    out.push_back(prop.finish());
  }

  {
    Property prop("generator_fd_ratio", 20.0);  // |ratio - 100|
    Rng rng(mix_seed(seed, 13));
    const int reps = std::max(1, trials / 50);
    for (int i = 0; i < reps; ++i) {
      const double w1 = rng.uniform(0.5, 1.5), w2 = rng.uniform(0.2, 0.8);
      auto traj = [w1, w2](double t) {
        const Mat3 c = Rotation::about_axis(Vec3(0, 0, 1), w1 * t).matrix() *
                       Rotation::about_axis(Vec3(1, 0, 0), w2 * t).matrix();
        return Placement{Rotation(c), Vec3(std::sin(t), 0.5 * t * t, std::cos(t))};
      };
      const double t0 = rng.uniform(0.2, 0.8);
      const Placement pl = traj(t0);
      const double fd = 1e-7;
      const Mat3 cdot = (traj(t0 + fd).rotation.matrix() - traj(t0 - fd).rotation.matrix()) / (2 * fd);
      const Vec3 ddot = (traj(t0 + fd).translation - traj(t0 - fd).translation) / (2 * fd);
      const Vec3 omega_p = angular_velocity(pl.rotation, cdot);
      const auto fv = FrameVelocity::from_body(pl, Vec3(pl.rotation.inverse() * ddot), omega_p);
      const auto g = generators(fv);
      double resid[2];
      const double hs[2] = {1e-3, 1e-4};
      for (int k = 0; k < 2; ++k) {
        const Mat6 ldot = (wrench_transform(traj(t0 + hs[k])) - wrench_transform(traj(t0 - hs[k]))) /
                          (2 * hs[k]);
        resid[k] = std::max((ldot - wrench_transform(pl) * g.phi_wrench).norm(),
                            (ldot - g.psi_wrench * wrench_transform(pl)).norm());
      }
      prop.sample(std::abs(resid[0] / resid[1] - 100.0),
                  [&] { return "t0=" + to_decimal_string(t0); });
    }
    out.push_back(prop.finish());
  }

  {
    Property prop("twist_block_swap_and_generators", 1e-14);
    Rng rng(mix_seed(seed, 14));
    const Mat6 pi = block_swap();
    for (int i = 0; i < trials; ++i) {
      const Placement p = random_placement(rng);
      const double r1 = rel_err(twist_transform(p), Mat6(pi * wrench_transform(p) * pi));
      const auto fv = FrameVelocity::from_body(p, rng.vec3(-1, 1), rng.vec3(-1, 1));
      const auto g = generators(fv);
      const double r2 = (g.phi_twist + g.phi_wrench.transpose()).norm() +
                        (g.psi_twist + g.psi_wrench.transpose()).norm();
      prop.sample(std::max(r1, r2), [&] { return describe_vec("d", p.translation); });
    }
    out.push_back(prop.finish());
  }

  {
    Property prop("rotation_integration_quarter_turn", 1e-9);
    Property ortho("rotation_manifold_residual", 1e-12);
    const double w = std::numbers::pi / 2;
    const auto traj = integrate_rotation(Rotation::identity(),
                                         [w](double) { return Vec3(0, 0, w); }, 1e-3, 1000);
    const Mat3 expect = Rotation::about_axis(Vec3(0, 0, 1), w).matrix();
    prop.sample((traj.back().matrix() - expect).norm(), [] { return std::string("h=0.001"); });
    double worst = 0.0;
    for (const auto& c : traj) worst = std::max(worst, c.orthogonality_residual());
    ortho.sample(worst, [] { return std::string("h=0.001"); });
    out.push_back(prop.finish());
    out.push_back(ortho.finish());
  }

  return out;
}

// ---------------------------------------------------------------------------

inline std::vector<PropertyResult> constitutive_suite(int trials, std::uint64_t seed) {
  std::vector<PropertyResult> out;

  // Draws avoid the near-singular fringe: round-trip accuracy degrades as
  // 1/det there, which is conditioning, not algebra. Well-definedness itself
  // is exercised by the classification property below.
  auto rand_m3 = [](Rng& rng) {
    while (true) {
      IsoMap3 m{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
      if (std::abs(m.determinant()) > 1e-2) return m;
    }
  };
  auto rand_msym3 = [](Rng& rng) {
    while (true) {
      IsoMapSym3 m{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
      if (std::abs(m.determinant()) > 1e-2) return m;
    }
  };
  auto rand_m2 = [](Rng& rng) {
    while (true) {
      IsoMap2 m{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2),
                rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
      if (std::abs(m.determinant()) > 1e-2) return m;
    }
  };
  auto rand_msym2 = [](Rng& rng) {
    while (true) {
      IsoMapSym2 m{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
      if (std::abs(m.determinant()) > 1e-2) return m;
    }
  };
  auto rand_z3 = [](Rng& rng) {
    Mat3 z;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) z(i, j) = rng.uniform(-2, 2);
    return z;
  };
  auto rand_z2 = [](Rng& rng) {
    Mat2 z;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) z(i, j) = rng.uniform(-2, 2);
    return z;
  };

  {
    Property prop("composition_two_path_all_cases", 1e-11);
    Rng rng(mix_seed(seed, 21));
    for (int i = 0; i < trials; ++i) {
      double worst = 0.0;
      {
        const IsoMap3 a = rand_m3(rng), b = rand_m3(rng);
        const Mat3 z = rand_z3(rng);
        worst = std::max(worst, rel_err(compose(a, b).apply(z), Mat3(a.apply(b.apply(z)))));
      }
      {
        const IsoMapSym3 a = rand_msym3(rng), b = rand_msym3(rng);
        Mat3 z = rand_z3(rng);
        z = 0.5 * (z + z.transpose()).eval();
        worst = std::max(worst, rel_err(compose(a, b).apply(z), Mat3(a.apply(b.apply(z)))));
      }
      {
        const IsoMap2 a = rand_m2(rng), b = rand_m2(rng);
        const Mat2 z = rand_z2(rng);
        worst = std::max(worst, rel_err(compose(a, b).apply(z), Mat2(a.apply(b.apply(z)))));
      }
      {
        const IsoMapSym2 a = rand_msym2(rng), b = rand_msym2(rng);
        Mat2 z = rand_z2(rng);
        z = 0.5 * (z + z.transpose()).eval();
        worst = std::max(worst, rel_err(compose(a, b).apply(z), Mat2(a.apply(b.apply(z)))));
      }
      prop.sample(worst, [i] { return "trial=" + std::to_string(i); });
    }
    out.push_back(prop.finish());
  }

  {
    Property prop("closed_form_inverse_round_trip", 1e-11);
    Rng rng(mix_seed(seed, 22));
    for (int i = 0; i < trials; ++i) {
      double worst = 0.0;
      {
        const IsoMap3 m = rand_m3(rng);
        const IsoMap3 r = compose(invert(m), m);
        worst = std::max(worst, rel_err(Vec4(r.p0, r.p1, r.p2, r.p3), Vec4(0, 0, 1, 0)));
        const IsoMap3 twice = invert(invert(m));
        worst = std::max(worst,
                         rel_err(Vec4(twice.p0, twice.p1, twice.p2, twice.p3),
                                 Vec4(m.p0, m.p1, m.p2, m.p3)) * 0.1);  // 1e-10 contract
      }
      {
        const IsoMapSym3 m = rand_msym3(rng);
        const IsoMapSym3 r = compose(invert(m), m);
        worst = std::max(worst, rel_err(Vec3(r.p0, r.p1, r.p2), Vec3(0, 0, 1)));
      }
      {
        const IsoMap2 m = rand_m2(rng);
        const IsoMap2 r = compose(invert(m), m);
        worst = std::max(worst, rel_err(r.coeffs(), IsoMap2::identity().coeffs()));
      }
      {
        const IsoMapSym2 m = rand_msym2(rng);
        const IsoMapSym2 r = compose(invert(m), m);
        worst = std::max(worst, rel_err(Vec4(r.p0, r.p1, r.p2, r.p3), Vec4(0, 0, 1, 0)));
      }
      prop.sample(worst, [i] { return "trial=" + std::to_string(i); });
    }
    out.push_back(prop.finish());
  }

  {
    Property prop("determinant_classification", 0.0);
    Rng rng(mix_seed(seed, 23));
    for (int i = 0; i < trials; ++i) {
      bool ok = true;
      // constructed singular members of each case
      ok = ok && !is_well_defined(IsoMap3{rng.uniform(-2, 2), 1.0, -3.0, 0.0});
      ok = ok && !is_well_defined(IsoMap3{rng.uniform(-2, 2), rng.uniform(-2, 2), 1.3, 1.3});
      ok = ok && !is_well_defined(IsoMapSym3{rng.uniform(-2, 2), 1.0, -3.0});
      const double a2 = rng.uniform(0.5, 2.0), b2 = rng.uniform(0.5, 2.0);
      ok = ok && !is_well_defined(IsoMap2{rng.uniform(-2, 2), rng.uniform(-2, 2), 0, 0, a2, a2, b2, b2});
      ok = ok && !is_well_defined(IsoMapSym2{rng.uniform(-2, 2), 1.0, -2.0, 0.0});
      // and regular ones
      ok = ok && is_well_defined(rand_m3(rng)) && is_well_defined(rand_msym3(rng)) &&
           is_well_defined(rand_m2(rng)) && is_well_defined(rand_msym2(rng));
      prop.sample(ok ? 0.0 : 1.0, [i] { return "trial=" + std::to_string(i); });
    }
    out.push_back(prop.finish());
  }

  {
    Property prop("planar_identity_list", 1e-14);
    Rng rng(mix_seed(seed, 24));
    const Mat2 j = tilde2();
    const Mat2 i2 = Mat2::Identity();
    for (int i = 0; i < trials; ++i) {
      const Mat2 z = rand_z2(rng);
      const double tr = z.trace(), trjz = (j * z).trace();
      double worst = 0.0;
      worst = std::max(worst, (j * z.transpose() - (j * z - trjz * i2)).norm());
      worst = std::max(worst, (z * j - (trjz * i2 + z.transpose() * j)).norm());
      worst = std::max(worst, (j * z * j - (z.transpose() - tr * i2)).norm());
      worst = std::max(worst, (j * z.transpose() * j - (z - tr * i2)).norm());
      worst = std::max(worst, std::abs((j * z.transpose()).trace() + trjz));
      worst = std::max(worst, (tr * j - (j * z + z.transpose() * j)).norm());
      worst = std::max(worst, (trjz * j - (z.transpose() - z)).norm());
      worst = std::max(worst, std::abs((j * z * j).trace() + tr));
      prop.sample(worst, [&] {
        return "Z=[" + to_decimal_string(z(0, 0)) + "," + to_decimal_string(z(0, 1)) + ";" +
               to_decimal_string(z(1, 0)) + "," + to_decimal_string(z(1, 1)) + "]";
      });
    }
    out.push_back(prop.finish());
  }

  {
    Property prop("isotropy_rotation_conjugation", 1e-11);
    Rng rng(mix_seed(seed, 25));
    for (int i = 0; i < trials; ++i) {
      double worst = 0.0;
      {
        const Mat3 c = rng.rotation();
        const Mat3 z = rand_z3(rng);
        const IsoMap3 m = rand_m3(rng);
        worst = std::max(worst, rel_err(m.apply(Mat3(c * z * c.transpose())),
                                        Mat3(c * m.apply(z) * c.transpose())));
      }
      {
        const Mat2 c = rng.rotation2();
        const Mat2 z = rand_z2(rng);
        const IsoMap2 m = rand_m2(rng);
        worst = std::max(worst, rel_err(m.apply(Mat2(c * z * c.transpose())),
                                        Mat2(c * m.apply(z) * c.transpose())));
      }
      prop.sample(worst, [i] { return "trial=" + std::to_string(i); });
    }
    out.push_back(prop.finish());
  }

  return out;
}

// ---------------------------------------------------------------------------

inline std::vector<PropertyResult> lemma1_suite(int trials, std::uint64_t seed) {
  std::vector<PropertyResult> out;
  (void)trials;

  {
    Property prop("lemma1_convergence_order", 0.2);  // |order - 2|
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
    Rng rng(mix_seed(seed, 31));
    const Vec3 y = rng.vec3(-0.5, 0.5);
    const auto rep = lemma1_residual(f, y, {Vec3::Zero(), Vec3::Ones()}, 0.02);
    prop.sample(std::abs(rep.integral_form.order - 2.0), [&] { return describe_vec("y", y); });
    prop.sample(std::abs(rep.pointwise_form.order - 2.0), [&] { return describe_vec("y", y); });
    out.push_back(prop.finish());
  }

  {
    Property prop("lemma1_constant_antisymmetric_volume_term", 1e-12);
    Rng rng(mix_seed(seed, 32));
    const Vec3 w = rng.vec3(-1, 1);
    TensorField f;
    f.eval = [w](const Vec3&) { return cross_matrix(w); };
    f.divergence = [](const Vec3&) { return Vec3::Zero(); };
    const BoxSpec box{Vec3::Zero(), Vec3::Ones()};
    const double h = 0.01;
    const auto rep = lemma1_residual(f, Vec3(0.5, 0.5, 0.5), box, h);
    const double volume = std::pow(1.0 - 2 * h, 3);
    prop.sample(rel_err(rep.integral_lhs[0], Vec3(-2.0 * volume * w)),
                [&] { return describe_vec("w", w); });
    out.push_back(prop.finish());
  }

  {
    Property prop("cauchy_balance_convergence", 0.2);
    const IsoMapSym3 map{0.5, 2.0, 3.0};
    CauchyFields f;
    f.rho = [](const Vec3& x) { return 1.5 + 0.1 * std::sin(x.z()); };
    f.nu = [](const Vec3& x) { return 0.05 * std::cos(x.x()); };
    f.v = [](const Vec3& x) { return Vec3(std::sin(x.y()), std::sin(x.z()), std::sin(x.x())); };
    f.v_dot = [](const Vec3& x) { return Vec3(0.1 * x.x(), -0.2 * x.y(), 0.3); };
    f.stress = [map](const Vec3& x) {
      Mat3 z;
      z << 0, std::cos(x.y()), std::cos(x.x()),
           std::cos(x.y()), 0, std::cos(x.z()),
           std::cos(x.x()), std::cos(x.z()), 0;
      return map.apply(Mat3(0.5 * z));
    };
    auto div_p = [map](const Vec3& x) {
      return Vec3(-0.5 * map.p2 * Vec3(std::sin(x.y()), std::sin(x.z()), std::sin(x.x())));
    };
    f.g = [&](const Vec3& x) {
      return Vec3((f.rho(x) * f.v_dot(x) + f.nu(x) * f.v(x) - div_p(x)) / f.rho(x));
    };
    Rng rng(mix_seed(seed, 33));
    std::vector<Vec3> pts;
    for (int i = 0; i < 25; ++i) pts.push_back(rng.vec3(-0.8, 0.8));
    const auto rep = cauchy_balance_residual(f, pts, 0.02);
    prop.sample(std::abs(rep.order - 2.0), [] { return std::string("manufactured cauchy"); });
    Property sym("cauchy_symmetry_detector", 0.0);
    sym.sample(rep.symmetry_violation ? 1.0 : 0.0, [] { return std::string("symmetric stress flagged"); });
    CauchyFields bad = f;
    bad.stress = [](const Vec3&) {
      Mat3 p = Mat3::Identity();
      p(0, 1) = 0.3;
      return p;
    };
    const auto rep_bad = cauchy_balance_residual(bad, pts, 0.02);
    sym.sample(rep_bad.symmetry_violation ? 0.0 : 1.0, [] { return std::string("asymmetric stress missed"); });
    out.push_back(prop.finish());
    out.push_back(sym.finish());
  }

  {
    Property prop("antisymmetric_dual_recovery", 1e-15);
    Rng rng(mix_seed(seed, 34));
    for (int i = 0; i < std::max(trials, 1); ++i) {
      const Vec3 w = rng.vec3(-2, 2);
      prop.sample((antisymmetric_dual(cross_matrix(w)) + 2.0 * w).norm(),
                  [&] { return describe_vec("w", w); });
    }
    out.push_back(prop.finish());
  }

  return out;
}

// ---------------------------------------------------------------------------

inline std::vector<PropertyResult> transport_suite(int trials, std::uint64_t seed) {
  std::vector<PropertyResult> out;

  {
    Property prop("mass_conservation_zero_sources", 0.0);
    Rng rng(mix_seed(seed, 41));
    for (int i = 0; i < trials; ++i) {
      MassDistribution d;
      const int n = 1 + static_cast<int>(rng.uniform(0, 6));
      for (int k = 0; k < n; ++k) d.ac.push_back({rng.vec3(-1, 1), rng.uniform(0.01, 1.0), rng.uniform(0, 2), 0.0});
      d.pp.push_back({rng.vec3(-1, 1), rng.uniform(0, 2), 0.0});
      std::vector<FieldSample> ones(d.node_count(), FieldSample{1.0, 0.0});
      prop.sample(std::abs(transport_derivative(d, ones)), [i] { return "trial=" + std::to_string(i); });
    }
    out.push_back(prop.finish());
  }

  {
    Property prop("uniform_expansion_mass_constant", 1e-12);
    auto mass_at = [](double t) {
      MassDistribution d;
      const int n = 4;
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
    for (double t : {0.4, 1.1, 1.9})
      prop.sample(rel_err(mass_at(t), m0), [t] { return "t=" + to_decimal_string(t); });
    out.push_back(prop.finish());
  }

  {
    Property prop("pure_point_rate_matches_fd", 1e-8);
    Rng rng(mix_seed(seed, 42));
    for (int i = 0; i < trials; ++i) {
      const double a = rng.uniform(0.5, 2.0), b = rng.uniform(0.2, 1.0);
      auto m_of = [a, b](double t) { return a + std::sin(b * t); };
      auto f_of = [](double t) { return t * t + 1.0; };
      const double t = rng.uniform(0.1, 1.5), dt = 1e-5;
      MassDistribution d;
      d.pp.push_back({Vec3::Zero(), m_of(t), b * std::cos(b * t)});
      std::vector<FieldSample> s{{f_of(t), 2.0 * t}};
      const double fd = (m_of(t + dt) * f_of(t + dt) - m_of(t - dt) * f_of(t - dt)) / (2 * dt);
      prop.sample(std::abs(transport_derivative(d, s) - fd),
                  [t] { return "t=" + to_decimal_string(t); });
    }
    out.push_back(prop.finish());
  }

  {
    Property prop("continuity_residual_second_order", 0.0);
    auto rho = [](const Vec3&, double t) { return std::exp(-3.0 * t); };
    auto v = [](const Vec3& x, double) { return x; };
    auto nuf = [](const Vec3&, double) { return 0.0; };
    const auto rc = continuity_residual(rho, v, nuf, {Vec3::Constant(-0.5), Vec3::Constant(0.5), 6}, 0.4);
    const auto rf = continuity_residual(rho, v, nuf, {Vec3::Constant(-0.5), Vec3::Constant(0.5), 11}, 0.4);
    const double ratio = rc.max_abs / rf.max_abs;
    prop.sample((ratio > 3.0 && ratio < 5.0) ? 0.0 : 1.0,
                [ratio] { return "ratio=" + to_decimal_string(ratio); });
    out.push_back(prop.finish());
  }

  return out;
}

// ---------------------------------------------------------------------------

inline std::vector<PropertyResult> dynamics_suite(int trials, std::uint64_t seed) {
  std::vector<PropertyResult> out;
  const int steps = std::min(2000, std::max(200, trials * 4));

  {
    Property prop("torque_free_sphere_omega_constant", 1e-12);
    Mat6 th = Mat6::Zero();
    th.topLeftCorner<3, 3>() = Mat3::Identity();
    th.bottomRightCorner<3, 3>() = 0.4 * Mat3::Identity();
    const auto model = RigidBodyModel::from_operators(th);
    RigidBodyState s0;
    s0.quasi_velocity << 0.3, 0, 0, 0.2, -0.5, 1.0;
    const auto traj = simulate_rigid_body(
        model, [](double, const RigidBodyState&) { return Vec6::Zero(); }, s0, 1e-3, steps);
    double worst = 0.0;
    for (const auto& s : traj.steps)
      worst = std::max(worst, (s.state.quasi_velocity.tail<3>() - Vec3(0.2, -0.5, 1.0)).norm());
    prop.sample(worst, [steps] { return "steps=" + std::to_string(steps); });
    out.push_back(prop.finish());
  }

  {
    Property prop("rigid_energy_momentum_drift", 1e-9);
    Mat6 th = Mat6::Zero();
    th.topLeftCorner<3, 3>() = 2.0 * Mat3::Identity();
    th.bottomRightCorner<3, 3>() = Vec3(2.0, 3.0, 4.0).asDiagonal();
    const auto model = RigidBodyModel::from_operators(th);
    RigidBodyState s0;
    s0.quasi_velocity << 0.4, -0.1, 0.2, 1.1, 0.6, -0.8;
    const auto traj = simulate_rigid_body(
        model, [](double, const RigidBodyState&) { return Vec6::Zero(); }, s0, 1e-3, steps);
    double worst = 0.0;
    for (const auto& s : traj.steps) {
      worst = std::max(worst, rel_err(s.kinetic_energy, traj.steps.front().kinetic_energy));
      worst = std::max(worst, rel_err(s.momentum_world, traj.steps.front().momentum_world));
    }
    prop.sample(worst, [steps] { return "steps=" + std::to_string(steps); });
    out.push_back(prop.finish());
  }

  {
    Property prop("tsiolkovsky_closed_form", 1e-9);
    const double m0 = 2.0, k = 0.4, c = 3.0;
    MassPointModel model;
    model.nu = [=](double t) { return -k * m0 * std::exp(-k * t); };
    model.gain_velocity = [=](double, const Vec3&, const Vec3& v) {
      return Vec3(v - c * Vec3::UnitX());
    };
    const auto traj = simulate_mass_point(model, Vec3::Zero(), Vec3::Zero(), m0, 1e-3, 1000);
    const double m_end = m0 * std::exp(-k * 1.0);
    prop.sample((traj.back().v - c * std::log(m0 / m_end) * Vec3::UnitX()).norm(),
                [] { return std::string("rocket"); });
    out.push_back(prop.finish());
  }

  {
    Property prop("two_body_circular_orbit", 1e-6);
    const std::vector<NBody> init{{Vec3(1, 0, 0), Vec3(0, 0.5, 0), 1.0},
                                  {Vec3(-1, 0, 0), Vec3(0, -0.5, 0), 1.0}};
    const auto traj = nbody_simulate(init, 1.0, 1e-3, 2000, 1e-9, 200);
    double worst = 0.0;
    for (const auto& s : traj) {
      worst = std::max(worst, std::abs((s.bodies[0].x - s.bodies[1].x).norm() - 2.0));
      worst = std::max(worst, s.momentum.norm());
    }
    prop.sample(worst, [] { return std::string("circular orbit"); });
    out.push_back(prop.finish());
  }

  {
    Property prop("multiphase_identities", 1e-10);
    Rng rng(mix_seed(seed, 51));
    for (int i = 0; i < std::max(1, trials / 10); ++i) {
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
      const double sum_identity =
          std::abs((gamma - div_v * s.rho).sum() - (gamma.sum() - s.total_density() * div_v));
      const double trace_identity = rel_err(s.micro_inertia().trace(), s.micro_inertia_trace());
      prop.sample(std::max(sum_identity, trace_identity),
                  [i] { return "trial=" + std::to_string(i); });
    }
    out.push_back(prop.finish());
  }

  {
    Property prop("mass_point_newton_reduction_bitwise", 0.0);
    auto force = [](double t, const Vec3& x, const Vec3& v) {
      return Vec3(std::sin(t) - 0.1 * v.x(), 0.2 * x.y(), 1.0);
    };
    MassPointModel model;
    model.force = force;
    model.gain_velocity = [](double, const Vec3&, const Vec3& v) { return Vec3(v + Vec3(5, 5, 5)); };
    const double m = 1.7, h = 1e-2;
    const int n = 200;
    const auto traj = simulate_mass_point(model, Vec3(0.1, 0.2, 0.3), Vec3(1, 0, -1), m, h, n);
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
    for (int i = 0; i < n; ++i) {
      y = rk4_step(rhs, y, t, h);
      t += h;
    }
    const double diff = (traj.back().x - y.head<3>()).cwiseAbs().maxCoeff() +
                        (traj.back().v - y.segment<3>(3)).cwiseAbs().maxCoeff() +
                        std::abs(traj.back().m - m);
    prop.sample(diff, [] { return std::string("zero-rate reduction"); });
    out.push_back(prop.finish());
  }

  {
    Property prop("body_point_linear_closed_form", 1e-10);
    Rng rng(mix_seed(seed, 52));
    for (int i = 0; i < std::max(1, trials / 20); ++i) {
      BodyPointInertia inertia;
      inertia.rho = rng.uniform(0.5, 2.0);
      Mat3 a;
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) a(r, c) = rng.uniform(-0.2, 0.2);
      inertia.A = 0.5 * (a + a.transpose());
      inertia.B = rng.uniform(0.5, 2.0) * Mat3::Identity();
      Vec6 ab;
      for (int k = 0; k < 6; ++k) ab[k] = rng.uniform(-1, 1);
      const Vec3 v0 = rng.vec3(-1, 1), mu0 = rng.vec3(-1, 1);
      const auto traj = simulate_body_point(
          inertia, nullptr, [&ab](double) { return ab; }, v0, mu0, 1e-3, 500);
      Vec6 w0;
      w0 << v0, mu0;
      const Vec6 expect = w0 + 0.5 * inertia.block().partialPivLu().solve(ab) / inertia.rho;
      Vec6 got;
      got << traj.back().v, traj.back().mu;
      prop.sample(rel_err(got, expect), [i] { return "trial=" + std::to_string(i); });
    }
    out.push_back(prop.finish());
  }

  {
    Property prop("galilean_boost_equivalence", 1e-9);
    Mat6 th = Mat6::Zero();
    th.topLeftCorner<3, 3>() = 1.7 * Mat3::Identity();
    th.bottomRightCorner<3, 3>() = Vec3(2.0, 2.5, 3.5).asDiagonal();
    const auto model = RigidBodyModel::from_operators(th);
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
    auto zero = [](double, const RigidBodyState&) { return Vec6::Zero(); };
    const auto base = simulate_rigid_body(model, zero, s0, 1e-3, 1000);
    const auto boosted = simulate_rigid_body(model, zero, b0, 1e-3, 1000);
    double worst = 0.0;
    for (std::size_t k = 0; k < base.steps.size(); k += 200) {
      const double t = base.steps[k].t;
      const Placement mapped = compose(galilean_boost(db0, vb, cb, t), boosted.steps[k].state.placement);
      worst = std::max(worst,
                       (mapped.rotation.matrix() - base.steps[k].state.placement.rotation.matrix()).norm());
      worst = std::max(worst, (mapped.translation - base.steps[k].state.placement.translation).norm());
    }
    prop.sample(worst, [] { return std::string("boost vb=(0.7,-0.3,0.2)"); });
    out.push_back(prop.finish());
  }

  return out;
}

}  // namespace detail

inline std::vector<std::string> suite_names() {
  return {"screw", "galilean", "constitutive", "lemma1", "transport", "dynamics"};
}

/// Runs one named suite (or "all") deterministically.
inline std::vector<VerificationReport> run(const std::string& suite, int trials,
                                           std::uint64_t seed) {
  std::vector<VerificationReport> reports;
  auto run_one = [&](const std::string& name) {
    VerificationReport rep;
    rep.suite = name;
    rep.trials = trials;
    rep.seed = seed;
    if (name == "screw") rep.properties = detail::screw_suite(trials, seed);
    else if (name == "galilean") rep.properties = detail::galilean_suite(trials, seed);
    else if (name == "constitutive") rep.properties = detail::constitutive_suite(trials, seed);
    else if (name == "lemma1") rep.properties = detail::lemma1_suite(trials, seed);
    else if (name == "transport") rep.properties = detail::transport_suite(trials, seed);
    else if (name == "dynamics") rep.properties = detail::dynamics_suite(trials, seed);
    else throw std::invalid_argument("unknown verification suite: " + name);
    for (const auto& p : rep.properties) rep.pass = rep.pass && p.pass;
    reports.push_back(std::move(rep));
  };
  if (suite == "all") {
    for (const auto& name : suite_names()) run_one(name);
  } else {
    run_one(suite);
  }
  return reports;
}

/// Fixed-format text rendering (stable across runs for fixed seed/config).
inline std::string render(const VerificationReport& rep) {
  std::ostringstream os;
  os << "suite " << rep.suite << " trials=" << rep.trials << " seed=" << rep.seed << "\n";
  for (const auto& p : rep.properties) {
    os << "  [" << (p.pass ? "PASS" : "FAIL") << "] " << p.name
       << " max_residual=" << to_decimal_string(p.max_residual)
       << " tol=" << to_decimal_string(p.tolerance) << "\n";
    if (!p.pass) os << "    counterexample: " << p.counterexample << "\n";
  }
  os << "  result: " << (rep.pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace czmech::verify
