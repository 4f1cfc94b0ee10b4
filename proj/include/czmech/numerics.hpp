#pragma once

// Shared numeric plumbing: deterministic RNG, tolerance helpers, pairwise
// summation, a classical RK4 step, and projection onto the rotation manifold.

#include <Eigen/Dense>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace czmech {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// Numerical failure along an otherwise valid computation: singular inertia,
/// mass underflow, close approach, step-size breakdown. The CLI maps this
/// family to exit code 3 (configuration/contract errors stay invalid_argument).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Multiplier applied to verification-suite tolerances, read once from
/// CZ_MECH_EPS. Library contract tolerances are not affected.
inline double eps_scale() {
  static const double scale = [] {
    if (const char* s = std::getenv("CZ_MECH_EPS")) {
      char* end = nullptr;
      const double v = std::strtod(s, &end);
      if (end != s && std::isfinite(v) && v > 0.0) return v;
    }
    return 1.0;
  }();
  return scale;
}

inline double rel_err(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1.0});
  return std::abs(a - b) / scale;
}

template <typename DerivedA, typename DerivedB>
double rel_err(const Eigen::MatrixBase<DerivedA>& a,
               const Eigen::MatrixBase<DerivedB>& b) {
  const double scale = std::max({a.norm(), b.norm(), 1.0});
  return (a - b).norm() / scale;
}

inline bool rel_close(double a, double b, double tol) { return rel_err(a, b) <= tol; }

template <typename DerivedA, typename DerivedB>
bool rel_close(const Eigen::MatrixBase<DerivedA>& a,
               const Eigen::MatrixBase<DerivedB>& b, double tol) {
  return rel_err(a, b) <= tol;
}

/// Deterministic RNG (splitmix64 core). Unlike <random> distributions, the
/// produced stream is identical on every platform, which the CLI's
/// byte-identical-report contract relies on.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box–Muller (fixed two-draw form, stream-stable).
  double normal() {
    const double u1 = std::max(uniform(), 0x1.0p-53);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Vec3 vec3(double lo, double hi) {
    const double a = uniform(lo, hi), b = uniform(lo, hi), c = uniform(lo, hi);
    return Vec3(a, b, c);
  }

  Vec3 gauss3() {
    const double a = normal(), b = normal(), c = normal();
    return Vec3(a, b, c);
  }

  /// Uniform random rotation: normalized quaternion from four normals.
  Mat3 rotation() {
    double q[4];
    double n2 = 0.0;
    for (double& qi : q) {
      qi = normal();
      n2 += qi * qi;
    }
    if (n2 < 1e-300) return Mat3::Identity();
    const double s = 1.0 / std::sqrt(n2);
    const double w = q[0] * s, x = q[1] * s, y = q[2] * s, z = q[3] * s;
    Mat3 c;
    c << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
         2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
         2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
    return c;
  }

  /// Planar rotation by a uniform angle.
  Mat2 rotation2() {
    const double th = uniform(0.0, 2.0 * std::numbers::pi);
    Mat2 c;
    c << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    return c;
  }

private:
  std::uint64_t state_;
};

/// Order-independent-by-construction cascade sum; keeps accumulation
/// deterministic when node loops are parallelized.
template <typename T>
T pairwise_sum(std::span<const T> xs) {
  if (xs.empty()) {
    if constexpr (requires { T::Zero(); })
      return T::Zero();
    else
      return T{};
  }
  if (xs.size() == 1) return xs[0];
  if (xs.size() <= 4) {
    T acc = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) acc = acc + xs[i];
    return acc;
  }
  const std::size_t mid = xs.size() / 2;
  return pairwise_sum(xs.subspan(0, mid)) + pairwise_sum(xs.subspan(mid));
}

template <typename T>
T pairwise_sum(const std::vector<T>& xs) {
  return pairwise_sum(std::span<const T>(xs));
}

/// One classical 4th-order step of y' = f(t, y). Y must support the usual
/// vector-space operations (Eigen types do).
template <typename Y, typename F>
Y rk4_step(F&& f, const Y& y, double t, double h) {
  const Y k1 = f(t, y);
  const Y k2 = f(t + 0.5 * h, Y(y + (0.5 * h) * k1));
  const Y k3 = f(t + 0.5 * h, Y(y + (0.5 * h) * k2));
  const Y k4 = f(t + h, Y(y + h * k3));
  Y out = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!out.allFinite()) throw NumericalError("rk4_step: non-finite state");
  return out;
}

/// Nearest rotation (polar factor, det +1) of a near-rotation matrix.
inline Mat3 nearest_rotation(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    Mat3 flip = Mat3::Identity();
    flip(2, 2) = -1.0;
    r = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  return r;
}

/// Shortest decimal string that round-trips to the same double; all CLI and
/// report numbers go through this so reruns are byte-identical.
inline std::string to_decimal_string(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

/// Least-squares slope of log(resid) vs log(h); returns {order, fit residual}.
inline std::pair<double, double> convergence_order(std::span<const double> hs,
                                                   std::span<const double> resids) {
  const std::size_t n = hs.size();
  if (n < 2 || resids.size() != n) throw std::invalid_argument("convergence_order: need >= 2 levels");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    lx[i] = std::log(hs[i]);
    ly[i] = std::log(std::max(resids[i], 1e-300));
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double denom = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / denom;
  const double icept = (sy - slope * sx) / n;
  double rss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ly[i] - (slope * lx[i] + icept);
    rss += e * e;
  }
  return {slope, std::sqrt(rss / n)};
}

}  // namespace czmech
