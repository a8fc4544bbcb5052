// Independent reference computations used by the tests. Nothing here calls
// into the library under test.
#ifndef MAGSAC_TESTS_ORACLES_HPP_
#define MAGSAC_TESTS_ORACLES_HPP_

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Regularized lower incomplete gamma P(a, x) by its power series.
inline double lower_gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  double term = 1.0 / a, sum = term;
  for (int n = 1; n < 10000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return std::exp(a * std::log(x) - x - std::lgamma(a)) * sum;
}

inline double chi2_cdf(double x, int k) { return lower_gamma_p(0.5 * k, 0.5 * x); }

// Inverse chi-squared CDF by bisection.
inline double chi2_quantile(int k, double q) {
  double lo = 0.0, hi = 1.0;
  while (chi2_cdf(hi, k) < q) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (chi2_cdf(mid, k) < q ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double chi_slope(int rho, double q) { return std::sqrt(chi2_quantile(rho, q)); }

// Composite midpoint rule.
inline double integrate(const std::function<double(double)>& f, double a, double b, std::size_t steps) {
  const double h = (b - a) / static_cast<double>(steps);
  double s = 0.0;
  for (std::size_t i = 0; i < steps; ++i) s += f(a + (static_cast<double>(i) + 0.5) * h);
  return s * h;
}

// Composite Simpson rule, steps even.
inline double simpson(const std::function<double(double)>& f, double a, double b, std::size_t steps) {
  const double h = (b - a) / static_cast<double>(steps);
  double s = f(a) + f(b);
  for (std::size_t i = 1; i < steps; ++i) s += f(a + static_cast<double>(i) * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

inline double chi_density(double r, double sigma, int rho) {
  const double c = 1.0 / (std::pow(2.0, 0.5 * rho) * std::tgamma(0.5 * rho));
  return 2.0 * c * std::pow(sigma, -rho) * std::pow(r, rho - 1) * std::exp(-r * r / (2.0 * sigma * sigma));
}

// Log-likelihood of the residuals at a fixed sigma: chi inliers below
// tau(sigma) and uniform outliers on [0, l].
inline double loglik_at_sigma(const std::vector<double>& res, double sigma, int rho, double q, double l) {
  const double t = sigma * chi_slope(rho, q);
  double s = 0.0;
  for (double d : res) s += d < t ? std::log(chi_density(d, sigma, rho)) : -std::log(l);
  return s;
}

// Same with a uniform inlier density on [0, sigma].
inline double uniform_loglik_at_sigma(const std::vector<double>& res, double sigma, double l) {
  double s = 0.0;
  for (double d : res) s += d < sigma ? -std::log(sigma) : -std::log(l);
  return s;
}

inline double marginal(const std::function<double(double)>& f, double sigma_max, std::size_t steps) {
  return integrate(f, 0.0, sigma_max, steps) / sigma_max;
}

// Geometric distance of a correspondence to the epipolar variety
// x2^T F x1 = 0 in R^4, by iterated constrained linearization.
inline double epipolar_geometric_distance(const Eigen::Matrix3d& F, const Eigen::Vector4d& x0) {
  Eigen::Vector4d x = x0;
  for (int it = 0; it < 100; ++it) {
    const Eigen::Vector3d a(x(0), x(1), 1.0), b(x(2), x(3), 1.0);
    const double c = b.dot(F * a);
    const Eigen::Vector3d fa = F * a, fb = F.transpose() * b;
    const Eigen::Vector4d J(fb(0), fb(1), fa(0), fa(1));
    // Linearize at x, project x0 onto the linearized constraint.
    const double lin = c + J.dot(x0 - x);
    const Eigen::Vector4d next = x0 - J * (lin / J.squaredNorm());
    if ((next - x).norm() < 1e-14) {
      x = next;
      break;
    }
    x = next;
  }
  return (x - x0).norm();
}

// Two-view configuration with known cameras.
struct TwoView {
  Eigen::Matrix3d K;
  Eigen::Matrix3d R;
  Eigen::Vector3d t;  // x_cam2 = R X + t
  Eigen::Matrix3d F() const {
    Eigen::Matrix3d tx;
    tx << 0, -t(2), t(1), t(2), 0, -t(0), -t(1), t(0), 0;
    const Eigen::Matrix3d Kinv = K.inverse();
    return Kinv.transpose() * tx * R * Kinv;
  }
};

inline TwoView random_two_view(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TwoView v;
  v.K << 500, 0, 320, 0, 500, 240, 0, 0, 1;
  const Eigen::Vector3d axis = Eigen::Vector3d(u(rng), u(rng), u(rng)).normalized();
  v.R = Eigen::AngleAxisd(0.2 * u(rng), axis).toRotationMatrix();
  v.t = Eigen::Vector3d(1.0 + 0.3 * u(rng), 0.3 * u(rng), 0.2 * u(rng));
  return v;
}

// n correspondences of points in front of both cameras, exact projections.
inline std::vector<double> project_pairs(const TwoView& v, std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), z(4.0, 8.0);
  std::vector<double> out;
  while (out.size() < 4 * n) {
    const Eigen::Vector3d X(2.0 * u(rng), 2.0 * u(rng), z(rng));
    const Eigen::Vector3d c2 = v.R * X + v.t;
    if (c2.z() <= 0.5) continue;
    const Eigen::Vector3d p1 = v.K * X, p2 = v.K * c2;
    out.insert(out.end(), {p1.x() / p1.z(), p1.y() / p1.z(), p2.x() / p2.z(), p2.y() / p2.z()});
  }
  return out;
}

// Number of distinct real rank-deficient members of the pencil
// cos(t) f1 + sin(t) f2, t in [0, pi): sign changes of the determinant,
// which is odd under t -> t + pi. Around every local extremum of the coarse
// samples the scan is repeated much finer, so close root pairs are resolved.
inline int count_pencil_roots(const Eigen::Matrix3d& f1, const Eigen::Matrix3d& f2, std::size_t steps) {
  auto det = [&](double t) { return (std::cos(t) * f1 + std::sin(t) * f2).determinant(); };
  auto changes_on = [&](double a, double b, std::size_t n) {
    int c = 0;
    double prev = det(a);
    for (std::size_t i = 1; i <= n; ++i) {
      const double cur = det(a + (b - a) * static_cast<double>(i) / static_cast<double>(n));
      if ((prev < 0) != (cur < 0)) ++c;
      prev = cur;
    }
    return c;
  };
  const double h = std::numbers::pi / static_cast<double>(steps);
  std::vector<double> v(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) v[i] = det(h * static_cast<double>(i));
  int total = 0;
  std::size_t i = 0;
  while (i < steps) {
    const bool extremum = i + 2 <= steps && (v[i + 1] - v[i]) * (v[i + 2] - v[i + 1]) <= 0.0;
    if (extremum) {
      total += changes_on(h * static_cast<double>(i), h * static_cast<double>(i + 2), 20000);
      i += 2;
    } else {
      if ((v[i] < 0) != (v[i + 1] < 0)) ++total;
      ++i;
    }
  }
  return total;
}

// Two-dimensional nullspace of the 7x9 epipolar system in raw coordinates.
inline std::pair<Eigen::Matrix3d, Eigen::Matrix3d> seven_point_pencil(const std::vector<double>& c) {
  Eigen::Matrix<double, 7, 9> a;
  for (int k = 0; k < 7; ++k) {
    const double x = c[4 * k], y = c[4 * k + 1], u = c[4 * k + 2], v = c[4 * k + 3];
    a.row(k) << u * x, u * y, u, v * x, v * y, v, x, y, 1.0;
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, 7, 9>> svd(a, Eigen::ComputeFullV);
  auto reshape = [](const Eigen::Matrix<double, 9, 1>& f) {
    Eigen::Matrix3d m;
    m << f(0), f(1), f(2), f(3), f(4), f(5), f(6), f(7), f(8);
    return m;
  };
  return {reshape(svd.matrixV().col(7)), reshape(svd.matrixV().col(8))};
}

// Matrices equal up to a nonzero scale: compare after unit normalization.
inline double projective_distance(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
  const Eigen::Matrix3d an = a / a.norm(), bn = b / b.norm();
  return std::min((an - bn).norm(), (an + bn).norm());
}

}  // namespace oracle

#endif  // MAGSAC_TESTS_ORACLES_HPP_
