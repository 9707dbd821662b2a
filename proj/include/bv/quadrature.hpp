#pragma once

// One-dimensional quadrature and differencing primitives shared by the
// radial solvers.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace bv {

/// Area of the unit sphere S^{n-1} in R^n.
inline double unit_sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

/// Composite trapezoid weights over the given (strictly increasing) nodes.
inline std::vector<double> trapezoid_weights(std::span<const double> x) {
  std::vector<double> w(x.size(), 0.0);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double h = 0.5 * (x[i + 1] - x[i]);
    w[i] += h;
    w[i + 1] += h;
  }
  return w;
}

/// Running trapezoid integral: out[i] = start + integral of y from x[0] to x[i].
inline std::vector<double> cumulative_trapezoid(std::span<const double> x, std::span<const double> y,
                                                double start = 0.0) {
  std::vector<double> out(x.size(), start);
  for (std::size_t i = 1; i < x.size(); ++i) {
    out[i] = out[i - 1] + 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  }
  return out;
}

/// Reverse running trapezoid: out[i] = tail + integral of y from x[i] to x.back().
/// Accumulating from the end keeps small tails free of cancellation.
inline std::vector<double> reverse_cumulative_trapezoid(std::span<const double> x,
                                                        std::span<const double> y,
                                                        double tail = 0.0) {
  std::vector<double> out(x.size(), tail);
  if (x.empty()) return out;
  for (std::size_t i = x.size() - 1; i-- > 0;) {
    out[i] = out[i + 1] + 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
  }
  return out;
}

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1] by Newton iteration on P_m.
inline GaussRule gauss_legendre(int m) {
  GaussRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int k = 1; k <= m; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = m * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0;
    double p1 = 0.0;
    for (int k = 1; k <= m; ++k) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
    }
    dp = m * (z * p0 - p1) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = -z;
    rule.nodes[m - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[m - 1 - i] = w;
  }
  return rule;
}

/// Fornberg's algorithm: finite-difference weights for derivatives 0..max_order
/// at x0 from arbitrary distinct nodes. Returns weights[order][node].
inline std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> x,
                                                         int max_order) {
  const std::size_t npts = x.size();
  std::vector<std::vector<double>> c(max_order + 1, std::vector<double>(npts, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < npts; ++i) {
    const int mn = std::min<int>(static_cast<int>(i), max_order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        }
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      }
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

/// Cubic Hermite interpolation on [xa, xb] from values and slopes.
inline double hermite(double xa, double xb, double ya, double yb, double da, double db,
                      double x) {
  const double h = xb - xa;
  const double s = (x - xa) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * ya + (s3 - 2 * s2 + s) * h * da + (-2 * s3 + 3 * s2) * yb +
         (s3 - s2) * h * db;
}

}  // namespace bv
