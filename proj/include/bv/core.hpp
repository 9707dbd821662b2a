#pragma once

// Domain types shared by every solver: exponent configuration, radial grids,
// sampled profile pairs and radial L^p norms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bv/error.hpp"
#include "bv/quadrature.hpp"

namespace bv {

inline constexpr double kCriticalityTolerance = 1e-12;

/// Dimension and exponents of the coupled system
///   -Δu = u^α v^β,  -Δv = u^β v^α,   α + β = (n+2)/(n-2).
struct ExponentConfig {
  int n = 3;
  double alpha = 2.0;
  double beta = 3.0;
  /// True iff α < β, the ordering under which the uniqueness argument runs.
  bool uniqueness_applicable = true;
  std::vector<std::string> warnings;

  double critical_exponent() const { return (n + 2.0) / (n - 2.0); }
  /// p = 2n/(n-2), the Lebesgue exponent of the solution space.
  double sobolev_exponent() const { return 2.0 * n / (n - 2.0); }
};

inline double critical_exponent(int n) { return (n + 2.0) / (n - 2.0); }

/// What the caller intends to do with the configuration.
enum class Hypothesis {
  none,     ///< any admissible (α, β)
  ordered,  ///< the caller needs α < β
};

/// Total over its inputs: returns a validated configuration or throws an
/// Error with exactly one of the codes listed below.
inline ExponentConfig validate_config(int n, double alpha, double beta,
                                      Hypothesis hypothesis = Hypothesis::none) {
  if (n < 3) {
    throw Error(ErrorCode::DimensionTooSmall, "n = " + std::to_string(n) + " < 3");
  }
  if (!std::isfinite(alpha) || !std::isfinite(beta) || alpha < 1.0 || beta < 1.0) {
    throw Error(ErrorCode::ExponentOutOfRange, "exponents must be finite and >= 1");
  }
  const double crit = critical_exponent(n);
  if (std::abs(alpha + beta - crit) > kCriticalityTolerance) {
    throw Error(ErrorCode::CriticalityViolated,
                "alpha + beta must equal (n+2)/(n-2) = " + std::to_string(crit));
  }
  ExponentConfig config;
  config.n = n;
  config.alpha = alpha;
  config.beta = beta;
  config.uniqueness_applicable = alpha < beta;

  if (hypothesis == Hypothesis::ordered && !config.uniqueness_applicable) {
    // With α >= 1 and α + β = crit, α < β needs crit > 2, i.e. n <= 5.
    if (crit <= 2.0) {
      throw Error(ErrorCode::InfeasibleHypothesis,
                  "alpha < beta is impossible under criticality for n = " + std::to_string(n));
    }
    throw Error(ErrorCode::HypothesisNotApplicable, "alpha < beta required");
  }
  if (n >= 6) {
    config.warnings.emplace_back("n >= 6 forces alpha = beta; the ordered-exponent experiments do not apply");
  }
  return config;
}

/// Grid size/extent as read from a run configuration.
struct GridSpec {
  double r0 = 1e-6;
  double rmax = 1e4;
  std::size_t nodes = 4000;
};

enum class GridKind { geometric, uniform, custom };

inline constexpr double kMaxFirstNode = 1e-4;

/// Strictly increasing positive radii starting at r_0 <= 1e-4.
class RadialGrid {
 public:
  static RadialGrid geometric(double r0, double rmax, std::size_t count) {
    if (!(r0 > 0.0) || !(rmax > r0) || count < 3) {
      throw Error(ErrorCode::InvalidGrid, "geometric grid needs 0 < r0 < rmax and >= 3 nodes");
    }
    std::vector<double> nodes(count);
    const double step = std::log(rmax / r0) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) nodes[i] = r0 * std::exp(step * static_cast<double>(i));
    nodes.front() = r0;
    nodes.back() = rmax;
    RadialGrid grid(std::move(nodes), GridKind::geometric);
    grid.ratio_ = std::exp(step);
    return grid;
  }

  static RadialGrid geometric(const GridSpec& spec) {
    return geometric(spec.r0, spec.rmax, spec.nodes);
  }

  /// Nodes h, 2h, ..., up to the first multiple >= rmax.
  static RadialGrid uniform(double h, double rmax) {
    if (!(h > 0.0) || !(rmax > h)) {
      throw Error(ErrorCode::InvalidGrid, "uniform grid needs 0 < h < rmax");
    }
    const auto count = static_cast<std::size_t>(std::ceil(rmax / h - 1e-9));
    std::vector<double> nodes(count);
    for (std::size_t i = 0; i < count; ++i) nodes[i] = h * static_cast<double>(i + 1);
    return RadialGrid(std::move(nodes), GridKind::uniform);
  }

  static RadialGrid from_nodes(std::vector<double> nodes) {
    return RadialGrid(std::move(nodes), GridKind::custom);
  }

  std::span<const double> nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  double operator[](std::size_t i) const { return nodes_[i]; }
  double front() const { return nodes_.front(); }
  double back() const { return nodes_.back(); }
  GridKind kind() const { return kind_; }
  /// r_{i+1}/r_i for geometric grids, nullopt otherwise.
  std::optional<double> ratio() const {
    if (kind_ == GridKind::geometric) return ratio_;
    return std::nullopt;
  }

  /// Every other node, always keeping the last one (for Richardson estimates).
  RadialGrid coarsened() const {
    std::vector<double> out;
    out.reserve(nodes_.size() / 2 + 2);
    for (std::size_t i = 0; i < nodes_.size(); i += 2) out.push_back(nodes_[i]);
    if (out.back() != nodes_.back()) out.push_back(nodes_.back());
    return RadialGrid(std::move(out), GridKind::custom);
  }

  /// Index of the last node <= r (0 if r precedes the grid).
  std::size_t locate(double r) const {
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
    if (it == nodes_.begin()) return 0;
    return static_cast<std::size_t>(std::distance(nodes_.begin(), it) - 1);
  }

 private:
  RadialGrid(std::vector<double> nodes, GridKind kind) : nodes_(std::move(nodes)), kind_(kind) {
    if (nodes_.size() < 2) throw Error(ErrorCode::InvalidGrid, "grid needs at least two nodes");
    if (!(nodes_.front() > 0.0) || nodes_.front() > kMaxFirstNode) {
      throw Error(ErrorCode::InvalidGrid, "first node must lie in (0, 1e-4]");
    }
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
      if (!(nodes_[i] > nodes_[i - 1])) {
        throw Error(ErrorCode::InvalidGrid, "grid nodes must be strictly increasing");
      }
    }
  }

  std::vector<double> nodes_;
  GridKind kind_;
  double ratio_ = 0.0;
};

/// Sampled (u, v) with radial derivatives on a grid.
struct RadialProfilePair {
  RadialGrid grid;
  std::vector<double> u;
  std::vector<double> v;
  std::vector<double> du;
  std::vector<double> dv;

  std::size_t size() const { return grid.size(); }

  void check() const {
    const auto n = grid.size();
    if (u.size() != n || v.size() != n || du.size() != n || dv.size() != n) {
      throw Error(ErrorCode::InvalidArgument, "profile arrays must match the grid length");
    }
  }
};

struct LpNorm {
  double p = 2.0;
  double value = 0.0;
  std::string domain_tag;
  /// Richardson estimate of the error in the p-th power integral.
  double error_estimate = 0.0;
};

inline constexpr double kDefaultNormTolerance = 1e-2;

namespace detail {

// ∫ |f|^p ω r^{n-1} dr with the [0, r_0] cell closed by a constant extension.
inline double radial_power_integral(std::span<const double> f, std::span<const double> r,
                                    double p, int n) {
  std::vector<double> g(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    g[i] = std::pow(std::abs(f[i]), p) * std::pow(r[i], n - 1);
  }
  double sum = g.front() * r.front() / n;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) sum += 0.5 * (r[i + 1] - r[i]) * (g[i] + g[i + 1]);
  return unit_sphere_area(n) * sum;
}

}  // namespace detail

/// (∫_0^∞ |f|^p ω_{n-1} r^{n-1} dr)^{1/p} by composite trapezoid. The half
/// resolution result gives a Richardson error estimate; GridTooCoarse is raised
/// when that estimate exceeds rel_tol times the integral.
inline LpNorm lp_norm_radial(std::span<const double> f, const RadialGrid& grid, double p, int n,
                             double rel_tol = kDefaultNormTolerance,
                             std::string domain_tag = "R^n") {
  if (!(p > 1.0)) throw Error(ErrorCode::InvalidArgument, "L^p norm needs p > 1");
  if (f.size() != grid.size()) throw Error(ErrorCode::InvalidArgument, "sample/grid length mismatch");

  const double fine = detail::radial_power_integral(f, grid.nodes(), p, n);

  std::vector<double> half_f;
  std::vector<double> half_r;
  for (std::size_t i = 0; i < f.size(); i += 2) {
    half_f.push_back(f[i]);
    half_r.push_back(grid[i]);
  }
  if (half_r.back() != grid.back()) {
    half_f.push_back(f.back());
    half_r.push_back(grid.back());
  }
  const double coarse = detail::radial_power_integral(half_f, half_r, p, n);
  const double estimate = std::abs(fine - coarse) / 3.0;
  if (fine > 0.0 && estimate > rel_tol * fine) {
    throw Error(ErrorCode::GridTooCoarse,
                "Richardson estimate " + std::to_string(estimate / fine) + " exceeds tolerance");
  }
  return LpNorm{p, std::pow(fine, 1.0 / p), std::move(domain_tag), estimate};
}

}  // namespace bv
