#pragma once

// The explicit solution family of -Δu = u^{(n+2)/(n-2)}:
//   φ_{x0,t}(x) = c (t / (t² + |x - x0|²))^{(n-2)/2},   c = [n(n-2)]^{(n-2)/4}.
// Every other module checks itself against these closed forms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "bv/core.hpp"
#include "bv/error.hpp"
#include "bv/laplacian.hpp"

namespace bv {

struct BubbleParams {
  int n = 3;
  std::vector<double> center;
  double t = 1.0;
  double c = 1.0;

  double decay_power() const { return 0.5 * (n - 2); }
  /// φ at its center, c t^{-(n-2)/2}.
  double peak() const { return c * std::pow(t, -decay_power()); }
};

inline double bubble_constant(int n) { return std::pow(static_cast<double>(n) * (n - 2), 0.25 * (n - 2)); }

inline BubbleParams make_bubble(int n, std::vector<double> center, double t) {
  if (n < 3) throw Error(ErrorCode::DimensionTooSmall, "bubble needs n >= 3");
  if (!(t > 0.0)) throw Error(ErrorCode::NonpositiveScale, "bubble scale t must be positive");
  if (center.empty()) center.assign(static_cast<std::size_t>(n), 0.0);
  if (center.size() != static_cast<std::size_t>(n)) {
    throw Error(ErrorCode::InvalidArgument, "bubble center must have n coordinates");
  }
  return BubbleParams{n, std::move(center), t, bubble_constant(n)};
}

inline BubbleParams make_bubble(const ExponentConfig& config, std::vector<double> center, double t) {
  return make_bubble(config.n, std::move(center), t);
}

/// φ as a function of the distance r = |x - x0|.
inline double eval_bubble_radial(const BubbleParams& b, double r) {
  return b.c * std::pow(b.t / (b.t * b.t + r * r), b.decay_power());
}

inline double eval_bubble(const BubbleParams& b, std::span<const double> x) {
  double r2 = 0.0;
  for (std::size_t i = 0; i < b.center.size(); ++i) {
    const double d = x[i] - b.center[i];
    r2 += d * d;
  }
  return b.c * std::pow(b.t / (b.t * b.t + r2), b.decay_power());
}

/// dφ/dr.
inline double bubble_derivative_radial(const BubbleParams& b, double r) {
  return -(b.n - 2) * r * eval_bubble_radial(b, r) / (b.t * b.t + r * r);
}

/// φ(rb) - φ(ra) without cancellation, even when rb and ra are nearly equal.
inline double bubble_difference(const BubbleParams& b, double ra, double rb) {
  const double base = b.t * b.t + ra * ra;
  const double rel = (rb - ra) * (rb + ra) / base;
  return eval_bubble_radial(b, ra) * std::expm1(-b.decay_power() * std::log1p(rel));
}

/// Bubble sampled on a grid as a profile pair (u = v = φ).
inline RadialProfilePair sample_bubble(const BubbleParams& b, const RadialGrid& grid) {
  RadialProfilePair out{grid, {}, {}, {}, {}};
  out.u.resize(grid.size());
  out.du.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.u[i] = eval_bubble_radial(b, grid[i]);
    out.du[i] = bubble_derivative_radial(b, grid[i]);
  }
  out.v = out.u;
  out.dv = out.du;
  return out;
}

struct ResidualReport {
  double max_abs = 0.0;
  double at_radius = 0.0;
};

namespace detail {

inline void require_resolved(const BubbleParams& b, const RadialGrid& grid, Stencil stencil) {
  const auto k = static_cast<std::size_t>(half_width(stencil));
  if (grid.size() < 2 * k + 1) throw Error(ErrorCode::GridTooCoarse, "grid shorter than stencil");
  bool any = false;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (grid[i] < 0.1 * b.t || grid[i] > 10.0 * b.t) continue;
    any = true;
    if ((grid[i + 1] - grid[i]) / std::max(grid[i], b.t) > 0.05) {
      throw Error(ErrorCode::GridTooCoarse, "grid spacing exceeds 5% of max(r, t) near the bubble scale");
    }
  }
  if (!any) throw Error(ErrorCode::GridTooCoarse, "no grid nodes near the bubble scale");
}

}  // namespace detail

/// Residual of the radial system -Δu = u^α v^β, -Δv = u^β v^α for two bubbles
/// sharing a center, each measured as max |(-Δ·)(r) - rhs(r)| over interior nodes.
inline std::pair<ResidualReport, ResidualReport> system_residual(const BubbleParams& u,
                                                                 const BubbleParams& v,
                                                                 const ExponentConfig& config,
                                                                 const RadialGrid& grid,
                                                                 Stencil stencil = Stencil::seven_point) {
  detail::require_resolved(u, grid, stencil);
  detail::require_resolved(v, grid, stencil);
  const auto k = static_cast<std::size_t>(half_width(stencil));
  const auto r = grid.nodes();
  ResidualReport ru;
  ResidualReport rv;
  for (std::size_t i = k; i + k < grid.size(); ++i) {
    const double lap_u = radial_laplacian_at(r, i, config.n, stencil, [&](std::size_t j) {
      return bubble_difference(u, r[i], r[j]);
    });
    const double lap_v = radial_laplacian_at(r, i, config.n, stencil, [&](std::size_t j) {
      return bubble_difference(v, r[i], r[j]);
    });
    const double uu = eval_bubble_radial(u, r[i]);
    const double vv = eval_bubble_radial(v, r[i]);
    const double eu = std::abs(-lap_u - std::pow(uu, config.alpha) * std::pow(vv, config.beta));
    const double ev = std::abs(-lap_v - std::pow(uu, config.beta) * std::pow(vv, config.alpha));
    if (eu > ru.max_abs) ru = {eu, r[i]};
    if (ev > rv.max_abs) rv = {ev, r[i]};
  }
  return {ru, rv};
}

/// max |(-Δφ)(r) - φ(r)^{(n+2)/(n-2)}| over interior nodes, r measured from the center.
inline ResidualReport bubble_residual_report(const BubbleParams& b, const ExponentConfig& config,
                                             const RadialGrid& grid,
                                             Stencil stencil = Stencil::seven_point) {
  detail::require_resolved(b, grid, stencil);
  const auto k = static_cast<std::size_t>(half_width(stencil));
  const auto r = grid.nodes();
  const double power = config.critical_exponent();
  ResidualReport report;
  for (std::size_t i = k; i + k < grid.size(); ++i) {
    const double lap = radial_laplacian_at(r, i, config.n, stencil, [&](std::size_t j) {
      return bubble_difference(b, r[i], r[j]);
    });
    const double e = std::abs(-lap - std::pow(eval_bubble_radial(b, r[i]), power));
    if (e > report.max_abs) report = {e, r[i]};
  }
  return report;
}

inline double bubble_residual(const BubbleParams& b, const ExponentConfig& config,
                              const RadialGrid& grid, Stencil stencil = Stencil::seven_point) {
  return bubble_residual_report(b, config, grid, stencil).max_abs;
}

}  // namespace bv
