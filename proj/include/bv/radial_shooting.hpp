#pragma once

// Radial shooting for the coupled system
//   u'' + (n-1)u'/r = -u^α v^β,   v'' + (n-1)v'/r = -u^β v^α,
//   u(0) = u0, v(0) = v0, u'(0) = v'(0) = 0,
// trajectory classification, and the uniqueness sweep over v0/u0.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bv/core.hpp"
#include "bv/error.hpp"
#include "bv/ode.hpp"
#include "bv/parallel.hpp"
#include "bv/quadrature.hpp"

namespace bv {

struct ShootInput {
  ExponentConfig config;
  double u0 = 1.0;
  double v0 = 1.0;
  double r_max = 1e4;
  OdeTolerances tol{};
  /// Taylor start radius, also the first profile node.
  double r_start = 1e-6;
  std::size_t nodes = 4000;
};

enum class Component { u, v };

inline const char* to_string(Component c) { return c == Component::u ? "u" : "v"; }

struct PositivityEvent {
  Component which = Component::u;
  double at_r = 0.0;
};

/// Profile on the output grid. Nodes at or beyond a positivity event are
/// zero-filled; `valid_count` is the number of integrated nodes.
struct Trajectory {
  RadialProfilePair profile;
  std::size_t valid_count = 0;
  std::optional<PositivityEvent> event;
  OdeStats stats;
};

namespace detail {

inline void validate_shoot_input(const ShootInput& in) {
  if (!(in.u0 > 0.0) || !(in.v0 > 0.0)) {
    throw Error(ErrorCode::NonpositiveInput, "initial values u0, v0 must be positive");
  }
  if (!(in.r_max > 0.0) || !(in.r_max > in.r_start) || !(in.r_start > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "need 0 < r_start < r_max");
  }
  if (!(in.tol.abs > 0.0) || !(in.tol.rel > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "integration tolerances must be positive");
  }
}

// Root of one component inside an accepted step, by bisection on the step fraction.
template <class Stepper>
double localize_zero(const Stepper& stepper, double r_prev, const std::array<double, 4>& y_prev,
                     double h, std::size_t component) {
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 64; ++it) {
    const double mid = 0.5 * (lo + hi);
    const auto y = stepper.step(r_prev, y_prev, mid * h);
    if (y[component] > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return r_prev + 0.5 * (lo + hi) * h;
}

}  // namespace detail

/// Integrates the radial system on a geometric grid from r_start to r_max.
/// Starts from the second-order Taylor data
///   u(r0) = u0 - u0^α v0^β r0²/(2n),  u'(r0) = -u0^α v0^β r0/n
/// (and symmetric for v), and stops at the first zero of u or v.
inline Trajectory integrate_radial(const ShootInput& in) {
  detail::validate_shoot_input(in);
  const ExponentConfig& cfg = in.config;
  const int n = cfg.n;
  const double alpha = cfg.alpha;
  const double beta = cfg.beta;

  auto grid = RadialGrid::geometric(in.r_start, in.r_max, in.nodes);
  const std::size_t count = grid.size();
  Trajectory out{RadialProfilePair{grid, std::vector<double>(count, 0.0), std::vector<double>(count, 0.0),
                                   std::vector<double>(count, 0.0), std::vector<double>(count, 0.0)},
                 0, std::nullopt, {}};

  auto rhs = [n, alpha, beta](double r, const std::array<double, 4>& y) {
    const double u = std::max(y[0], 0.0);
    const double v = std::max(y[2], 0.0);
    const double fu = std::pow(u, alpha) * std::pow(v, beta);
    const double fv = std::pow(u, beta) * std::pow(v, alpha);
    return std::array<double, 4>{y[1], -(n - 1) * y[1] / r - fu, y[3], -(n - 1) * y[3] / r - fv};
  };
  auto stepper = make_dormand_prince<4>(rhs, in.tol);

  const double r0 = grid.front();
  const double fu0 = std::pow(in.u0, alpha) * std::pow(in.v0, beta);
  const double fv0 = std::pow(in.u0, beta) * std::pow(in.v0, alpha);
  std::array<double, 4> y{in.u0 - fu0 * r0 * r0 / (2.0 * n), -fu0 * r0 / n,
                          in.v0 - fv0 * r0 * r0 / (2.0 * n), -fv0 * r0 / n};
  double r = r0;
  stepper.set_step_size(0.01 * r0);

  auto store = [&](std::size_t i) {
    out.profile.u[i] = y[0];
    out.profile.du[i] = y[1];
    out.profile.v[i] = y[2];
    out.profile.dv[i] = y[3];
  };
  store(0);
  out.valid_count = 1;

  for (std::size_t i = 1; i < count; ++i) {
    stepper.advance(r, y, grid[i],
                    [&](double r_prev, const std::array<double, 4>& y_prev, double r_new,
                        const std::array<double, 4>& y_new) {
                      const bool u_hit = !(y_new[0] > 0.0);
                      const bool v_hit = !(y_new[2] > 0.0);
                      if (!u_hit && !v_hit) return true;
                      const double h = r_new - r_prev;
                      const double ru = u_hit ? detail::localize_zero(stepper, r_prev, y_prev, h, 0) : r_new;
                      const double rv = v_hit ? detail::localize_zero(stepper, r_prev, y_prev, h, 2) : r_new;
                      if (u_hit && (!v_hit || ru <= rv)) {
                        out.event = PositivityEvent{Component::u, ru};
                      } else {
                        out.event = PositivityEvent{Component::v, rv};
                      }
                      return false;
                    });
    if (out.event) break;
    store(i);
    out.valid_count = i + 1;
  }
  out.stats = stepper.stats();
  return out;
}

enum class OutcomeKind { BoundState, PositivityFailure, NoDecay };

inline const char* to_string(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::BoundState: return "BoundState";
    case OutcomeKind::PositivityFailure: return "PositivityFailure";
    case OutcomeKind::NoDecay: return "NoDecay";
  }
  return "Unknown";
}

struct ShootOutcome {
  OutcomeKind kind = OutcomeKind::NoDecay;
  /// Failing component for PositivityFailure.
  std::optional<Component> failed;
  /// Event radius (PositivityFailure) or the radius where the decay test ran (NoDecay, BoundState).
  double at_r = 0.0;
  /// First sign change of v - u with both components positive, if seen inside the window.
  std::optional<double> crossing_r;
  Trajectory trajectory;
  std::map<std::string, double> diagnostics;

  const RadialProfilePair& profile() const { return trajectory.profile; }
};

inline constexpr double kPlateauTolerance = 0.01;

/// Relative variation (max - min)/max of r^{n-2} f(r) over [R/10, R].
inline double plateau_variation(std::span<const double> f, const RadialGrid& grid, int n) {
  const double lo_r = grid.back() / 10.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = grid.locate(lo_r); i < grid.size(); ++i) {
    if (grid[i] < lo_r) continue;
    const double g = std::pow(grid[i], n - 2) * f[i];
    lo = std::min(lo, g);
    hi = std::max(hi, g);
  }
  if (!(hi > 0.0)) return std::numeric_limits<double>::infinity();
  return (hi - lo) / hi;
}

/// PositivityFailure if u or v reaches 0; else BoundState if r^{n-2}u and
/// r^{n-2}v both plateau (< 1% variation) over the last decade; else NoDecay.
inline ShootOutcome classify(const ShootInput& in) {
  ShootOutcome out{OutcomeKind::NoDecay, std::nullopt, 0.0, std::nullopt, integrate_radial(in), {}};
  const Trajectory& tr = out.trajectory;
  const RadialProfilePair& p = tr.profile;
  const int n = in.config.n;

  for (std::size_t i = 0; i + 1 < tr.valid_count; ++i) {
    const double d0 = p.v[i] - p.u[i];
    const double d1 = p.v[i + 1] - p.u[i + 1];
    if ((d0 < 0.0 && d1 >= 0.0) || (d0 > 0.0 && d1 <= 0.0)) {
      const double s = d0 / (d0 - d1);
      out.crossing_r = p.grid[i] + s * (p.grid[i + 1] - p.grid[i]);
      break;
    }
  }

  double u_min = std::numeric_limits<double>::infinity();
  double v_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tr.valid_count; ++i) {
    u_min = std::min(u_min, p.u[i]);
    v_min = std::min(v_min, p.v[i]);
  }
  out.diagnostics["u_min"] = u_min;
  out.diagnostics["v_min"] = v_min;
  out.diagnostics["accepted_steps"] = static_cast<double>(tr.stats.accepted);
  out.diagnostics["rejected_steps"] = static_cast<double>(tr.stats.rejected);
  out.diagnostics["r_end"] = tr.event ? tr.event->at_r : p.grid.back();

  if (tr.event) {
    out.kind = OutcomeKind::PositivityFailure;
    out.failed = tr.event->which;
    out.at_r = tr.event->at_r;
    return out;
  }

  const double pu = plateau_variation(p.u, p.grid, n);
  const double pv = plateau_variation(p.v, p.grid, n);
  out.diagnostics["plateau_u"] = pu;
  out.diagnostics["plateau_v"] = pv;
  out.diagnostics["u_tail"] = std::pow(p.grid.back(), n - 2) * p.u.back();
  out.diagnostics["v_tail"] = std::pow(p.grid.back(), n - 2) * p.v.back();
  out.at_r = p.grid.back();
  out.kind = (pu < kPlateauTolerance && pv < kPlateauTolerance) ? OutcomeKind::BoundState
                                                                  : OutcomeKind::NoDecay;
  return out;
}

/// u^α v^β - u^β v^α. For α < β it is positive iff v > u and zero iff u = v.
inline double ordering_term(double u, double v, const ExponentConfig& config) {
  if (!(u > 0.0) || !(v > 0.0)) throw Error(ErrorCode::NonpositiveInput, "ordering term needs u, v > 0");
  return std::pow(u, config.alpha) * std::pow(v, config.beta) -
         std::pow(u, config.beta) * std::pow(v, config.alpha);
}

inline const std::vector<double>& default_sweep_ratios() {
  static const std::vector<double> ratios{0.5, 0.8, 0.9, 0.95, 1.0, 1.05, 1.1, 1.25, 2.0};
  return ratios;
}

/// Ratios this close to 1 are not asserted either way.
inline constexpr double kBoundStateWindow = 1e-3;

struct SweepOptions {
  double r_max = 1e4;
  std::size_t nodes = 4000;
  double r_start = 1e-6;
  OdeTolerances tol{};
  unsigned threads = 0;
};

struct SweepRow {
  double ratio = 1.0;
  ShootOutcome outcome;
  /// Inside the ill-conditioned window around 1 (and not 1 itself).
  bool excluded = false;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  /// BoundState exactly at ratio 1 and nowhere outside the window.
  bool assertion_holds = true;
  std::vector<std::string> violations;
};

/// Classifies (u0, v0) = (base, ρ·base) for each ratio.
inline SweepReport uniqueness_sweep(const ExponentConfig& config, std::span<const double> ratios,
                                    double base, const SweepOptions& options = {}) {
  if (!config.uniqueness_applicable) {
    throw Error(ErrorCode::HypothesisNotApplicable, "uniqueness sweep needs alpha < beta");
  }
  if (!(base > 0.0)) throw Error(ErrorCode::NonpositiveInput, "sweep base must be positive");
  for (double r : ratios) {
    if (!(r > 0.0)) throw Error(ErrorCode::NonpositiveInput, "sweep ratios must be positive");
  }

  auto outcomes = parallel_map(
      ratios.size(),
      [&](std::size_t i) {
        ShootInput in;
        in.config = config;
        in.u0 = base;
        in.v0 = ratios[i] * base;
        in.r_max = options.r_max;
        in.nodes = options.nodes;
        in.r_start = options.r_start;
        in.tol = options.tol;
        return classify(in);
      },
      options.threads);

  SweepReport report;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    SweepRow row{ratios[i], std::move(outcomes[i]), false};
    const bool at_one = ratios[i] == 1.0;
    row.excluded = !at_one && std::abs(ratios[i] - 1.0) <= kBoundStateWindow;
    const bool bound = row.outcome.kind == OutcomeKind::BoundState;
    if (at_one && !bound) {
      report.assertion_holds = false;
      report.violations.push_back("ratio 1 is not a bound state");
    } else if (!at_one && !row.excluded && bound) {
      report.assertion_holds = false;
      report.violations.push_back("bound state at ratio " + std::to_string(ratios[i]));
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

struct IntegralIdentityReport {
  std::vector<double> r_checked;
  /// u(0) - u(r) and the nested integral for the u equation.
  std::vector<double> lhs;
  std::vector<double> rhs;
  /// The same pair for the v equation.
  std::vector<double> lhs_v;
  std::vector<double> rhs_v;
  double max_abs_gap = 0.0;
};

namespace detail {

// K(r) = ∫_0^r τ^{1-n} ∫_0^τ s^{n-1} F(s) ds dτ on the grid nodes, with
// the [0, r0] cell closed by F ≈ F(r0). Also returns the integrand of the
// outer integral (dK/dr).
inline std::pair<std::vector<double>, std::vector<double>> nested_integral(std::span<const double> forcing,
                                                                           const RadialGrid& grid, int n) {
  const auto r = grid.nodes();
  const double r0 = r.front();
  std::vector<double> inner_integrand(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) inner_integrand[i] = std::pow(r[i], n - 1) * forcing[i];
  const auto inner = cumulative_trapezoid(r, inner_integrand, forcing.front() * std::pow(r0, n) / n);
  std::vector<double> slope(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) slope[i] = std::pow(r[i], 1 - n) * inner[i];
  auto outer = cumulative_trapezoid(r, slope, forcing.front() * r0 * r0 / (2.0 * n));
  return {std::move(outer), std::move(slope)};
}

}  // namespace detail

/// Checks u(r) = u(0) - ∫_0^r τ^{1-n} ∫_0^τ s^{n-1} u^α v^β ds dτ (and the v
/// counterpart) at the requested radii. u(0) comes from the Taylor relation at
/// the first node; off-node radii are evaluated by cubic Hermite interpolation.
inline IntegralIdentityReport check_integral_identity(const RadialProfilePair& profile,
                                                      const ExponentConfig& config,
                                                      std::span<const double> radii) {
  profile.check();
  const RadialGrid& grid = profile.grid;
  const int n = config.n;
  const std::size_t count = grid.size();
  std::vector<double> fu(count);
  std::vector<double> fv(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double u = std::max(profile.u[i], 0.0);
    const double v = std::max(profile.v[i], 0.0);
    fu[i] = std::pow(u, config.alpha) * std::pow(v, config.beta);
    fv[i] = std::pow(u, config.beta) * std::pow(v, config.alpha);
  }
  const auto [ku, su] = detail::nested_integral(fu, grid, n);
  const auto [kv, sv] = detail::nested_integral(fv, grid, n);
  const double r0 = grid.front();
  const double u_origin = profile.u.front() + fu.front() * r0 * r0 / (2.0 * n);
  const double v_origin = profile.v.front() + fv.front() * r0 * r0 / (2.0 * n);

  auto at = [&](std::span<const double> values, std::span<const double> slopes, double r) {
    const std::size_t j = grid.locate(r);
    if (grid[j] == r || j + 1 >= count) return values[j];
    return hermite(grid[j], grid[j + 1], values[j], values[j + 1], slopes[j], slopes[j + 1], r);
  };

  IntegralIdentityReport report;
  for (double r : radii) {
    if (r < 0.0 || r > grid.back()) {
      throw Error(ErrorCode::GridTooCoarse, "radius " + std::to_string(r) + " outside grid coverage");
    }
    double lu = 0.0, ru = 0.0, lv = 0.0, rv = 0.0;
    if (r > 0.0 && r < r0) {
      ru = fu.front() * r * r / (2.0 * n);
      rv = fv.front() * r * r / (2.0 * n);
      lu = ru;
      lv = rv;
    } else if (r >= r0) {
      if (grid.locate(r) < 8) throw Error(ErrorCode::GridTooCoarse, "fewer than 8 nodes below r");
      lu = u_origin - at(profile.u, profile.du, r);
      lv = v_origin - at(profile.v, profile.dv, r);
      ru = at(ku, su, r);
      rv = at(kv, sv, r);
    }
    report.r_checked.push_back(r);
    report.lhs.push_back(lu);
    report.rhs.push_back(ru);
    report.lhs_v.push_back(lv);
    report.rhs_v.push_back(rv);
    report.max_abs_gap = std::max({report.max_abs_gap, std::abs(lu - ru), std::abs(lv - rv)});
  }
  return report;
}

/// W(r) = ∫_0^r τ^{1-n} ∫_0^τ s^{n-1} (u^α v^β - u^β v^α) ds dτ on the first
/// `count` nodes; by the integral identities W = (v - u)(r) - (v0 - u0).
inline std::vector<double> contradiction_integral(const RadialProfilePair& profile,
                                                  const ExponentConfig& config) {
  profile.check();
  std::vector<double> diff(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double u = std::max(profile.u[i], 0.0);
    const double v = std::max(profile.v[i], 0.0);
    diff[i] = std::pow(u, config.alpha) * std::pow(v, config.beta) -
              std::pow(u, config.beta) * std::pow(v, config.alpha);
  }
  return detail::nested_integral(diff, profile.grid, config.n).first;
}

/// Nodes (among the first `valid`) with 0 < u < v where the ordering term is not positive.
inline std::size_t sign_lemma_violations(const RadialProfilePair& profile, const ExponentConfig& config,
                                         std::size_t valid) {
  std::size_t bad = 0;
  for (std::size_t i = 0; i < std::min(valid, profile.size()); ++i) {
    const double u = profile.u[i];
    const double v = profile.v[i];
    if (u > 0.0 && u < v && !(ordering_term(u, v, config) > 0.0)) ++bad;
  }
  return bad;
}

}  // namespace bv
