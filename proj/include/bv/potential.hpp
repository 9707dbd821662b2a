#pragma once

// Radial Newtonian potential (normalized so that -Δu = f), Picard iteration
// of the integral form of the system, and the Hardy-Littlewood-Sobolev
// bilinear functional for radial densities.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bv/core.hpp"
#include "bv/error.hpp"
#include "bv/quadrature.hpp"

namespace bv {

struct KernelSpec {
  int n = 3;
  /// Kernel power in |x - y|^{-λ}, 0 < λ < n.
  double lambda = 1.0;
  int angular_rule = 64;

  void validate() const {
    if (n < 3) throw Error(ErrorCode::DimensionTooSmall, "kernel needs n >= 3");
    if (!(lambda > 0.0) || !(lambda < n)) throw Error(ErrorCode::InvalidArgument, "kernel needs 0 < lambda < n");
    if (angular_rule < 16) throw Error(ErrorCode::InvalidArgument, "angular rule needs >= 16 nodes");
  }
};

/// Potential values with the radial derivative u'(r) = -r^{1-n} ∫_0^r s^{n-1} f ds.
struct PotentialSamples {
  std::vector<double> value;
  std::vector<double> derivative;
};

namespace detail {

// Decay exponent k of f ~ r^{-k} over the last decade of the grid.
inline double tail_decay_exponent(std::span<const double> f, const RadialGrid& grid) {
  const std::size_t last = grid.size() - 1;
  const std::size_t ref = grid.locate(grid.back() / 10.0);
  if (ref == last || grid[ref] <= 0.0) return std::numeric_limits<double>::infinity();
  if (f[last] == 0.0) return std::numeric_limits<double>::infinity();
  if (!(f[ref] > 0.0)) return -std::numeric_limits<double>::infinity();
  return std::log(f[ref] / f[last]) / std::log(grid[last] / grid[ref]);
}

}  // namespace detail

/// u(r) = (1/(n-2)) ∫_0^∞ s^{n-1} f(s) max(r, s)^{2-n} ds, the exact radial
/// reduction of the Newtonian potential. Beyond the last node f is continued as
/// C r^{-(n+2)} and that tail is added in closed form.
inline PotentialSamples newton_potential_with_derivative(std::span<const double> f, const RadialGrid& grid,
                                                         int n) {
  if (n < 3) throw Error(ErrorCode::DimensionTooSmall, "potential needs n >= 3");
  if (f.size() != grid.size()) throw Error(ErrorCode::InvalidArgument, "sample/grid length mismatch");
  for (double x : f) {
    if (!std::isfinite(x)) throw Error(ErrorCode::NonintegrableInput, "non-finite source sample");
    if (x < 0.0) throw Error(ErrorCode::InvalidArgument, "source must be nonnegative");
  }
  // ∫ s f ds converges only if f decays faster than s^{-2}.
  if (detail::tail_decay_exponent(f, grid) <= 2.0) {
    throw Error(ErrorCode::NonintegrableInput, "source tail does not decay faster than r^-2");
  }

  const auto r = grid.nodes();
  const std::size_t count = r.size();
  std::vector<double> mass_integrand(count);
  std::vector<double> flux_integrand(count);
  for (std::size_t i = 0; i < count; ++i) {
    mass_integrand[i] = std::pow(r[i], n - 1) * f[i];
    flux_integrand[i] = r[i] * f[i];
  }
  const double r_last = r.back();
  const double tail = f.back() * r_last * r_last / n;
  const auto inner = cumulative_trapezoid(r, mass_integrand, f.front() * std::pow(r.front(), n) / n);
  const auto outer = reverse_cumulative_trapezoid(r, flux_integrand, tail);

  PotentialSamples out;
  out.value.resize(count);
  out.derivative.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.value[i] = (std::pow(r[i], 2 - n) * inner[i] + outer[i]) / (n - 2);
    out.derivative[i] = -std::pow(r[i], 1 - n) * inner[i];
  }
  return out;
}

inline std::vector<double> newton_potential_radial(std::span<const double> f, const RadialGrid& grid, int n) {
  return newton_potential_with_derivative(f, grid, n).value;
}

/// Radial moment ∫_0^∞ s^{n-1} f ds, so that exterior values are mass/((n-2) r^{n-2}).
inline double radial_mass(std::span<const double> f, const RadialGrid& grid, int n) {
  const auto r = grid.nodes();
  std::vector<double> g(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) g[i] = std::pow(r[i], n - 1) * f[i];
  return cumulative_trapezoid(r, g, f.front() * std::pow(r.front(), n) / n).back() +
         f.back() * std::pow(r.back(), n) / 2.0;
}

struct PicardState {
  RadialProfilePair iterate;
  /// Sup-norm of the last update over both components.
  double residual = 0.0;
  int step = 0;
  /// Set when the iterate is identically zero (the trivial fixed point).
  bool degenerate = false;
};

inline constexpr double kPicardBlowup = 1e6;

/// One sweep of u ← (-Δ)^{-1}(u^α v^β), v ← (-Δ)^{-1}(u^β v^α).
inline PicardState picard_step(const PicardState& state, const ExponentConfig& config) {
  const RadialProfilePair& it = state.iterate;
  it.check();
  const std::size_t count = it.size();
  std::vector<double> fu(count);
  std::vector<double> fv(count);
  bool all_zero = true;
  for (std::size_t i = 0; i < count; ++i) {
    if (it.u[i] < 0.0 || it.v[i] < 0.0) throw Error(ErrorCode::InvalidArgument, "Picard iterate must be nonnegative");
    if (it.u[i] != 0.0 || it.v[i] != 0.0) all_zero = false;
    fu[i] = std::pow(it.u[i], config.alpha) * std::pow(it.v[i], config.beta);
    fv[i] = std::pow(it.u[i], config.beta) * std::pow(it.v[i], config.alpha);
  }
  auto pu = newton_potential_with_derivative(fu, it.grid, config.n);
  auto pv = newton_potential_with_derivative(fv, it.grid, config.n);

  double update = 0.0;
  double peak = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    update = std::max({update, std::abs(pu.value[i] - it.u[i]), std::abs(pv.value[i] - it.v[i])});
    peak = std::max({peak, pu.value[i], pv.value[i]});
  }
  if (!(peak <= kPicardBlowup)) {
    throw Error(ErrorCode::IterateBlowup, "Picard iterate exceeded 1e6 at step " + std::to_string(state.step + 1));
  }
  PicardState next{RadialProfilePair{it.grid, std::move(pu.value), std::move(pv.value), std::move(pu.derivative),
                                     std::move(pv.derivative)},
                   update, state.step + 1, all_zero};
  return next;
}

enum class PicardStop { converged, max_steps, blowup, degenerate };

inline const char* to_string(PicardStop s) {
  switch (s) {
    case PicardStop::converged: return "converged";
    case PicardStop::max_steps: return "max_steps";
    case PicardStop::blowup: return "blowup";
    case PicardStop::degenerate: return "degenerate";
  }
  return "unknown";
}

struct PicardOptions {
  double tolerance = 1e-8;
  int max_steps = 200;
};

struct PicardRun {
  PicardState final_state;
  std::vector<std::pair<int, double>> history;
  PicardStop stop = PicardStop::max_steps;
};

/// Iterates picard_step until the update drops below tolerance, the step cap
/// is reached, or the iterate blows up. No convergence is implied; the
/// history is the diagnostic.
inline PicardRun picard_iterate(PicardState initial, const ExponentConfig& config, const PicardOptions& options = {},
                                const std::function<void(int, double)>& on_step = {}) {
  PicardRun run{std::move(initial), {}, PicardStop::max_steps};
  for (int k = 0; k < options.max_steps; ++k) {
    try {
      run.final_state = picard_step(run.final_state, config);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::IterateBlowup) throw;
      run.stop = PicardStop::blowup;
      return run;
    }
    run.history.emplace_back(run.final_state.step, run.final_state.residual);
    if (on_step) on_step(run.final_state.step, run.final_state.residual);
    if (run.final_state.degenerate) {
      run.stop = PicardStop::degenerate;
      return run;
    }
    if (run.final_state.residual < options.tolerance) {
      run.stop = PicardStop::converged;
      return run;
    }
  }
  return run;
}

/// Sphere average of |x - y|^{-λ} over |x| = r, |y| = s, divided by max(r,s)^{-λ}:
///   a(ρ) = (ω_{n-2}/ω_{n-1}) ∫_{-1}^{1} (1 + ρ² - 2ρt)^{-λ/2} (1 - t²)^{(n-3)/2} dt,  ρ = min/max.
inline double angular_average(double rho, const KernelSpec& kernel, const GaussRule& rule) {
  const int n = kernel.n;
  if (std::abs(kernel.lambda - (n - 2)) < 1e-14) return 1.0;
  const double scale = unit_sphere_area(n - 1) / unit_sphere_area(n);
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double t = rule.nodes[k];
    const double base = 1.0 + rho * rho - 2.0 * rho * t;
    sum += rule.weights[k] * std::pow(base, -0.5 * kernel.lambda) * std::pow(1.0 - t * t, 0.5 * (n - 3));
  }
  return scale * sum;
}

struct HlsEvaluation {
  double functional = 0.0;
  double norm_f = 0.0;
  double norm_g = 0.0;
  /// J(f, g) / (‖f‖_r ‖g‖_s), 0 when f or g vanishes.
  double ratio = 0.0;
};

inline constexpr double kExponentRelationTolerance = 1e-12;

/// J(f, g) = ∫∫ f(x) g(y) |x - y|^{-λ} dx dy for radial f, g, reduced to a
/// double integral over (r, s) with the angular factor from angular_average.
/// For λ = n - 2 the factor is exactly max(r, s)^{2-n} and the sum collapses to
/// prefix sums.
inline HlsEvaluation hls_functional(std::span<const double> f, std::span<const double> g, const RadialGrid& grid,
                                    const KernelSpec& kernel, double r_exp, double s_exp,
                                    double norm_tol = kDefaultNormTolerance) {
  kernel.validate();
  const int n = kernel.n;
  if (f.size() != grid.size() || g.size() != grid.size()) {
    throw Error(ErrorCode::InvalidArgument, "sample/grid length mismatch");
  }
  if (std::abs(1.0 / r_exp + 1.0 / s_exp + kernel.lambda / n - 2.0) > kExponentRelationTolerance) {
    throw Error(ErrorCode::ExponentRelationViolated, "need 1/r + 1/s + lambda/n = 2");
  }
  const bool harmonic = std::abs(kernel.lambda - (n - 2)) < 1e-14;
  if (!harmonic && kernel.lambda >= n - 1) {
    throw Error(ErrorCode::QuadratureDivergence, "angular average diverges on r = s for lambda >= n - 1");
  }

  const auto r = grid.nodes();
  const std::size_t count = r.size();
  const auto w = trapezoid_weights(r);
  const double omega = unit_sphere_area(n);
  std::vector<double> a(count);
  std::vector<double> b(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double vol = w[i] * std::pow(r[i], n - 1);
    a[i] = vol * f[i];
    b[i] = vol * g[i];
  }

  double sum = 0.0;
  if (harmonic) {
    // Σ_i Σ_j a_i b_j max(r_i, r_j)^{2-n}: split at the diagonal.
    double prefix_a = 0.0;
    double prefix_b = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      const double k = std::pow(r[i], 2 - n);
      prefix_a += a[i];
      prefix_b += b[i];
      sum += k * (a[i] * prefix_b + b[i] * (prefix_a - a[i]));
    }
  } else {
    const GaussRule rule = gauss_legendre(kernel.angular_rule);
    if (const auto q = grid.ratio()) {
      // On a geometric grid min/max = q^{-|i-j|}: tabulate once.
      std::vector<double> table(count);
      for (std::size_t d = 0; d < count; ++d) table[d] = angular_average(std::pow(*q, -static_cast<double>(d)), kernel, rule);
      for (std::size_t i = 0; i < count; ++i) {
        if (a[i] == 0.0) continue;
        for (std::size_t j = 0; j < count; ++j) {
          const std::size_t d = i > j ? i - j : j - i;
          sum += a[i] * b[j] * std::pow(std::max(r[i], r[j]), -kernel.lambda) * table[d];
        }
      }
    } else {
      for (std::size_t i = 0; i < count; ++i) {
        if (a[i] == 0.0) continue;
        for (std::size_t j = 0; j < count; ++j) {
          const double hi = std::max(r[i], r[j]);
          const double lo = std::min(r[i], r[j]);
          sum += a[i] * b[j] * std::pow(hi, -kernel.lambda) * angular_average(lo / hi, kernel, rule);
        }
      }
    }
  }

  HlsEvaluation out;
  out.functional = omega * omega * sum;
  if (out.functional == 0.0) return out;
  out.norm_f = lp_norm_radial(f, grid, r_exp, n, norm_tol).value;
  out.norm_g = lp_norm_radial(g, grid, s_exp, n, norm_tol).value;
  out.ratio = out.functional / (out.norm_f * out.norm_g);
  return out;
}

struct OperatorBound {
  /// |Tf|_p with Tf(x) = ∫ |x - y|^{2-n} f(y) dy and p = 2n/(n-2).
  double lhs = 0.0;
  /// |f|_{np/(n+2p)} = |f|_{2n/(n+2)}.
  double rhs = 0.0;
  /// lhs / rhs, a lower bound for the suppressed constant C(n, p).
  double ratio = 0.0;
};

/// Both sides of |Tf|_p <= C |f|_{np/(n+2p)}; T is the un-normalized kernel
/// operator, (n-2) ω_{n-1} times the normalized potential.
inline OperatorBound verify_hls_operator_bound(std::span<const double> f, const RadialGrid& grid,
                                               const ExponentConfig& config, double norm_tol = kDefaultNormTolerance) {
  const int n = config.n;
  const double p = config.sobolev_exponent();
  const double q = n * p / (n + 2.0 * p);
  auto tf = newton_potential_radial(f, grid, n);
  const double scale = (n - 2) * unit_sphere_area(n);
  for (double& x : tf) x *= scale;
  OperatorBound out;
  out.lhs = lp_norm_radial(tf, grid, p, n, norm_tol).value;
  out.rhs = lp_norm_radial(f, grid, q, n, norm_tol).value;
  out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
  return out;
}

}  // namespace bv
