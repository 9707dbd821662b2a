#pragma once

// The acceptance suite: twelve checks, each returning a pass flag, a one-line
// detail and its wall time. Shared by the acceptance binary and `verify-all`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bv/bubble.hpp"
#include "bv/core.hpp"
#include "bv/moving_plane.hpp"
#include "bv/potential.hpp"
#include "bv/radial_shooting.hpp"

namespace bv {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

struct AcceptanceOptions {
  GridSpec grid{};
  unsigned threads = 1;
  unsigned long long seed = 20240611;
};

namespace acceptance {

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct Check {
  bool ok = true;
  std::string detail;
  double slowest_case = 0.0;
};

inline CriterionResult finish(int id, const char* name, double budget, Check c, double total, bool per_case) {
  const double measured = per_case ? c.slowest_case : total;
  CriterionResult r{id, name, c.ok && measured < budget, std::move(c.detail), total, budget};
  if (c.ok && measured >= budget) r.detail += fmt(" [over time budget: %.2fs >= %.0fs]", measured, budget);
  return r;
}

inline double max_relative_gap(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]) / std::abs(b[i]));
  return worst;
}

inline CriterionResult bubble_residual_grid(const AcceptanceOptions& opt) {
  Stopwatch total;
  Check c;
  const auto grid = RadialGrid::geometric(opt.grid);
  double worst = 0.0;
  for (int n : {3, 4, 5}) {
    const auto config = validate_config(n, 0.5 * critical_exponent(n), 0.5 * critical_exponent(n));
    for (double t : {0.5, 1.0, 2.0}) {
      Stopwatch sw;
      const double res = bubble_residual(make_bubble(config, {}, t), config, grid);
      c.slowest_case = std::max(c.slowest_case, sw.seconds());
      worst = std::max(worst, res);
      if (!(res <= 1e-6)) c.ok = false;
    }
  }
  c.detail = fmt("max residual %.3e over n in {3,4,5}, t in {0.5,1,2} (bound 1e-6)", worst);
  return finish(1, "bubble residual", 1.0, std::move(c), total.seconds(), true);
}

inline CriterionResult system_closure(const AcceptanceOptions& opt) {
  Stopwatch total;
  Check c;
  const auto grid = RadialGrid::geometric(opt.grid);
  double worst = 0.0;
  const struct {
    int n;
    double a, b;
  } cases[] = {{3, 2.0, 3.0}, {4, 1.0, 2.0}, {5, 1.0, 4.0 / 3.0}};
  for (const auto& k : cases) {
    Stopwatch sw;
    const auto config = validate_config(k.n, k.a, k.b);
    const auto phi = make_bubble(config, {}, 1.0);
    const auto [ru, rv] = system_residual(phi, phi, config, grid);
    c.slowest_case = std::max(c.slowest_case, sw.seconds());
    worst = std::max({worst, ru.max_abs, rv.max_abs});
    if (!(ru.max_abs <= 1e-6 && rv.max_abs <= 1e-6)) c.ok = false;
  }
  c.detail = fmt("max residual of both equations %.3e for (3,2,3), (4,1,2), (5,1,4/3)", worst);
  return finish(2, "system closure", 1.0, std::move(c), total.seconds(), true);
}

inline CriterionResult shooting_oracle(const AcceptanceOptions& opt) {
  Stopwatch total;
  Check c;
  const auto config = validate_config(3, 2.0, 3.0);
  double worst = 0.0;
  for (double t : {0.5, 1.0, 2.0}) {
    Stopwatch sw;
    const auto phi = make_bubble(config, {}, t);
    ShootInput in;
    in.config = config;
    in.u0 = in.v0 = phi.peak();
    in.r_start = opt.grid.r0;
    in.r_max = opt.grid.rmax;
    in.nodes = opt.grid.nodes;
    const auto tr = integrate_radial(in);
    const auto& p = tr.profile;
    for (std::size_t i = 0; i < tr.valid_count && p.grid[i] <= 50.0; ++i) {
      const double exact = eval_bubble_radial(phi, p.grid[i]);
      worst = std::max({worst, std::abs(p.u[i] - exact) / exact, std::abs(p.v[i] - exact) / exact});
    }
    if (tr.event || p.grid.back() < 50.0) c.ok = false;
    c.slowest_case = std::max(c.slowest_case, sw.seconds());
  }
  if (!(worst <= 1e-6)) c.ok = false;
  c.detail = fmt("max relative error vs closed form on r <= 50: %.3e (bound 1e-6)", worst);
  return finish(3, "shooting vs closed form", 5.0, std::move(c), total.seconds(), true);
}

struct SweepData {
  ExponentConfig config;
  SweepReport report;
};

inline SweepData run_sweep(const AcceptanceOptions& opt) {
  const auto config = validate_config(3, 2.0, 3.0, Hypothesis::ordered);
  const std::vector<double> ratios{0.5, 0.8, 0.9, 1.0, 1.1, 1.25, 2.0};
  SweepOptions so;
  so.r_max = opt.grid.rmax;
  so.nodes = opt.grid.nodes;
  so.r_start = opt.grid.r0;
  so.threads = opt.threads;
  return {config, uniqueness_sweep(config, ratios, 1.0, so)};
}

inline CriterionResult uniqueness_witness(const AcceptanceOptions& opt, const SweepData& data, double seconds) {
  (void)opt;
  Check c;
  std::string kinds;
  for (const auto& row : data.report.rows) {
    const bool bound = row.outcome.kind == OutcomeKind::BoundState;
    if (bound != (row.ratio == 1.0)) c.ok = false;
    kinds += fmt("%s%g:%s", kinds.empty() ? "" : " ", row.ratio, bound ? "BS" : to_string(row.outcome.kind));
    if (row.outcome.failed) kinds += fmt("(%s@%.4g)", to_string(*row.outcome.failed), row.outcome.at_r);
  }
  c.ok = c.ok && data.report.assertion_holds;
  c.detail = kinds;
  return finish(4, "uniqueness sweep", 60.0, std::move(c), seconds, false);
}

inline CriterionResult sign_lemma(const SweepData& data) {
  Stopwatch total;
  Check c;
  std::size_t checked = 0;
  std::size_t violations = 0;
  for (const auto& row : data.report.rows) {
    const auto& tr = row.outcome.trajectory;
    violations += sign_lemma_violations(tr.profile, data.config, tr.valid_count);
    for (std::size_t i = 0; i < tr.valid_count; ++i) {
      if (tr.profile.u[i] > 0.0 && tr.profile.u[i] < tr.profile.v[i]) ++checked;
    }
  }
  c.ok = violations == 0 && checked > 0;
  c.detail = fmt("%zu violations over %zu nodes with 0 < u < v", violations, checked);
  return finish(5, "sign lemma", 30.0, std::move(c), total.seconds(), false);
}

inline CriterionResult integral_identity(const AcceptanceOptions& opt) {
  Stopwatch total;
  Check c;
  const auto config = validate_config(3, 2.0, 3.0);
  const auto phi = make_bubble(config, {}, 1.0);
  const std::vector<double> radii{0.1, 1.0, 10.0};
  GridSpec fine = opt.grid;
  fine.nodes = 2 * opt.grid.nodes - 1;
  const double gap = check_integral_identity(sample_bubble(phi, RadialGrid::geometric(opt.grid)), config, radii).max_abs_gap;
  const double gap_fine = check_integral_identity(sample_bubble(phi, RadialGrid::geometric(fine)), config, radii).max_abs_gap;
  const double ratio = gap / gap_fine;
  c.ok = gap <= 1e-5 && ratio >= 3.5;
  c.detail = fmt("gap %.3e at r in {0.1,1,10} (bound 1e-5); doubled grid %.3e, ratio %.2f (>= 3.5)", gap, gap_fine,
                 ratio);
  return finish(6, "integral identity", 10.0, std::move(c), total.seconds(), false);
}

inline CriterionResult newton_exactness() {
  Stopwatch total;
  Check c;
  // The jump sits on a node, where the indicator takes its midpoint value.
  const auto grid = RadialGrid::uniform(1e-4, 10.0);
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    f[i] = grid[i] < 1.0 ? 1.0 : (std::abs(grid[i] - 1.0) < 1e-9 ? 0.5 : 0.0);
  }
  const auto u = newton_potential_radial(f, grid, 3);
  const double mass = radial_mass(f, grid, 3);
  const double centre_err = std::abs(u.front() - 0.5);
  double exterior_err = 0.0;
  for (double r : {2.0, 5.0, 9.0}) {
    const std::size_t i = grid.locate(r + 1e-9);
    exterior_err = std::max(exterior_err, std::abs(u[i] - mass / grid[i]));
  }
  c.ok = centre_err <= 1e-6 && exterior_err <= 1e-6;
  c.detail = fmt("|u(0) - 1/2| = %.2e, max exterior |u - mass/r| = %.2e at r in {2,5,9}", centre_err, exterior_err);
  return finish(7, "Newton potential", 1.0, std::move(c), total.seconds(), false);
}

inline CriterionResult picard_fixed_point(const AcceptanceOptions& opt) {
  Stopwatch total;
  Check c;
  const auto config = validate_config(3, 2.0, 3.0);
  const auto profile = sample_bubble(make_bubble(config, {}, 1.0), RadialGrid::geometric(opt.grid));
  const auto next = picard_step(PicardState{profile, 0.0, 0, false}, config);
  c.ok = next.residual <= 1e-4;
  c.detail = fmt("update sup-norm %.3e at the bubble pair (bound 1e-4)", next.residual);
  return finish(8, "Picard fixed point", 10.0, std::move(c), total.seconds(), false);
}

inline CriterionResult plane_scan(const AcceptanceOptions& opt) {
  Stopwatch total;
  Check c;
  const auto config = validate_config(3, 2.0, 3.0);
  CartesianSampler sampler;
  sampler.n = 3;
  sampler.half_width = 10.0;
  sampler.nodes_per_axis = 64;
  sampler.geometry = SamplerGeometry::axisymmetric;
  const double cell = sampler.cell();
  const auto lambdas = lambda_sweep(-5.0, 5.0, 65);
  for (double c1 : {0.0, 1.0}) {
    const auto phi = make_bubble(config, {c1, 0.0, 0.0}, 1.0);
    auto field = [&](std::span<const double> x) { return eval_bubble(phi, x); };
    const auto scan = critical_plane_scan(field, field, sampler, lambdas, opt.threads);
    bool empty_above = true;
    for (const auto& e : scan.entries) {
      if (e.lambda > scan.lambda0 + cell && (e.Bu_count > 0 || e.Bv_count > 0)) empty_above = false;
    }
    const bool near = std::abs(scan.lambda0 - c1) <= cell;
    c.ok = c.ok && near && empty_above;
    c.detail += fmt("%scenter %g: lambda0 = %.5f", c.detail.empty() ? "" : "; ", c1, scan.lambda0);
  }
  c.detail += fmt(" (cell %.4f, m = 64)", cell);
  return finish(9, "moving-plane scan", 60.0, std::move(c), total.seconds(), false);
}

inline CriterionResult greens_identity() {
  Stopwatch total;
  Check c;
  const auto config = validate_config(3, 2.0, 3.0);
  const auto phi = make_bubble(config, {1.0, 0.0, 0.0}, 1.0);
  const struct {
    double lambda;
    std::vector<double> x;
  } cases[] = {{0.0, {-1.0, 0.0, 0.0}}, {0.5, {-0.5, 0.0, 0.0}}, {0.0, {-1.0, 0.5, 0.0}}};
  double worst = 0.0;
  for (const auto& k : cases) {
    const auto g = greens_reflection_identity(phi, phi, PlaneParam::along_e1(k.lambda, 3), k.x, config);
    const double rel = std::abs(g.lhs - g.rhs) / std::abs(g.lhs);
    worst = std::max(worst, rel);
    if (!(rel <= 0.02)) c.ok = false;
  }
  c.detail = fmt("max |lhs - rhs|/|lhs| = %.2e over 3 (lambda, x) configurations (bound 2e-2)", worst);
  return finish(10, "Green reflection identity", 60.0, std::move(c), total.seconds(), false);
}

inline CriterionResult hls_invariance(const AcceptanceOptions& opt) {
  Stopwatch total;
  Check c;
  const auto config = validate_config(3, 2.0, 3.0);
  const auto grid = RadialGrid::geometric(opt.grid);
  const KernelSpec kernel{3, 1.0, 64};
  const double e = 6.0 / 5.0;
  std::vector<double> ratios;
  std::vector<double> base;
  for (double t : {0.5, 1.0, 2.0}) {
    const auto phi = make_bubble(config, {}, t);
    std::vector<double> f(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) f[i] = std::pow(eval_bubble_radial(phi, grid[i]), 5.0);
    if (t == 1.0) base = f;
    ratios.push_back(hls_functional(f, f, grid, kernel, e, e).ratio);
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  const double spread = (*hi - *lo) / *hi;
  double homog = 0.0;
  for (double a : {2.0, 10.0}) {
    for (double b : {2.0, 10.0}) {
      std::vector<double> fa = base, gb = base;
      for (double& x : fa) x *= a;
      for (double& x : gb) x *= b;
      const double r = hls_functional(fa, gb, grid, kernel, e, e).ratio;
      homog = std::max(homog, std::abs(r - ratios[1]) / ratios[1]);
    }
  }
  c.ok = spread <= 1e-4 && homog <= 1e-12;
  c.detail = fmt("ratio %.10f, relative spread over t %.2e (bound 1e-4), homogeneity %.2e (bound 1e-12)", ratios[1],
                 spread, homog);
  return finish(11, "HLS invariance", 30.0, std::move(c), total.seconds(), false);
}

inline CriterionResult property_suites(const AcceptanceOptions& opt) {
  Stopwatch total;
  Check c;
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  std::uniform_real_distribution<double> amp(0.5, 2.0);
  std::uniform_int_distribution<int> dim(3, 5);
  constexpr int kCases = 100;
  const double eps = std::numeric_limits<double>::epsilon();

  int involution_bad = 0;
  int kernel_bad = 0;
  for (int k = 0; k < kCases; ++k) {
    const int n = dim(rng);
    std::vector<double> x(static_cast<std::size_t>(n)), d(x.size());
    for (auto& v : x) v = coord(rng);
    for (auto& v : d) v = coord(rng);
    const auto plane = PlaneParam::make(coord(rng), d);
    const auto back = reflect(reflect(x, plane), plane);
    double scale = std::abs(plane.lambda);
    for (double v : x) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (std::abs(back[i] - x[i]) > 16.0 * eps * scale) ++involution_bad;
    }
    // Kernel positivity: push both points strictly into H_λ.
    std::vector<double> y(x.size());
    for (auto& v : y) v = coord(rng);
    auto into_halfspace = [&](std::vector<double>& p) {
      const double off = plane.offset(p);
      if (off >= 0.0) {
        for (std::size_t i = 0; i < p.size(); ++i) p[i] -= (2.0 * off + 0.25) * plane.direction[i];
      }
    };
    into_halfspace(x);
    into_halfspace(y);
    if (!(reflected_kernel_difference(x, y, plane) > 0.0)) ++kernel_bad;
  }

  const auto config = validate_config(3, 2.0, 3.0);
  auto shot = [&](double u0, double v0) {
    ShootInput in;
    in.config = config;
    in.u0 = u0;
    in.v0 = v0;
    in.r_max = 1e3;
    in.nodes = 2000;
    return classify(in);
  };
  std::vector<std::pair<double, double>> starts(kCases);
  std::vector<double> equal(kCases);
  for (auto& s : starts) s = {amp(rng), amp(rng)};
  for (auto& a : equal) a = amp(rng);

  const auto swap_bad = parallel_map(
      kCases,
      [&](std::size_t k) {
        const auto a = shot(starts[k].first, starts[k].second);
        const auto b = shot(starts[k].second, starts[k].first);
        const auto& pa = a.profile();
        const auto& pb = b.profile();
        double peak = 0.0;
        double gap = 0.0;
        for (std::size_t i = 0; i < pa.size(); ++i) {
          peak = std::max({peak, std::abs(pa.u[i]), std::abs(pa.v[i])});
          gap = std::max({gap, std::abs(pa.u[i] - pb.v[i]), std::abs(pa.v[i] - pb.u[i])});
        }
        bool mirrored = a.kind == b.kind && gap <= 1e-9 * peak;
        if (a.failed) mirrored = mirrored && b.failed && *a.failed != *b.failed && a.at_r == b.at_r;
        return mirrored ? 0 : 1;
      },
      opt.threads);
  const auto collapse_bad = parallel_map(
      kCases,
      [&](std::size_t k) {
        const auto a = shot(equal[k], equal[k]);
        double gap = 0.0;
        for (std::size_t i = 0; i < a.profile().size(); ++i) {
          gap = std::max(gap, std::abs(a.profile().u[i] - a.profile().v[i]));
        }
        return gap <= 1e-10 * equal[k] ? 0 : 1;
      },
      opt.threads);
  int swap_total = 0;
  int collapse_total = 0;
  for (int v : swap_bad) swap_total += v;
  for (int v : collapse_bad) collapse_total += v;
  c.ok = involution_bad == 0 && kernel_bad == 0 && swap_total == 0 && collapse_total == 0;
  c.detail = fmt("violations: involution %d, swap %d, collapse %d, kernel %d (%d cases each, seed %llu)",
                 involution_bad, swap_total, collapse_total, kernel_bad, kCases, opt.seed);
  return finish(12, "property suites", 30.0, std::move(c), total.seconds(), false);
}

inline CriterionResult guarded(int id, const char* name, const std::function<CriterionResult()>& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return CriterionResult{id, name, false, std::string("threw: ") + e.what(), 0.0, 0.0};
  }
}

}  // namespace acceptance

/// Runs all twelve criteria in order; `on_result` sees each as it finishes.
inline std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {},
                                                   const std::function<void(const CriterionResult&)>& on_result = {}) {
  namespace a = acceptance;
  std::vector<CriterionResult> out;
  auto record = [&](CriterionResult r) {
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  };
  record(a::guarded(1, "bubble residual", [&] { return a::bubble_residual_grid(opt); }));
  record(a::guarded(2, "system closure", [&] { return a::system_closure(opt); }));
  record(a::guarded(3, "shooting vs closed form", [&] { return a::shooting_oracle(opt); }));

  std::optional<a::SweepData> sweep;
  a::Stopwatch sweep_time;
  record(a::guarded(4, "uniqueness sweep", [&] {
    sweep = a::run_sweep(opt);
    return a::uniqueness_witness(opt, *sweep, sweep_time.seconds());
  }));
  record(a::guarded(5, "sign lemma", [&] {
    if (!sweep) throw Error(ErrorCode::InvalidArgument, "sweep data unavailable");
    return a::sign_lemma(*sweep);
  }));
  record(a::guarded(6, "integral identity", [&] { return a::integral_identity(opt); }));
  record(a::guarded(7, "Newton potential", [&] { return a::newton_exactness(); }));
  record(a::guarded(8, "Picard fixed point", [&] { return a::picard_fixed_point(opt); }));
  record(a::guarded(9, "moving-plane scan", [&] { return a::plane_scan(opt); }));
  record(a::guarded(10, "Green reflection identity", [&] { return a::greens_identity(); }));
  record(a::guarded(11, "HLS invariance", [&] { return a::hls_invariance(opt); }));
  record(a::guarded(12, "property suites", [&] { return a::property_suites(opt); }));
  return out;
}

inline std::string format_result(const CriterionResult& r) {
  return acceptance::fmt("%s [%2d] %-26s %7.3fs  %s", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                         r.detail.c_str());
}

}  // namespace bv
