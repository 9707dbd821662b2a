#pragma once

// Moving-plane apparatus evaluated on concrete fields: reflections across
// {x·e = λ}, the exceedance sets B_λ = {x ∈ H_λ : f(x_λ) > f(x)}, the L^p
// quantities entering the reflection estimates, the Green's-function form of
// u_λ - u on the half space, and the scan for the critical plane.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bv/bubble.hpp"
#include "bv/core.hpp"
#include "bv/error.hpp"
#include "bv/parallel.hpp"
#include "bv/quadrature.hpp"

namespace bv {

using Point = std::vector<double>;

/// Hyperplane {x : x·direction = λ}; H_λ is the side x·direction < λ.
struct PlaneParam {
  double lambda = 0.0;
  Point direction;

  static PlaneParam along_e1(double lambda, int n) {
    Point d(static_cast<std::size_t>(n), 0.0);
    d[0] = 1.0;
    return PlaneParam{lambda, std::move(d)};
  }

  /// Normalizes the direction.
  static PlaneParam make(double lambda, Point direction) {
    double norm = 0.0;
    for (double c : direction) norm += c * c;
    norm = std::sqrt(norm);
    if (!(norm > 0.0)) throw Error(ErrorCode::InvalidArgument, "plane direction must be nonzero");
    for (double& c : direction) c /= norm;
    return PlaneParam{lambda, std::move(direction)};
  }

  bool is_e1() const {
    if (direction.empty() || direction[0] != 1.0) return false;
    return std::all_of(direction.begin() + 1, direction.end(), [](double c) { return c == 0.0; });
  }

  double offset(std::span<const double> x) const {
    double dot = 0.0;
    for (std::size_t i = 0; i < direction.size(); ++i) dot += x[i] * direction[i];
    return dot - lambda;
  }

  bool in_halfspace(std::span<const double> x) const {
    if (is_e1()) return x[0] < lambda;
    return offset(x) < 0.0;
  }
};

inline void reflect_into(std::span<const double> x, const PlaneParam& plane, std::span<double> out) {
  if (plane.is_e1()) {
    std::copy(x.begin(), x.end(), out.begin());
    out[0] = 2.0 * plane.lambda - x[0];
    return;
  }
  const double d = plane.offset(x);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - 2.0 * d * plane.direction[i];
}

/// x_λ, the mirror image of x across the plane.
inline Point reflect(std::span<const double> x, const PlaneParam& plane) {
  if (x.size() != plane.direction.size()) throw Error(ErrorCode::InvalidArgument, "point/plane dimension mismatch");
  Point out(x.size());
  reflect_into(x, plane, out);
  return out;
}

enum class SamplerGeometry {
  full,          ///< m^n cell centers of the cube [-L, L]^n
  axisymmetric,  ///< (x1, ρ) cells of [-L, L] x [0, L]; fields must be symmetric about the x1 axis
};

/// Midpoint sampler of the box [-L, L]^n.
struct CartesianSampler {
  double half_width = 10.0;
  int nodes_per_axis = 64;
  int n = 3;
  SamplerGeometry geometry = SamplerGeometry::axisymmetric;
  std::size_t budget = 20'000'000;
  /// Relative band inside which f(x_λ) and f(x) count as tied (excluded from B_λ).
  double tie_tolerance = 1e-12;

  std::size_t node_count() const {
    const auto m = static_cast<std::size_t>(nodes_per_axis);
    if (geometry == SamplerGeometry::axisymmetric) return m * m;
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) {
      total *= m;
      if (total > budget) return total;
    }
    return total;
  }

  /// Cell width along the moving axis.
  double cell() const { return 2.0 * half_width / nodes_per_axis; }

  void validate() const {
    if (n < 3) throw Error(ErrorCode::DimensionTooSmall, "sampler needs n >= 3");
    if (!(half_width > 0.0) || nodes_per_axis < 2) {
      throw Error(ErrorCode::InvalidArgument, "sampler needs L > 0 and at least 2 nodes per axis");
    }
    if (node_count() > budget) throw Error(ErrorCode::BudgetExceeded, "sampler exceeds node budget");
  }

  /// Coordinates of node idx (axisymmetric nodes are (x1, ρ, 0, ...)).
  void node(std::size_t idx, std::span<double> x) const {
    const auto m = static_cast<std::size_t>(nodes_per_axis);
    std::fill(x.begin(), x.end(), 0.0);
    if (geometry == SamplerGeometry::axisymmetric) {
      const std::size_t i = idx / m;
      const std::size_t j = idx % m;
      x[0] = -half_width + (static_cast<double>(i) + 0.5) * cell();
      x[1] = (static_cast<double>(j) + 0.5) * (half_width / nodes_per_axis);
      return;
    }
    for (int a = n - 1; a >= 0; --a) {
      x[static_cast<std::size_t>(a)] = -half_width + (static_cast<double>(idx % m) + 0.5) * cell();
      idx /= m;
    }
  }

  double volume(std::span<const double> x) const {
    if (geometry == SamplerGeometry::axisymmetric) {
      const double drho = half_width / nodes_per_axis;
      return unit_sphere_area(n - 1) * std::pow(x[1], n - 2) * drho * cell();
    }
    return std::pow(cell(), n);
  }
};

struct ExceedanceSet {
  double measure = 0.0;
  std::vector<std::size_t> members;
  /// Sampled nodes inside H_λ; zero means the plane carries no information.
  std::size_t halfspace_nodes = 0;
  bool empty() const { return members.empty(); }
};

namespace detail {

inline void require_axis_plane(const CartesianSampler& sampler, const PlaneParam& plane) {
  if (plane.direction.size() != static_cast<std::size_t>(sampler.n)) {
    throw Error(ErrorCode::InvalidArgument, "plane dimension does not match sampler");
  }
  if (sampler.geometry == SamplerGeometry::axisymmetric && !plane.is_e1()) {
    throw Error(ErrorCode::InvalidArgument, "axisymmetric sampler needs the plane normal e1");
  }
}

inline bool exceeds(double reflected, double original, double tie) {
  return reflected - original > tie * std::max(std::abs(reflected), std::abs(original));
}

}  // namespace detail

/// Nodes of H_λ where field(x_λ) > field(x), with their midpoint-rule measure.
template <class Field>
ExceedanceSet exceedance_sets(const Field& field, const PlaneParam& plane, const CartesianSampler& sampler,
                              bool keep_members = true) {
  sampler.validate();
  detail::require_axis_plane(sampler, plane);
  ExceedanceSet set;
  Point x(static_cast<std::size_t>(sampler.n));
  Point xr(x.size());
  const std::size_t total = sampler.node_count();
  for (std::size_t idx = 0; idx < total; ++idx) {
    sampler.node(idx, x);
    if (!plane.in_halfspace(x)) continue;
    ++set.halfspace_nodes;
    reflect_into(x, plane, xr);
    if (detail::exceeds(field(std::span<const double>(xr)), field(std::span<const double>(x)),
                        sampler.tie_tolerance)) {
      set.measure += sampler.volume(x);
      if (keep_members) set.members.push_back(idx);
      else set.members.assign(1, idx);
    }
  }
  return set;
}

struct ReflectionMargins {
  /// |u_λ - u|_{p,B^u}
  double u_lhs = 0.0;
  /// |u_λ|^{α-1}|v_λ|^β|u_λ - u| on B^u plus |u_λ|^α|v_λ|^{β-1}|v_λ - v| on B^v (constant omitted).
  double u_bracket = 0.0;
  /// |v_λ - v|_{p,B^v}
  double v_lhs = 0.0;
  /// |v_λ|^{α-1}|u_λ|^β|v_λ - v| on B^v plus |v_λ|^α|u_λ|^{β-1}|u_λ - u| on B^u.
  double v_bracket = 0.0;
  /// Largest of the four smallness factors |u_λ|, |v_λ| on B^u, B^v.
  double smallness = 0.0;
};

struct ReflectionReport {
  double lambda = 0.0;
  double Bu_measure = 0.0;
  double Bv_measure = 0.0;
  std::size_t Bu_count = 0;
  std::size_t Bv_count = 0;
  /// Keys: "u_lambda-u@Bu", "v_lambda-v@Bv", "u_lambda@Bu", "v_lambda@Bu",
  /// "u_lambda@Bv", "v_lambda@Bv", "u@box", "v@box".
  std::map<std::string, LpNorm> norms;
  ReflectionMargins margins;
};

/// Every L^p(B_λ) quantity appearing in the reflection estimates, p = 2n/(n-2),
/// by midpoint quadrature over the sampled sets. Empty sets give exact zeros.
template <class FieldU, class FieldV>
ReflectionReport reflection_inequality_check(const FieldU& u_field, const FieldV& v_field, const PlaneParam& plane,
                                             const ExponentConfig& config, const CartesianSampler& sampler) {
  sampler.validate();
  detail::require_axis_plane(sampler, plane);
  const double p = config.sobolev_exponent();
  enum Slot { du_bu, dv_bv, ul_bu, vl_bu, ul_bv, vl_bv, u_box, v_box, slot_count };
  std::array<double, slot_count> sums{};

  ReflectionReport report;
  report.lambda = plane.lambda;
  Point x(static_cast<std::size_t>(sampler.n));
  Point xr(x.size());
  const std::size_t total = sampler.node_count();
  for (std::size_t idx = 0; idx < total; ++idx) {
    sampler.node(idx, x);
    const double vol = sampler.volume(x);
    const double u = u_field(std::span<const double>(x));
    const double v = v_field(std::span<const double>(x));
    sums[u_box] += std::pow(std::abs(u), p) * vol;
    sums[v_box] += std::pow(std::abs(v), p) * vol;
    if (!plane.in_halfspace(x)) continue;
    reflect_into(x, plane, xr);
    const double ul = u_field(std::span<const double>(xr));
    const double vl = v_field(std::span<const double>(xr));
    if (detail::exceeds(ul, u, sampler.tie_tolerance)) {
      ++report.Bu_count;
      report.Bu_measure += vol;
      sums[du_bu] += std::pow(ul - u, p) * vol;
      sums[ul_bu] += std::pow(std::abs(ul), p) * vol;
      sums[vl_bu] += std::pow(std::abs(vl), p) * vol;
    }
    if (detail::exceeds(vl, v, sampler.tie_tolerance)) {
      ++report.Bv_count;
      report.Bv_measure += vol;
      sums[dv_bv] += std::pow(vl - v, p) * vol;
      sums[ul_bv] += std::pow(std::abs(ul), p) * vol;
      sums[vl_bv] += std::pow(std::abs(vl), p) * vol;
    }
  }

  auto norm = [&](Slot s, const char* tag) { return LpNorm{p, std::pow(sums[s], 1.0 / p), tag, 0.0}; };
  const char* names[slot_count] = {"u_lambda-u@Bu", "v_lambda-v@Bv", "u_lambda@Bu", "v_lambda@Bu",
                                   "u_lambda@Bv",   "v_lambda@Bv",   "u@box",       "v@box"};
  const char* tags[slot_count] = {"Bu", "Bv", "Bu", "Bu", "Bv", "Bv", "box", "box"};
  std::array<double, slot_count> val{};
  for (int s = 0; s < slot_count; ++s) {
    report.norms.emplace(names[s], norm(static_cast<Slot>(s), tags[s]));
    val[s] = report.norms.at(names[s]).value;
  }
  const double a = config.alpha;
  const double b = config.beta;
  ReflectionMargins& m = report.margins;
  m.u_lhs = val[du_bu];
  m.v_lhs = val[dv_bv];
  m.u_bracket = std::pow(val[ul_bu], a - 1) * std::pow(val[vl_bu], b) * val[du_bu] +
                std::pow(val[ul_bv], a) * std::pow(val[vl_bv], b - 1) * val[dv_bv];
  m.v_bracket = std::pow(val[vl_bv], a - 1) * std::pow(val[ul_bv], b) * val[dv_bv] +
                std::pow(val[vl_bu], a) * std::pow(val[ul_bu], b - 1) * val[du_bu];
  m.smallness = std::max({val[ul_bu], val[vl_bu], val[ul_bv], val[vl_bv]});
  return report;
}

/// Evenly spaced plane positions, both ends included.
inline std::vector<double> lambda_sweep(double lo, double hi, std::size_t count) {
  if (count < 2 || !(hi > lo)) throw Error(ErrorCode::InvalidArgument, "sweep needs lo < hi and >= 2 values");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return out;
}

inline std::vector<double> default_lambda_sweep(const CartesianSampler& sampler) {
  return lambda_sweep(-2.0 * sampler.half_width, 2.0 * sampler.half_width, 64);
}

struct ScanEntry {
  double lambda = 0.0;
  double Bu_measure = 0.0;
  double Bv_measure = 0.0;
  std::size_t Bu_count = 0;
  std::size_t Bv_count = 0;
  std::size_t halfspace_nodes = 0;
};

struct PlaneScan {
  /// Smallest swept λ with B^u empty at every swept λ' >= λ.
  double lambda0 = 0.0;
  /// The field vanished on every sampled node.
  bool degenerate = false;
  double cell = 0.0;
  std::vector<ScanEntry> entries;
};

/// Sweeps the plane position and reports λ0. Planes with no sampled node in
/// H_λ carry no information and are ignored by the monotonicity check.
template <class FieldU, class FieldV>
PlaneScan critical_plane_scan(const FieldU& u_field, const FieldV& v_field, const CartesianSampler& sampler,
                              std::vector<double> lambdas, unsigned threads = 1) {
  sampler.validate();
  if (lambdas.empty()) throw Error(ErrorCode::InvalidArgument, "empty lambda sweep");
  std::sort(lambdas.begin(), lambdas.end());

  PlaneScan scan;
  scan.cell = sampler.cell();
  scan.entries = parallel_map(
      lambdas.size(),
      [&](std::size_t i) {
        const auto plane = PlaneParam::along_e1(lambdas[i], sampler.n);
        const auto bu = exceedance_sets(u_field, plane, sampler, false);
        const auto bv = exceedance_sets(v_field, plane, sampler, false);
        return ScanEntry{lambdas[i], bu.measure, bv.measure, bu.members.size(), bv.members.size(),
                         bu.halfspace_nodes};
      },
      threads);

  bool any_nonzero = false;
  Point x(static_cast<std::size_t>(sampler.n));
  for (std::size_t idx = 0; idx < sampler.node_count() && !any_nonzero; ++idx) {
    sampler.node(idx, x);
    any_nonzero = u_field(std::span<const double>(x)) != 0.0;
  }
  scan.degenerate = !any_nonzero;

  bool seen_empty = false;
  for (const auto& e : scan.entries) {
    if (e.halfspace_nodes == 0) continue;
    if (e.Bu_count == 0) {
      seen_empty = true;
    } else if (seen_empty) {
      throw Error(ErrorCode::ScanInconclusive,
                  "B^u nonempty at lambda = " + std::to_string(e.lambda) + " above an empty plane");
    }
  }
  std::size_t k = scan.entries.size();
  while (k > 0 && scan.entries[k - 1].Bu_count == 0) --k;
  scan.lambda0 = k < scan.entries.size() ? scan.entries[k].lambda : scan.entries.back().lambda;
  return scan;
}

struct GreensOptions {
  int gauss_order = 10;
  int grading_levels = 12;
  std::size_t budget = 5'000'000;
};

struct GreensIdentity {
  /// u(x_λ) - u(x) from the closed form.
  double lhs = 0.0;
  /// ∫_{H_λ} (u_λ^α v_λ^β - u^α v^β)(y) G_λ(x, y) dy with the normalized kernel
  /// G_λ = (|x - y|^{2-n} - |x_λ - y|^{2-n}) / ((n-2) ω_{n-1}).
  double rhs = 0.0;
  std::size_t nodes = 0;
};

namespace detail {

struct Panel {
  double a;
  double b;
};

// Panels on [0, far) refined geometrically toward every point in `focus`.
inline std::vector<Panel> graded_panels(std::vector<double> breaks, const std::vector<double>& focus, double scale,
                                        int levels, double far) {
  for (double f : focus) {
    if (f < 0.0) continue;
    const double d = std::max(scale, f) * 0.5;
    for (int j = 0; j <= levels; ++j) {
      const double h = d * std::ldexp(1.0, -j);
      breaks.push_back(f + h);
      if (f - h > 0.0) breaks.push_back(f - h);
    }
    breaks.push_back(f);
  }
  const double start = *std::max_element(breaks.begin(), breaks.end());
  for (double b = std::max(start, scale) * 2.0; b < far; b *= 2.0) breaks.push_back(b);
  breaks.push_back(far);
  breaks.push_back(0.0);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double p, double q) { return std::abs(p - q) <= 1e-14 * std::max(1.0, std::abs(q)); }),
               breaks.end());
  std::vector<Panel> panels;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (breaks[i] >= 0.0 && breaks[i + 1] <= far) panels.push_back({breaks[i], breaks[i + 1]});
  }
  return panels;
}

inline void expand(const std::vector<Panel>& panels, const GaussRule& rule, std::vector<double>& nodes,
                   std::vector<double>& weights) {
  for (const auto& p : panels) {
    const double half = 0.5 * (p.b - p.a);
    const double mid = 0.5 * (p.b + p.a);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      nodes.push_back(mid + half * rule.nodes[k]);
      weights.push_back(half * rule.weights[k]);
    }
  }
}

}  // namespace detail

/// Both sides of
///   u_λ(x) - u(x) = ∫_{H_λ} (u_λ^α v_λ^β - u^α v^β)(y) G_λ(x, y) dy
/// for a bubble pair centered on the x1 axis and the plane x1 = λ. The
/// half-space integral is reduced to (y1, ρ, ψ) coordinates about the axis
/// (ψ only when x is off the axis) and evaluated with composite Gauss
/// panels graded toward x. The domain is truncated at 1e5 times the bubble
/// scale, where the integrand has decayed like |y|^{-(2n+1)}.
inline GreensIdentity greens_reflection_identity(const BubbleParams& u, const BubbleParams& v,
                                                 const PlaneParam& plane, std::span<const double> x,
                                                 const ExponentConfig& config, const GreensOptions& options = {}) {
  const int n = config.n;
  if (u.n != n || v.n != n || x.size() != static_cast<std::size_t>(n)) {
    throw Error(ErrorCode::InvalidArgument, "dimension mismatch");
  }
  if (!plane.is_e1()) throw Error(ErrorCode::InvalidArgument, "identity is evaluated for planes normal to e1");
  for (const auto* b : {&u, &v}) {
    for (int i = 1; i < n; ++i) {
      if (b->center[static_cast<std::size_t>(i)] != 0.0) {
        throw Error(ErrorCode::InvalidArgument, "bubble centers must lie on the x1 axis");
      }
    }
  }
  if (!(x[0] < plane.lambda)) throw Error(ErrorCode::InvalidArgument, "x must lie in H_lambda");

  const double lambda = plane.lambda;
  GreensIdentity out;
  {
    const Point xr = reflect(x, plane);
    out.lhs = eval_bubble(u, xr) - eval_bubble(u, x);
  }

  double rho_x2 = 0.0;
  for (int i = 1; i < n; ++i) rho_x2 += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
  const double rho_x = std::sqrt(rho_x2);
  const double x1 = x[0];
  const double scale = std::min(u.t, v.t);
  const double far = 1e5 * std::max({u.t, v.t, std::abs(lambda - x1), 1.0});

  // s = λ - y1 > 0.
  const double s_x = lambda - x1;
  std::vector<double> s_focus{s_x};
  for (const auto* b : {&u, &v}) {
    const double c1 = b->center[0];
    s_focus.push_back(lambda - c1);
    s_focus.push_back(c1 - lambda);
  }
  const auto s_panels = detail::graded_panels({}, s_focus, scale, options.grading_levels, far);
  const auto r_panels = detail::graded_panels({}, {rho_x}, scale, options.grading_levels, far);

  const GaussRule rule = gauss_legendre(options.gauss_order);
  std::vector<double> sn, sw, rn, rw;
  detail::expand(s_panels, rule, sn, sw);
  detail::expand(r_panels, rule, rn, rw);

  // Azimuth about the axis, measured from the direction of x. The spherical
  // average of |x - y|^{2-n} over S^{n-2} is closed form for n = 3, 4.
  std::vector<double> psi_nodes;
  std::vector<double> psi_weights;
  const bool closed_angle = rho_x == 0.0 || n == 3 || n == 4;
  if (!closed_angle) {
    std::vector<detail::Panel> psi_panels;
    double a = 0.0;
    for (int j = options.grading_levels; j >= 1; --j) {
      const double b = std::numbers::pi * std::ldexp(1.0, -j);
      psi_panels.push_back({a, b});
      a = b;
    }
    psi_panels.push_back({a, std::numbers::pi});
    detail::expand(psi_panels, rule, psi_nodes, psi_weights);
    for (std::size_t k = 0; k < psi_nodes.size(); ++k) {
      psi_weights[k] *= unit_sphere_area(n - 2) * std::pow(std::sin(psi_nodes[k]), n - 3);
    }
  }
  std::vector<double> cos_psi(psi_nodes.size());
  for (std::size_t k = 0; k < psi_nodes.size(); ++k) cos_psi[k] = std::cos(psi_nodes[k]);

  const std::size_t total = sn.size() * rn.size() * std::max<std::size_t>(psi_nodes.size(), 1);
  if (total > options.budget) {
    throw Error(ErrorCode::QuadratureBudgetExceeded,
                "identity quadrature needs " + std::to_string(total) + " nodes");
  }
  out.nodes = total;

  const double sphere = unit_sphere_area(n - 1);
  // ∫_{S^{n-2}} (d² + |ρ_x e - ρ ω|²)^{(2-n)/2} dσ(ω)
  auto shell = [&](double d2, double rho) {
    const double A = d2 + rho_x2 + rho * rho;
    const double B = 2.0 * rho_x * rho;
    if (B == 0.0) return sphere * std::pow(A, 0.5 * (2 - n));
    if (n == 3) {
      const double k = std::sqrt(2.0 * B / (A + B));
      return 4.0 * std::comp_ellint_1(k) / std::sqrt(A + B);
    }
    if (n == 4) return 2.0 * std::numbers::pi / B * std::log1p(2.0 * B / (A - B));
    double acc = 0.0;
    for (std::size_t k = 0; k < psi_nodes.size(); ++k) {
      acc += psi_weights[k] * std::pow(A - B * cos_psi[k], 0.5 * (2 - n));
    }
    return acc;
  };
  auto source = [&](double y1, double rho) {
    const double r_u = std::hypot(y1 - u.center[0], rho);
    const double r_v = std::hypot(y1 - v.center[0], rho);
    return std::pow(eval_bubble_radial(u, r_u), config.alpha) * std::pow(eval_bubble_radial(v, r_v), config.beta);
  };

  const double xr1 = 2.0 * lambda - x1;
  double sum = 0.0;
  for (std::size_t i = 0; i < sn.size(); ++i) {
    const double y1 = lambda - sn[i];
    const double dx = x1 - y1;
    const double dxr = xr1 - y1;
    for (std::size_t j = 0; j < rn.size(); ++j) {
      const double rho = rn[j];
      const double diff = source(2.0 * lambda - y1, rho) - source(y1, rho);
      if (diff == 0.0) continue;
      const double kernel = shell(dx * dx, rho) - shell(dxr * dxr, rho);
      sum += sw[i] * rw[j] * std::pow(rho, n - 2) * diff * kernel;
    }
  }
  out.rhs = sum / ((n - 2) * unit_sphere_area(n));
  return out;
}

/// |x - y|^{2-n} - |x_λ - y|^{2-n}, positive for x, y in H_λ.
inline double reflected_kernel_difference(std::span<const double> x, std::span<const double> y,
                                          const PlaneParam& plane) {
  const Point xr = reflect(x, plane);
  const int n = static_cast<int>(x.size());
  double d1 = 0.0;
  double d2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    d1 += (x[i] - y[i]) * (x[i] - y[i]);
    d2 += (xr[i] - y[i]) * (xr[i] - y[i]);
  }
  return std::pow(d1, 0.5 * (2 - n)) - std::pow(d2, 0.5 * (2 - n));
}

}  // namespace bv
