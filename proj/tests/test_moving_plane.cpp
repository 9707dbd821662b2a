#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "bv/bubble.hpp"
#include "bv/moving_plane.hpp"

using namespace bv;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const ExponentConfig& cfg323() {
  static const auto c = validate_config(3, 2.0, 3.0);
  return c;
}

CartesianSampler axisym(int m = 64, double L = 10.0) {
  CartesianSampler s;
  s.n = 3;
  s.nodes_per_axis = m;
  s.half_width = L;
  s.geometry = SamplerGeometry::axisymmetric;
  return s;
}

CartesianSampler full(int m = 32, double L = 10.0) {
  auto s = axisym(m, L);
  s.geometry = SamplerGeometry::full;
  return s;
}

auto field_of(const BubbleParams& b) {
  return [b](std::span<const double> x) { return eval_bubble(b, x); };
}

// Brute-force midpoint rule for the right-hand side of the reflection identity
// at an on-axis point in n = 3, using the maps s = tan(a), ρ = tan(b).
double brute_force_rhs(const BubbleParams& phi, double lambda, double x1, int cells) {
  auto source = [&](double y1, double rho) {
    return std::pow(eval_bubble_radial(phi, std::hypot(y1 - phi.center[0], rho)), 5.0);
  };
  const double xr1 = 2.0 * lambda - x1;
  const double h = 0.5 * std::numbers::pi / cells;
  double sum = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double a = (i + 0.5) * h;
    const double s = std::tan(a);
    const double ds = 1.0 / (std::cos(a) * std::cos(a));
    const double y1 = lambda - s;
    for (int j = 0; j < cells; ++j) {
      const double b = (j + 0.5) * h;
      const double rho = std::tan(b);
      const double drho = 1.0 / (std::cos(b) * std::cos(b));
      const double k = 1.0 / std::hypot(x1 - y1, rho) - 1.0 / std::hypot(xr1 - y1, rho);
      sum += (source(2.0 * lambda - y1, rho) - source(y1, rho)) * k * 2.0 * std::numbers::pi * rho * ds * drho;
    }
  }
  return sum * h * h / (4.0 * std::numbers::pi);
}

}  // namespace

TEST_CASE("reflect") {
  const std::vector<double> origin{0, 0, 0};
  const auto r = reflect(origin, PlaneParam::along_e1(1.0, 3));
  CHECK(r == std::vector<double>{2, 0, 0});
  const std::vector<double> on{1.0, 3.0, -2.0};
  CHECK(reflect(on, PlaneParam::along_e1(1.0, 3)) == on);
  CHECK_THROWS_AS(reflect(origin, PlaneParam::along_e1(1.0, 4)), Error);
  CHECK_THROWS_AS(PlaneParam::make(0.0, {0.0, 0.0, 0.0}), Error);
}

TEST_CASE("reflect is an involution") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int k = 0; k < 500; ++k) {
    std::vector<double> x(4), d(4);
    for (auto& v : x) v = u(rng);
    for (auto& v : d) v = u(rng);
    const auto plane = PlaneParam::make(u(rng), d);
    double norm = 0.0;
    for (double c : plane.direction) norm += c * c;
    REQUIRE_THAT(norm, WithinAbs(1.0, 1e-14));
    const auto back = reflect(reflect(x, plane), plane);
    for (std::size_t i = 0; i < x.size(); ++i) REQUIRE(std::abs(back[i] - x[i]) <= 64.0 * eps * 10.0);
    // Distances to the plane flip sign.
    REQUIRE_THAT(plane.offset(reflect(x, plane)), WithinAbs(-plane.offset(x), 1e-12));
  }
}

TEST_CASE("exceedance sets of single bubbles") {
  const auto centred = make_bubble(cfg323(), {0, 0, 0}, 1.0);
  const auto shifted = make_bubble(cfg323(), {1, 0, 0}, 1.0);
  for (const auto& s : {axisym(), full()}) {
    CHECK(exceedance_sets(field_of(centred), PlaneParam::along_e1(0.5, 3), s).empty());
    const auto b = exceedance_sets(field_of(shifted), PlaneParam::along_e1(0.0, 3), s);
    CHECK_FALSE(b.empty());
    CHECK(b.members.size() == b.halfspace_nodes);
    CHECK(exceedance_sets(field_of(shifted), PlaneParam::along_e1(31.0, 3), s).empty());
  }
}

TEST_CASE("exceedance measures in both geometries") {
  // For the bubble at (1,0,0) and λ = 0, B^u is the whole of H_0 in the box.
  const auto shifted = make_bubble(cfg323(), {1, 0, 0}, 1.0);
  const auto plane = PlaneParam::along_e1(0.0, 3);
  CHECK_THAT(exceedance_sets(field_of(shifted), plane, full()).measure, WithinRel(4000.0, 1e-12));
  CHECK_THAT(exceedance_sets(field_of(shifted), plane, axisym(128)).measure,
             WithinRel(std::numbers::pi * 1000.0, 1e-3));
}

TEST_CASE("symmetry detection for planes through the center") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const auto s = full(32);
  for (int k = 0; k < 5; ++k) {
    const std::vector<double> c{u(rng), u(rng), u(rng)};
    const auto b = make_bubble(cfg323(), c, 0.5 + std::abs(u(rng)));
    std::vector<double> d{u(rng), u(rng), u(rng)};
    auto plane = PlaneParam::make(0.0, d);
    plane.lambda = plane.direction[0] * c[0] + plane.direction[1] * c[1] + plane.direction[2] * c[2];
    CHECK(exceedance_sets(field_of(b), plane, s).empty());
  }
}

TEST_CASE("reflection report") {
  const auto centred = make_bubble(cfg323(), {0, 0, 0}, 1.0);
  const auto rep = reflection_inequality_check(field_of(centred), field_of(centred), PlaneParam::along_e1(1.0, 3),
                                               cfg323(), axisym());
  CHECK(rep.Bu_count == 0);
  CHECK(rep.Bv_count == 0);
  CHECK(rep.Bu_measure == 0.0);
  for (const auto& [name, norm] : rep.norms) {
    CHECK(norm.p == 6.0);
    if (norm.domain_tag != "box") CHECK(norm.value == 0.0);
  }
  CHECK(rep.margins.u_lhs == 0.0);
  CHECK(rep.margins.u_bracket == 0.0);
  CHECK(rep.norms.at("u@box").value > 0.0);
}

TEST_CASE("smallness factors far out along the axis") {
  const auto shifted = make_bubble(cfg323(), {1, 0, 0}, 1.0);
  for (double lambda : {5.0, 7.0}) {
    const auto rep = reflection_inequality_check(field_of(shifted), field_of(shifted),
                                                 PlaneParam::along_e1(lambda, 3), cfg323(), axisym());
    const double global = rep.norms.at("u@box").value;
    CHECK(rep.norms.at("u_lambda@Bu").value < 0.1 * global);
    CHECK(rep.norms.at("v_lambda@Bv").value < 0.1 * global);
    CHECK(rep.margins.smallness < 0.1 * global);
  }
  // At λ below the center the sets are large and the factors are not small.
  const auto rep = reflection_inequality_check(field_of(shifted), field_of(shifted), PlaneParam::along_e1(0.0, 3),
                                               cfg323(), axisym());
  CHECK(rep.Bu_count > 0);
  CHECK(rep.margins.u_lhs > 0.0);
  CHECK(rep.margins.u_bracket > 0.0);
}

TEST_CASE("zero fields give an all-zero report") {
  auto zero = [](std::span<const double>) { return 0.0; };
  const auto rep = reflection_inequality_check(zero, zero, PlaneParam::along_e1(0.3, 3), cfg323(), axisym());
  CHECK(rep.Bu_measure == 0.0);
  CHECK(rep.Bv_measure == 0.0);
  for (const auto& [name, norm] : rep.norms) CHECK(norm.value == 0.0);
}

TEST_CASE("critical plane scan") {
  const auto s = axisym();
  const auto lambdas = lambda_sweep(-5.0, 5.0, 65);
  for (double c1 : {0.0, 1.0, -2.0}) {
    const auto f = field_of(make_bubble(cfg323(), {c1, 0, 0}, 1.0));
    const auto scan = critical_plane_scan(f, f, s, lambdas);
    CHECK(std::abs(scan.lambda0 - c1) <= scan.cell);
    CHECK_FALSE(scan.degenerate);
    for (const auto& e : scan.entries) {
      if (e.lambda > scan.lambda0) CHECK(e.Bu_count == 0);
    }
  }
}

TEST_CASE("scan equivariance under translation along the axis") {
  const auto s = axisym();
  const auto lambdas = lambda_sweep(-6.0, 6.0, 97);
  const auto f0 = field_of(make_bubble(cfg323(), {0.0, 0, 0}, 1.0));
  const double shift = 4.0 * s.cell();
  const auto f1 = field_of(make_bubble(cfg323(), {shift, 0, 0}, 1.0));
  const auto a = critical_plane_scan(f0, f0, s, lambdas);
  const auto b = critical_plane_scan(f1, f1, s, lambdas);
  CHECK(std::abs((b.lambda0 - a.lambda0) - shift) <= s.cell());
}

TEST_CASE("scan of a zero field is degenerate") {
  auto zero = [](std::span<const double>) { return 0.0; };
  const auto scan = critical_plane_scan(zero, zero, axisym(32), {3.0, -1.0, 2.0});
  CHECK(scan.degenerate);
  CHECK(scan.lambda0 == -1.0);
}

TEST_CASE("non-monotone emptiness is inconclusive") {
  // 2 + cos(x1) is symmetric about x1 = 0 but not about x1 = 0.5.
  auto wave = [](std::span<const double> x) { return 2.0 + std::cos(x[0]); };
  try {
    critical_plane_scan(wave, wave, axisym(32), {0.0, 0.5});
    FAIL("expected ScanInconclusive");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ScanInconclusive);
  }
}

TEST_CASE("scan results do not depend on the thread count") {
  const auto f = field_of(make_bubble(cfg323(), {1.0, 0, 0}, 1.0));
  const auto lambdas = lambda_sweep(-5.0, 5.0, 33);
  const auto a = critical_plane_scan(f, f, axisym(32), lambdas, 1);
  const auto b = critical_plane_scan(f, f, axisym(32), lambdas, 4);
  REQUIRE(a.entries.size() == b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    CHECK(a.entries[i].Bu_measure == b.entries[i].Bu_measure);
    CHECK(a.entries[i].lambda == b.entries[i].lambda);
  }
  CHECK(a.lambda0 == b.lambda0);
}

TEST_CASE("sampler budget and validation") {
  auto s = full(64);
  s.n = 4;
  s.budget = 1'000'000;
  auto one = [](std::span<const double>) { return 1.0; };
  try {
    exceedance_sets(one, PlaneParam::along_e1(0.0, 4), s);
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BudgetExceeded);
  }
  CHECK_THROWS_AS(exceedance_sets(one, PlaneParam::make(0.0, {1.0, 1.0, 0.0}), axisym()), Error);
  CHECK(default_lambda_sweep(axisym()).size() == 64);
  CHECK(default_lambda_sweep(axisym()).front() == -20.0);
  CHECK(default_lambda_sweep(axisym()).back() == 20.0);
}

TEST_CASE("Green reflection identity: centered bubble is exactly symmetric") {
  const auto b = make_bubble(cfg323(), {0, 0, 0}, 1.0);
  const std::vector<double> x{-1.5, 0.3, 0.0};
  const auto g = greens_reflection_identity(b, b, PlaneParam::along_e1(0.0, 3), x, cfg323());
  CHECK(g.lhs == 0.0);
  CHECK(g.rhs == 0.0);
}

TEST_CASE("Green reflection identity against brute force") {
  const auto b = make_bubble(cfg323(), {1, 0, 0}, 1.0);
  const std::vector<double> x{-1.0, 0.0, 0.0};
  const auto g = greens_reflection_identity(b, b, PlaneParam::along_e1(0.0, 3), x, cfg323());
  const double brute = brute_force_rhs(b, 0.0, -1.0, 1500);
  CHECK_THAT(g.rhs, WithinRel(g.lhs, 0.02));
  CHECK_THAT(brute, WithinRel(g.lhs, 0.02));
  CHECK_THAT(g.rhs, WithinRel(brute, 0.01));
  CHECK(g.nodes >= 10'000);
  CHECK(g.nodes <= 1'000'000);
}

TEST_CASE("Green reflection identity off the axis and in higher dimension") {
  const struct {
    int n;
    double a, b;
  } cases[] = {{3, 2.0, 3.0}, {4, 1.0, 2.0}, {5, 1.0, 4.0 / 3.0}};
  for (const auto& k : cases) {
    const auto cfg = validate_config(k.n, k.a, k.b);
    // The identity needs a solution pair, so u = v is one off-center bubble.
    std::vector<double> c(static_cast<std::size_t>(k.n), 0.0), x = c;
    c[0] = 1.0;
    x[0] = -0.7;
    x[1] = 0.4;
    const auto u = make_bubble(cfg, c, 1.3);
    const auto& v = u;
    GreensOptions opt;
    if (k.n == 5) {
      opt.gauss_order = 8;
      opt.grading_levels = 8;
      opt.budget = 50'000'000;
    }
    const auto g = greens_reflection_identity(u, v, PlaneParam::along_e1(0.2, k.n), x, cfg, opt);
    CHECK_THAT(g.rhs, WithinRel(g.lhs, 1e-4));
  }
}

TEST_CASE("Green reflection identity preconditions") {
  const auto b = make_bubble(cfg323(), {1, 0, 0}, 1.0);
  const std::vector<double> outside{0.5, 0.0, 0.0};
  CHECK_THROWS_AS(greens_reflection_identity(b, b, PlaneParam::along_e1(0.0, 3), outside, cfg323()), Error);
  const auto off = make_bubble(cfg323(), {1, 1, 0}, 1.0);
  const std::vector<double> x{-1.0, 0.0, 0.0};
  CHECK_THROWS_AS(greens_reflection_identity(off, off, PlaneParam::along_e1(0.0, 3), x, cfg323()), Error);
  GreensOptions tiny;
  tiny.budget = 1000;
  try {
    greens_reflection_identity(b, b, PlaneParam::along_e1(0.0, 3), x, cfg323(), tiny);
    FAIL("expected QuadratureBudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::QuadratureBudgetExceeded);
  }
}

TEST_CASE("reflected kernel difference is positive on the half space") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int n : {3, 4, 5}) {
    for (int k = 0; k < 200; ++k) {
      std::vector<double> d(static_cast<std::size_t>(n)), x(d.size()), y(d.size());
      for (auto& v : d) v = u(rng);
      const auto plane = PlaneParam::make(u(rng), d);
      for (auto* p : {&x, &y}) {
        for (auto& v : *p) v = u(rng);
        const double off = plane.offset(*p);
        if (off >= 0.0) {
          for (std::size_t i = 0; i < p->size(); ++i) (*p)[i] -= (2.0 * off + 0.1) * plane.direction[i];
        }
        REQUIRE(plane.in_halfspace(*p));
      }
      REQUIRE(reflected_kernel_difference(x, y, plane) > 0.0);
    }
  }
}
