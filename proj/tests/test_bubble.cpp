#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "bv/bubble.hpp"

#include "support.hpp"

using namespace bv;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// -(φ'' + (n-1)φ'/r) - φ^{(n+2)/(n-2)} from hand-differentiated closed forms.
double analytic_residual(int n, double c, double t, double r) {
  const double q = t * t + r * r;
  const double k = 0.5 * (n - 2);
  const double phi = c * std::pow(t / q, k);
  const double d1 = -2.0 * k * r * phi / q;
  const double d2 = -2.0 * k * phi / q + 4.0 * k * (k + 1.0) * r * r * phi / (q * q);
  return -(d2 + (n - 1) * d1 / r) - std::pow(phi, (n + 2.0) / (n - 2.0));
}

}  // namespace

TEST_CASE("amplitude constant") {
  CHECK_THAT(make_bubble(3, {}, 1.0).c, WithinRel(std::pow(3.0, 0.25), 1e-15));
  CHECK_THAT(make_bubble(3, {}, 1.0).c, WithinRel(1.316074, 1e-6));
  CHECK_THAT(make_bubble(4, {}, 2.0).c, WithinRel(std::sqrt(8.0), 1e-15));
  CHECK_THAT(make_bubble(4, {}, 2.0).c, WithinRel(2.828427, 1e-6));
}

TEST_CASE("the constant solves the equation exactly in closed form") {
  for (int n : {3, 4, 5, 6, 7}) {
    const double c = bubble_constant(n);
    for (double t : {0.3, 1.0, 4.0}) {
      for (double r : {0.01, 0.5, 1.0, 3.0, 20.0}) {
        const double scale = std::pow(c * std::pow(t / (t * t + r * r), 0.5 * (n - 2)), (n + 2.0) / (n - 2.0));
        CHECK(std::abs(analytic_residual(n, c, t, r)) <= 1e-12 * std::max(scale, 1.0));
      }
      CHECK(std::abs(analytic_residual(n, 2.0 * c, t, 0.5)) > 1e-3);
    }
  }
}

TEST_CASE("make_bubble rejects bad input") {
  auto code = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code([] { make_bubble(3, {}, 0.0); }) == ErrorCode::NonpositiveScale);
  CHECK(code([] { make_bubble(3, {}, -1.0); }) == ErrorCode::NonpositiveScale);
  CHECK(code([] { make_bubble(2, {}, 1.0); }) == ErrorCode::DimensionTooSmall);
  CHECK_THROWS_AS(make_bubble(3, {1.0, 2.0}, 1.0), Error);
}

TEST_CASE("pointwise values") {
  const auto b = make_bubble(3, {}, 1.0);
  const std::vector<double> origin{0, 0, 0};
  const std::vector<double> unit{0, 1, 0};
  CHECK_THAT(eval_bubble(b, origin), WithinRel(std::pow(3.0, 0.25), 1e-15));
  CHECK_THAT(eval_bubble(b, unit), WithinRel(std::pow(3.0, 0.25) * std::sqrt(0.5), 1e-15));
  CHECK(b.peak() == eval_bubble(b, origin));
}

TEST_CASE("radially decreasing and decaying") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> rad(0.0, 100.0);
  const auto b = make_bubble(5, {}, 0.7);
  for (int k = 0; k < 500; ++k) {
    double r1 = rad(rng), r2 = rad(rng);
    if (r1 > r2) std::swap(r1, r2);
    if (r1 == r2) continue;
    CHECK(eval_bubble_radial(b, r1) > eval_bubble_radial(b, r2));
    CHECK(eval_bubble_radial(b, r2) > 0.0);
  }
  CHECK(eval_bubble_radial(b, 1e8) < 1e-20);
}

TEST_CASE("scaling family closure") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> s_dist(0.1, 10.0);
  for (int n : {3, 4, 5}) {
    for (int k = 0; k < 100; ++k) {
      std::vector<double> x0(static_cast<std::size_t>(n)), x(x0.size()), y(x0.size());
      for (auto& v : x0) v = u(rng);
      for (auto& v : x) v = u(rng);
      const double t = s_dist(rng) / 3.0;
      const double s = s_dist(rng);
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = s * x[i] + (1.0 - s) * x0[i];
      const double lhs = eval_bubble(make_bubble(n, x0, t), x);
      const double rhs = std::pow(s, 0.5 * (n - 2)) * eval_bubble(make_bubble(n, x0, s * t), y);
      CHECK_THAT(rhs, WithinRel(lhs, 1e-12));
    }
  }
}

TEST_CASE("cancellation-free difference") {
  const double t = 1.3;
  const auto b = make_bubble(4, {}, t);
  // φ(rb) - φ(ra) = ∫ φ' with φ = c t/(t² + r²) in n = 4.
  const double c = 2.0 * std::sqrt(2.0);
  const auto dphi = [&](double r) { return -2.0 * c * t * r / ((t * t + r * r) * (t * t + r * r)); };
  for (double ra : {1e-6, 0.1, 1.0, 10.0}) {
    for (double f : {1.001, 1.5, 3.0}) {
      const double rb = ra * f;
      const double scale = std::abs(dphi(rb)) * (rb - ra);
      CHECK_THAT(bubble_difference(b, ra, rb), WithinRel(oracle::integrate(dphi, ra, rb, 1e-15 * scale), 1e-11));
    }
  }
  CHECK(bubble_difference(b, 0.5, 0.5) == 0.0);
}

TEST_CASE("derivative matches a centred difference") {
  const auto b = make_bubble(3, {}, 1.0);
  for (double r : {0.1, 1.0, 5.0}) {
    const double h = 1e-5 * r;
    const double fd = (eval_bubble_radial(b, r + h) - eval_bubble_radial(b, r - h)) / (2.0 * h);
    CHECK_THAT(bubble_derivative_radial(b, r), WithinRel(fd, 1e-8));
  }
}

TEST_CASE("finite-difference residual on the default grid") {
  const auto grid = RadialGrid::geometric(GridSpec{});
  for (int n : {3, 4, 5}) {
    const auto cfg = validate_config(n, 0.5 * critical_exponent(n), 0.5 * critical_exponent(n));
    for (double t : {0.5, 1.0, 2.0}) {
      CHECK(bubble_residual(make_bubble(cfg, {}, t), cfg, grid) <= 1e-6);
    }
  }
}

TEST_CASE("residual certifies the constant") {
  const auto cfg = validate_config(3, 2.0, 3.0);
  const auto grid = RadialGrid::geometric(1e-6, 1e2, 4000);
  auto b = make_bubble(cfg, {}, 1.0);
  CHECK(bubble_residual(b, cfg, grid) <= 1e-6);
  CHECK(bubble_residual(make_bubble(cfg, {}, 10.0), cfg, grid) <= 1e-6);
  b.c *= 2.0;
  CHECK(bubble_residual(b, cfg, grid) >= 0.1);
}

TEST_CASE("three-point stencil converges at second order") {
  const auto cfg = validate_config(3, 2.0, 3.0);
  const auto b = make_bubble(cfg, {}, 1.0);
  const double coarse = bubble_residual(b, cfg, RadialGrid::geometric(1e-4, 1e2, 1000), Stencil::three_point);
  const double fine = bubble_residual(b, cfg, RadialGrid::geometric(1e-4, 1e2, 1999), Stencil::three_point);
  CHECK(coarse / fine > 3.5);
  CHECK(coarse / fine < 4.5);
}

TEST_CASE("system closure for the three reference configurations") {
  const auto grid = RadialGrid::geometric(GridSpec{});
  const struct {
    int n;
    double a, b;
  } cases[] = {{3, 2.0, 3.0}, {4, 1.0, 2.0}, {5, 1.0, 4.0 / 3.0}};
  for (const auto& k : cases) {
    const auto cfg = validate_config(k.n, k.a, k.b);
    const auto phi = make_bubble(cfg, {}, 1.0);
    const auto [ru, rv] = system_residual(phi, phi, cfg, grid);
    CHECK(ru.max_abs <= 1e-6);
    CHECK(rv.max_abs <= 1e-6);
  }
}

TEST_CASE("unresolved bubble is rejected") {
  const auto cfg = validate_config(3, 2.0, 3.0);
  const auto grid = RadialGrid::geometric(1e-6, 1e2, 200);
  CHECK_THROWS_AS(bubble_residual(make_bubble(cfg, {}, 1.0), cfg, grid), Error);
  try {
    bubble_residual(make_bubble(cfg, {}, 1e3), cfg, RadialGrid::geometric(GridSpec{1e-6, 1e1, 4000}));
    FAIL("expected GridTooCoarse");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GridTooCoarse);
  }
}
