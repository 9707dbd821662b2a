#pragma once

// Finite-difference radial Laplacian  Δu = u'' + (n-1)u'/r.
//
// Derivatives are taken in s = ln r, where Δu = r^{-2}(w_ss + (n-2) w_s) with
// w(s) = u(e^s). On a geometric grid the nodes are uniform in s and the
// stencils reduce to the classical central ones; other grids get local
// Fornberg weights.

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "bv/core.hpp"
#include "bv/quadrature.hpp"

namespace bv {

/// Stencil half-width: three_point is second order, seven_point sixth order.
enum class Stencil { three_point = 1, seven_point = 3 };

inline int half_width(Stencil s) { return static_cast<int>(s); }

/// Δu at node i. `diff(j)` must return u_j - u_i; passing differences instead of
/// raw samples lets callers with a closed form avoid cancellation near r = 0.
template <class Diff>
double radial_laplacian_at(std::span<const double> r, std::size_t i, int n, Stencil stencil,
                           Diff&& diff) {
  const int k = half_width(stencil);
  std::array<double, 7> s{};
  const std::size_t first = i - static_cast<std::size_t>(k);
  const int npts = 2 * k + 1;
  const double si = std::log(r[i]);
  for (int j = 0; j < npts; ++j) s[j] = std::log(r[first + j]) - si;
  const auto w = fornberg_weights(0.0, std::span<const double>(s.data(), npts), 2);
  double ws = 0.0;
  double wss = 0.0;
  for (int j = 0; j < npts; ++j) {
    const std::size_t node = first + static_cast<std::size_t>(j);
    if (node == i) continue;
    const double d = diff(node);
    ws += w[1][j] * d;
    wss += w[2][j] * d;
  }
  return (wss + (n - 2) * ws) / (r[i] * r[i]);
}

/// Laplacian samples on the interior nodes [first, first + values.size()).
struct LaplacianSamples {
  std::size_t first = 0;
  std::vector<double> values;
};

inline LaplacianSamples radial_laplacian(std::span<const double> u, const RadialGrid& grid, int n,
                                         Stencil stencil = Stencil::seven_point) {
  const auto k = static_cast<std::size_t>(half_width(stencil));
  if (u.size() != grid.size()) throw Error(ErrorCode::InvalidArgument, "sample/grid length mismatch");
  if (grid.size() < 2 * k + 1) throw Error(ErrorCode::GridTooCoarse, "grid shorter than stencil");
  LaplacianSamples out;
  out.first = k;
  out.values.reserve(grid.size() - 2 * k);
  for (std::size_t i = k; i + k < grid.size(); ++i) {
    out.values.push_back(
        radial_laplacian_at(grid.nodes(), i, n, stencil, [&](std::size_t j) { return u[j] - u[i]; }));
  }
  return out;
}

}  // namespace bv
