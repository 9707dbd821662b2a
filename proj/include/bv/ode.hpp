#pragma once

// Dormand-Prince 5(4) embedded Runge-Kutta pair with standard step-size
// control. Fixed-size states only; the radial shooting system has four
// components.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>

#include "bv/error.hpp"

namespace bv {

struct OdeTolerances {
  double abs = 1e-10;
  double rel = 1e-10;
};

struct OdeStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t evaluations = 0;
};

template <std::size_t N, class Rhs>
class DormandPrince45 {
 public:
  using State = std::array<double, N>;

  DormandPrince45(Rhs rhs, OdeTolerances tol, std::size_t max_steps = 2'000'000)
      : rhs_(std::move(rhs)), tol_(tol), max_steps_(max_steps) {}

  /// One explicit 5th-order step of size h, no error control.
  State step(double r, const State& y, double h) const {
    State err;
    return trial(r, y, h, err);
  }

  /// Integrate from r to r_end. After each accepted step the observer gets
  /// (r_prev, y_prev, r_new, y_new) and may return false to stop early.
  /// On return r and y hold the last accepted point.
  template <class Observer>
  void advance(double& r, State& y, double r_end, Observer&& observer) {
    if (h_ <= 0.0) h_ = 1e-3 * std::max(std::abs(r), 1e-12);
    while (r < r_end) {
      if (stats_.accepted + stats_.rejected > max_steps_) {
        throw Error(ErrorCode::ToleranceNotMet, "step budget exhausted at r = " + std::to_string(r));
      }
      const bool last = r + h_ >= r_end;
      const double h = last ? r_end - r : h_;
      State err;
      const State next = trial(r, y, h, err);
      const double e = error_norm(y, next, err);
      if (e <= 1.0) {
        const double r_new = last ? r_end : r + h;
        const State prev = y;
        const double r_prev = r;
        r = r_new;
        y = next;
        ++stats_.accepted;
        const double grow = e == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(e, -0.2), 0.2, 5.0);
        // Landing on r_end truncates the step; keep the controller's proposal.
        h_ = last ? std::max(h_, h * grow) : h * grow;
        if (!observer(r_prev, prev, r, y)) return;
      } else {
        ++stats_.rejected;
        const double shrink = std::isfinite(e) ? std::clamp(0.9 * std::pow(e, -0.2), 0.1, 1.0) : 0.1;
        h_ = h * shrink;
        if (h_ < 1e-14 * std::max(std::abs(r), std::numeric_limits<double>::min())) {
          throw Error(ErrorCode::StepSizeUnderflow, "step size underflow at r = " + std::to_string(r));
        }
      }
    }
  }

  const OdeStats& stats() const { return stats_; }
  double step_size() const { return h_; }
  void set_step_size(double h) { h_ = h; }

 private:
  State trial(double r, const State& y, double h, State& err) const {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    State k1, k2, k3, k4, k5, k6, k7, tmp, out;
    k1 = rhs_(r, y);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    k2 = rhs_(r + c2 * h, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    k3 = rhs_(r + c3 * h, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = rhs_(r + c4 * h, tmp);
    for (std::size_t i = 0; i < N; ++i) {
      tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    }
    k5 = rhs_(r + c5 * h, tmp);
    for (std::size_t i = 0; i < N; ++i) {
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    }
    k6 = rhs_(r + h, tmp);
    for (std::size_t i = 0; i < N; ++i) {
      out[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    }
    k7 = rhs_(r + h, out);
    for (std::size_t i = 0; i < N; ++i) {
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }
    stats_.evaluations += 7;
    return out;
  }

  double error_norm(const State& y, const State& next, const State& err) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      if (!std::isfinite(next[i])) return std::numeric_limits<double>::infinity();
      const double scale = tol_.abs + tol_.rel * std::max(std::abs(y[i]), std::abs(next[i]));
      const double q = err[i] / scale;
      sum += q * q;
    }
    return std::sqrt(sum / N);
  }

  Rhs rhs_;
  OdeTolerances tol_;
  std::size_t max_steps_;
  double h_ = 0.0;
  mutable OdeStats stats_;
};

template <std::size_t N, class Rhs>
auto make_dormand_prince(Rhs rhs, OdeTolerances tol) {
  return DormandPrince45<N, Rhs>(std::move(rhs), tol);
}

}  // namespace bv
