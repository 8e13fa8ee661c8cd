#pragma once

// Dormand-Prince 5(4) with step size control and the standard fourth-order
// continuous extension. States are fixed-size arrays; the integrator reports
// the state at every point of a caller-supplied output grid and never steps
// across a declared breakpoint (kinks of the right-hand side).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "becomp/errors.hpp"

namespace becomp::detail {

template <std::size_t N>
using State = std::array<double, N>;

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0: automatic
  double max_step = 0.0;      // 0: unbounded
  std::size_t max_steps = 5'000'000;
};

struct OdeStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t evaluations = 0;
};

namespace dp5 {
inline constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                        a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                        a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
inline constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                        a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
inline constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                        e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
inline constexpr double d1 = -12715105075.0 / 11282082432.0,
                        d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0,
                        d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
}  // namespace dp5

template <std::size_t N>
double error_norm(const State<N>& err, const State<N>& y0, const State<N>& y1,
                  const OdeOptions& opt) {
  double sum = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sc = opt.atol + opt.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double q = err[i] / sc;
    sum += q * q;
  }
  return std::sqrt(sum / static_cast<double>(N));
}

// Integrates y' = rhs(t, y) from grid.front() to grid.back() and returns the
// state at every grid point. grid must be nondecreasing. Breakpoints outside
// the integration window are ignored.
template <std::size_t N, class Rhs>
std::vector<State<N>> integrate_on_grid(Rhs&& rhs, const State<N>& y0,
                                        std::span<const double> grid,
                                        std::span<const double> breakpoints,
                                        const OdeOptions& opt, OdeStats* stats = nullptr) {
  using namespace dp5;
  std::vector<State<N>> out;
  if (grid.empty()) return out;
  out.reserve(grid.size());
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] < grid[i - 1]) throw InputError("output grid must be nondecreasing");
  }
  const double t_begin = grid.front();
  const double t_end = grid.back();

  std::vector<double> stops;
  for (double b : breakpoints) {
    if (b > t_begin && b < t_end) stops.push_back(b);
  }
  stops.push_back(t_end);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

  std::size_t next_out = 0;
  while (next_out < grid.size() && grid[next_out] == t_begin) {
    out.push_back(y0);
    ++next_out;
  }
  if (next_out == grid.size()) return out;

  auto axpy = [](State<N>& dst, const State<N>& y, double h,
                 std::initializer_list<std::pair<double, const State<N>*>> terms) {
    for (std::size_t i = 0; i < N; ++i) {
      double acc = 0.0;
      for (const auto& [c, k] : terms) acc += c * (*k)[i];
      dst[i] = y[i] + h * acc;
    }
  };

  OdeStats local;
  double t = t_begin;
  State<N> y = y0;
  State<N> k1 = rhs(t, y);
  ++local.evaluations;

  double h = opt.initial_step;
  if (h <= 0.0) {
    // Hairer's starting-step heuristic.
    const double d0 = error_norm<N>(y, y, y, opt);
    const double d1n = error_norm<N>(k1, y, y, opt);
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h0 = std::min(h0, t_end - t);
    State<N> y1;
    for (std::size_t i = 0; i < N; ++i) y1[i] = y[i] + h0 * k1[i];
    const State<N> f1 = rhs(t + h0, y1);
    ++local.evaluations;
    State<N> df;
    for (std::size_t i = 0; i < N; ++i) df[i] = f1[i] - k1[i];
    const double d2 = error_norm<N>(df, y, y, opt) / h0;
    const double dmax = std::max(d1n, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
    h = std::min(100.0 * h0, h1);
  }
  if (opt.max_step > 0.0) h = std::min(h, opt.max_step);

  std::size_t stop_index = 0;
  std::size_t steps = 0;
  State<N> y2, y3, y4, y5, y6, ynew, k2, k3, k4, k5, k6, k7, err;

  while (t < t_end) {
    if (++steps > opt.max_steps) throw IntegrationError("step budget exhausted");
    while (stops[stop_index] <= t) ++stop_index;
    const double stop = stops[stop_index];
    bool lands = false;
    if (t + h >= stop - 1e-14 * std::max(1.0, std::abs(stop))) {
      h = stop - t;
      lands = true;
    }
    if (!(h > 1e-15 * std::max(1.0, std::abs(t)))) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "step size underflow at t = " << t << " (h = " << h << ")";
      throw IntegrationError(msg.str());
    }

    axpy(y2, y, h, {{a21, &k1}});
    k2 = rhs(t + c2 * h, y2);
    axpy(y3, y, h, {{a31, &k1}, {a32, &k2}});
    k3 = rhs(t + c3 * h, y3);
    axpy(y4, y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
    k4 = rhs(t + c4 * h, y4);
    axpy(y5, y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
    k5 = rhs(t + c5 * h, y5);
    axpy(y6, y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
    const double t_new = lands ? stop : t + h;
    k6 = rhs(t_new, y6);
    axpy(ynew, y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
    k7 = rhs(t_new, ynew);
    local.evaluations += 6;

    for (std::size_t i = 0; i < N; ++i) {
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                    e7 * k7[i]);
    }
    const double en = error_norm<N>(err, y, ynew, opt);
    bool finite = std::isfinite(en);
    for (double v : ynew) finite = finite && std::isfinite(v);

    if (finite && en <= 1.0) {
      ++local.accepted;
      // Emit output points inside (t, t_new] from the continuous extension.
      while (next_out < grid.size() && grid[next_out] <= t_new) {
        const double tq = grid[next_out];
        if (tq == t_new) {
          out.push_back(ynew);
        } else {
          const double theta = (tq - t) / h;
          const double theta1 = 1.0 - theta;
          State<N> yq;
          for (std::size_t i = 0; i < N; ++i) {
            const double ydiff = ynew[i] - y[i];
            const double bspl = h * k1[i] - ydiff;
            const double r4 = ydiff - h * k7[i] - bspl;
            const double r5 = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                   d6 * k6[i] + d7 * k7[i]);
            yq[i] = y[i] + theta * (ydiff + theta1 * (bspl + theta * (r4 + theta1 * r5)));
          }
          out.push_back(yq);
        }
        ++next_out;
      }
      t = t_new;
      y = ynew;
      k1 = k7;
      const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      const double h_prev = h;
      h *= fac;
      if (lands && stop < t_end) {
        // The next segment may have different smoothness; do not grow blindly.
        h = std::min(h, 2.0 * h_prev);
      }
      if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
    } else {
      ++local.rejected;
      const double fac = finite ? std::clamp(0.9 * std::pow(en, -0.2), 0.1, 1.0) : 0.25;
      h *= fac;
    }
  }
  while (next_out < grid.size()) {
    out.push_back(y);
    ++next_out;
  }
  if (stats) *stats = local;
  return out;
}

}  // namespace becomp::detail
