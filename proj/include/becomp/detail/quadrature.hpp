#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature.
//
// The error estimate of a panel is the raw |K15 - G7| difference, which is
// pessimistic for smooth integrands; the returned bound is therefore safe to
// report as a certified truncation budget.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

#include "becomp/errors.hpp"

namespace becomp::detail {

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t intervals = 0;
  bool converged = true;
};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
};

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the nodes kKronrodNodes[1], [3], [5], [7].
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
Panel gk15_panel(F&& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

// Integrates f over [a, b] until the summed panel error is below
// max(abs_tol, rel_tol * |I|). Panels are refined in order of decreasing error
// (ties broken by position) so the result is deterministic.
template <class F>
QuadResult integrate(F&& f, double a, double b, double abs_tol, double rel_tol = 0.0,
                     std::size_t max_intervals = 20000) {
  if (a == b) return {};
  if (b < a) {
    QuadResult r = integrate(f, b, a, abs_tol, rel_tol, max_intervals);
    r.value = -r.value;
    return r;
  }
  auto worse = [](const Panel& x, const Panel& y) {
    if (x.error != y.error) return x.error < y.error;
    return x.a > y.a;
  };
  std::priority_queue<Panel, std::vector<Panel>, decltype(worse)> queue(worse);
  Panel first = gk15_panel(f, a, b);
  double total = first.value;
  double error = first.error;
  queue.push(first);
  std::size_t count = 1;
  while (error > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (count >= max_intervals) {
      return {total, error, count, false};
    }
    const Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Interval collapsed to adjacent doubles; nothing left to refine.
      return {total, error, count, false};
    }
    const Panel left = gk15_panel(f, worst.a, mid);
    const Panel right = gk15_panel(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++count;
  }
  // Re-sum to shed the drift of the incremental updates.
  double sum = 0.0;
  double err = 0.0;
  while (!queue.empty()) {
    sum += queue.top().value;
    err += queue.top().error;
    queue.pop();
  }
  return {sum, err, count, true};
}

// Same as integrate() but splits at the given interior points first, so that
// known kinks of the integrand fall on panel boundaries.
template <class F>
QuadResult integrate_split(F&& f, double a, double b, const std::vector<double>& splits,
                           double abs_tol, double rel_tol = 0.0) {
  std::vector<double> sorted = splits;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> cuts{a};
  for (double s : sorted) {
    if (s > cuts.back() && s < b) cuts.push_back(s);
  }
  cuts.push_back(b);
  QuadResult out;
  const double share = abs_tol / static_cast<double>(cuts.size() - 1);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const QuadResult piece = integrate(f, cuts[i], cuts[i + 1], share, rel_tol);
    out.value += piece.value;
    out.abs_error += piece.abs_error;
    out.intervals += piece.intervals;
    out.converged = out.converged && piece.converged;
  }
  return out;
}

}  // namespace becomp::detail
