#include "becomp/curve.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "becomp/errors.hpp"

namespace becomp {

ScalarFunction ScalarFunction::constant(double c) {
  return {[c](double) { return c; }, {}};
}

ScalarFunction ScalarFunction::step_down(double c, double cut) {
  return {[c, cut](double t) { return t <= cut ? c : 0.0; }, {cut}};
}

void ScalarCurve::validate() const {
  if (grid.empty()) throw InputError("curve has an empty grid");
  if (values.size() != grid.size() || derivs.size() != grid.size()) {
    throw InputError("curve grid, values and derivs differ in length");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw InputError("curve grid is not strictly increasing");
  }
}

namespace {

std::size_t cell_of(const std::vector<double>& grid, double t) {
  auto it = std::upper_bound(grid.begin(), grid.end(), t);
  std::size_t i = it == grid.begin() ? 0 : static_cast<std::size_t>(it - grid.begin()) - 1;
  return std::min(i, grid.size() - 2);
}

}  // namespace

double ScalarCurve::value_at(double t) const {
  if (grid.size() == 1) return values.front();
  t = std::clamp(t, grid.front(), grid.back());
  const std::size_t i = cell_of(grid, t);
  const double h = grid[i + 1] - grid[i];
  const double s = (t - grid[i]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  return h00 * values[i] + h10 * h * derivs[i] + h01 * values[i + 1] + h11 * h * derivs[i + 1];
}

double ScalarCurve::deriv_at(double t) const {
  if (grid.size() == 1) return derivs.front();
  t = std::clamp(t, grid.front(), grid.back());
  const std::size_t i = cell_of(grid, t);
  const double h = grid[i + 1] - grid[i];
  const double s = (t - grid[i]) / h;
  const double d00 = 6 * s * (s - 1) / h;
  const double d10 = (1 - s) * (1 - 3 * s);
  const double d01 = -d00;
  const double d11 = s * (3 * s - 2);
  return d00 * values[i] + d10 * derivs[i] + d01 * values[i + 1] + d11 * derivs[i + 1];
}

double ScalarCurve::c1_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double h = grid[i + 1] - grid[i];
    const double trap = 0.5 * h * (derivs[i] + derivs[i + 1]);
    worst = std::max(worst, std::abs(values[i + 1] - values[i] - trap) / h);
  }
  return worst;
}

void write_csv(const ScalarCurve& curve, std::ostream& os) {
  os << "t,value,deriv\n";
  os.precision(17);
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    os << curve.grid[i] << ',' << curve.values[i] << ',' << curve.derivs[i] << '\n';
  }
}

}  // namespace becomp
