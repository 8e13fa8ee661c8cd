#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

namespace becomp {

// A real function of one variable together with the points where it may fail
// to be smooth. Integrators step exactly onto the breakpoints.
struct ScalarFunction {
  std::function<double(double)> eval;
  std::vector<double> breakpoints;

  double operator()(double t) const { return eval(t); }

  static ScalarFunction constant(double c);
  // c on [0, cut], 0 afterwards.
  static ScalarFunction step_down(double c, double cut);
};

// Samples of a C^1 function on a grid that starts at 0.
struct ScalarCurve {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> derivs;

  std::size_t size() const { return grid.size(); }
  // Throws InputError unless the grid is strictly increasing and all lengths match.
  void validate() const;
  // Cubic Hermite interpolation from values and derivs; t is clamped to the grid.
  double value_at(double t) const;
  double deriv_at(double t) const;
  // Largest per-interval mismatch between values[i+1]-values[i] and the
  // trapezoid integral of derivs, divided by the interval length.
  double c1_defect() const;
};

// Columns t,value,deriv.
void write_csv(const ScalarCurve& curve, std::ostream& os);

}  // namespace becomp
