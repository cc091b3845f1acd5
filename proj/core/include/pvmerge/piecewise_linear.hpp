#pragma once

#include <span>
#include <vector>

namespace pvmerge {

/// Continuous piecewise-linear function on [0,1], linear between
/// breakpoints. Breakpoints are strictly increasing, start at 0 and end at 1.
class PiecewiseLinear {
 public:
  struct Breakpoint {
    double x;
    double y;
    bool operator==(const Breakpoint&) const = default;
  };

  explicit PiecewiseLinear(std::vector<Breakpoint> points);

  static PiecewiseLinear constant(double value);

  std::span<const Breakpoint> breakpoints() const noexcept { return points_; }

  double operator()(double x) const;
  /// Exact integral over [0,1] (trapezoids between breakpoints).
  double integral() const;

  PiecewiseLinear scaled(double factor) const;
  /// max(f, 0), inserting breakpoints at zero crossings.
  PiecewiseLinear positive_part() const;
  /// Smallest decreasing majorant on the breakpoint grid: the running
  /// maximum of breakpoint values taken from the right.
  PiecewiseLinear decreasing_envelope() const;
  bool is_decreasing() const;

  /// Pointwise average of several functions, exact on the union of their
  /// breakpoints.
  static PiecewiseLinear average(std::span<const PiecewiseLinear> fs);

  bool operator==(const PiecewiseLinear&) const = default;

 private:
  std::vector<Breakpoint> points_;
};

}  // namespace pvmerge
