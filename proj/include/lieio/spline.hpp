#pragma once

#include <Eigen/Core>
#include <span>
#include <stdexcept>
#include <vector>

// Small spline utilities: natural cubic interpolation (C^2) and monotone
// cubic Hermite (Fritsch-Carlson) interpolation, both with analytic
// derivatives.

namespace lieio {

class CubicSpline {
 public:
  CubicSpline() = default;
  // Natural cubic spline through (x_k, y_k); x strictly increasing.
  CubicSpline(std::span<const double> x, std::span<const double> y);

  double value(double x) const;
  double deriv(double x) const;
  double deriv2(double x) const;

  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

 private:
  std::size_t segment(double x) const;
  std::vector<double> x_, y_, m_;  // m_: second derivatives at knots
};

// Componentwise natural cubic spline through 3-vectors.
class CubicSpline3 {
 public:
  CubicSpline3() = default;
  CubicSpline3(std::span<const double> x, std::span<const Eigen::Vector3d> y);

  Eigen::Vector3d value(double x) const;
  Eigen::Vector3d deriv(double x) const;
  Eigen::Vector3d deriv2(double x) const;

 private:
  CubicSpline c_[3];
};

// Monotone C^1 cubic Hermite interpolant (Fritsch-Carlson slopes). Strictly
// increasing data yields a strictly increasing interpolant.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::span<const double> x, std::span<const double> y);

  double value(double x) const;
  double deriv(double x) const;
  double deriv2(double x) const;  // piecewise linear, discontinuous at knots

 private:
  std::size_t segment(double x) const;
  std::vector<double> x_, y_, d_;  // d_: knot slopes
};

}  // namespace lieio
