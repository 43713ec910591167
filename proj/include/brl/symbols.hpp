#pragma once

// Scalar symbols f on the half-space, the multipliers in [R, M_f].

#include "brl/types.hpp"

#include <functional>
#include <string>

namespace brl {

struct Symbol {
  std::string kind;
  std::function<double(PointRef)> value;
  std::function<Eigen::VectorXd(PointRef)> gradient;  // empty when unavailable
  Box support;                                        // f vanishes (numerically) outside

  double operator()(PointRef x) const { return value(x); }
  bool has_gradient() const { return static_cast<bool>(gradient); }
};

/// amplitude * exp(-|x - center|^2 / (2 width^2)); support box center +- 8 width.
Symbol gaussian_bump(const Point& center, double width, double amplitude = 1.0);

/// amplitude * cos^2(pi r / 2) for r < 1, with r = |(x - center) / radii| (elliptic, C^1).
Symbol cosine_bump(const Point& center, const Eigen::VectorXd& radii, double amplitude = 1.0);

/// amplitude * x_axis inside `window`, 0 outside (axis is 0-based).
Symbol coordinate_window(int axis, const Box& window, double amplitude = 1.0);

/// The constant c, with `where` recorded as its support box.
Symbol constant_symbol(double c, const Box& where);

Symbol scaled(const Symbol& f, double c);
Symbol translated(const Symbol& f, const Eigen::VectorXd& shift);
Symbol sum(const Symbol& f, const Symbol& g);

/// Central-difference gradient with step h.
Eigen::VectorXd fd_gradient(const Symbol& f, PointRef x, double h);

}  // namespace brl
