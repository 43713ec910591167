#pragma once

#include <Eigen/Dense>

#include <functional>

namespace brl {

/// Points of R^{n+1}; in the half-space the last coordinate is positive.
using Point = Eigen::VectorXd;
using PointRef = Eigen::Ref<const Eigen::VectorXd>;

/// Two-point kernel K(x, y).
using KernelFn = std::function<double(PointRef, PointRef)>;

/// Throws std::domain_error unless the last coordinate of x is > 0.
void require_half_space(PointRef x, const char* where);

/// Axis-aligned box [lo_1, hi_1] x ... x [lo_d, hi_d].
struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double volume() const { return (hi - lo).prod(); }
  Point center() const { return 0.5 * (lo + hi); }
  bool contains(PointRef x) const { return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all(); }
  /// Non-degenerate and strictly inside the half-space (lo of the last axis > 0).
  void validate() const;
};

}  // namespace brl
