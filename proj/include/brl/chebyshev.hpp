#pragma once

#include <array>
#include <functional>
#include <vector>

namespace brl {

/// Piecewise Chebyshev interpolant of degree 16 on consecutive intervals
/// [edges_i, edges_{i+1}].  Evaluation outside [edges_0, edges_last] is an error.
class PiecewiseChebyshev {
 public:
  static constexpr int kDegree = 16;

  PiecewiseChebyshev() = default;
  PiecewiseChebyshev(const std::function<double(double)>& f, std::vector<double> edges);

  double operator()(double x) const;
  double lo() const { return edges_.front(); }
  double hi() const { return edges_.back(); }
  const std::vector<double>& edges() const { return edges_; }

 private:
  std::vector<double> edges_;
  std::vector<std::array<double, kDegree + 1>> coeffs_;
};

}  // namespace brl
