#include "brl/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace brl {

PiecewiseChebyshev::PiecewiseChebyshev(const std::function<double(double)>& f, std::vector<double> edges)
    : edges_(std::move(edges)) {
  if (edges_.size() < 2 || !std::is_sorted(edges_.begin(), edges_.end()))
    throw std::invalid_argument("PiecewiseChebyshev: need at least two increasing edges");
  constexpr int N = kDegree + 1;
  coeffs_.resize(edges_.size() - 1);
  std::array<double, N> vals;
  for (std::size_t i = 0; i + 1 < edges_.size(); ++i) {
    const double mid = 0.5 * (edges_[i] + edges_[i + 1]);
    const double half = 0.5 * (edges_[i + 1] - edges_[i]);
    for (int q = 0; q < N; ++q) vals[q] = f(mid + half * std::cos(std::numbers::pi * (q + 0.5) / N));
    auto& c = coeffs_[i];
    for (int m = 0; m < N; ++m) {
      double s = 0.0;
      for (int q = 0; q < N; ++q) s += vals[q] * std::cos(std::numbers::pi * m * (q + 0.5) / N);
      c[m] = 2.0 * s / N;
    }
    c[0] *= 0.5;
  }
}

double PiecewiseChebyshev::operator()(double x) const {
  if (!(x >= edges_.front() && x <= edges_.back()))
    throw std::out_of_range("PiecewiseChebyshev: argument outside the tabulated range");
  auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
  if (it == edges_.end()) --it;
  const std::size_t i = static_cast<std::size_t>(it - edges_.begin()) - 1;
  const double lo = edges_[i], hi = edges_[i + 1];
  const auto& c = coeffs_[i];
  const double u = (2.0 * x - lo - hi) / (hi - lo);
  double b1 = 0.0, b2 = 0.0;
  for (int m = kDegree; m >= 1; --m) {
    const double b0 = 2.0 * u * b1 - b2 + c[m];
    b2 = b1;
    b1 = b0;
  }
  return u * b1 - b2 + c[0];
}

}  // namespace brl
