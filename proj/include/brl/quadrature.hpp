#pragma once

#include <functional>
#include <vector>
#include <span>
#include <stdexcept>
#include <string>

namespace brl {

/// Raised when an adaptive rule cannot reach the requested tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& where, double value, double error)
      : std::runtime_error(where + ": quadrature did not converge (value " + std::to_string(value) +
                           ", error estimate " + std::to_string(error) + ")"),
        value_(value),
        error_(error) {}
  double value() const { return value_; }
  double error() const { return error_; }

 private:
  double value_;
  double error_;
};

struct QuadResult {
  double value = 0;
  double error = 0;
  double l1 = 0;  // integral of |f|, used to judge cancellation
};

using ScalarFn = std::function<double(double)>;

namespace quad {

/// Double-exponential rule on [a, b]; tolerates integrable endpoint singularities.
QuadResult tanh_sinh(const ScalarFn& f, double a, double b, double rel_tol = 1e-13);

/// Adaptive 31-point Gauss-Kronrod on [a, b] for smooth integrands, bisecting at most max_depth times.
QuadResult gauss_kronrod(const ScalarFn& f, double a, double b, double rel_tol = 1e-13, unsigned max_depth = 20);

/// Sums tanh_sinh over consecutive pieces [b_0, b_1], [b_1, b_2], ...
QuadResult piecewise(const ScalarFn& f, std::span<const double> breaks, double rel_tol = 1e-13);

/// Integral over [a, inf) by the exp-sinh rule.
QuadResult half_line(const ScalarFn& f, double a, double rel_tol = 1e-13);

/// Integral of f(t) cos(omega t) over [0, inf), omega > 0, for slowly
/// decaying f. The finite head [0, T] is handled adaptively, T being a
/// whole number of periods past `scale`; the tail goes to the Ooura-Mori rule.
QuadResult fourier_cos(const ScalarFn& f, double omega, double scale, double rel_tol = 1e-10);

/// Breakpoints 0, s, 4s, 16s, ... , end for integrands with a feature of
/// width s at the left endpoint.
std::vector<double> geometric_breaks(double start, double feature, double end, double ratio = 4.0);

/// Throws QuadratureError when r.error is too large relative to r.l1.
void require_converged(const QuadResult& r, double rel_tol, const char* where);

}  // namespace quad
}  // namespace brl
