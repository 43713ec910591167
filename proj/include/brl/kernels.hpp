#pragma once

// Two-point kernels on the half-space R^{n+1}_+.  Kernels of operators on
// L_2(m_lambda) are taken with respect to m_lambda, so (T u)(x) = int K(x,y) u(y) y_{n+1}^{2 lambda} dy.
// Coordinate indices are 0-based; index n is the last (normal) coordinate.

#include "brl/auxiliary.hpp"
#include "brl/chebyshev.hpp"
#include "brl/special_functions.hpp"
#include "brl/symbols.hpp"
#include "brl/types.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace brl::kern {

namespace detail {
template <class DX, class DY>
typename DX::Scalar distance_checked(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y, const char* where) {
  const auto d = (x - y).norm();
  if (d == typename DX::Scalar(0)) throw std::domain_error(std::string(where) + ": coincident points");
  return d;
}
}  // namespace detail

/// H(x,y) = |x - y| / (x_{n+1} y_{n+1})^{1/2}
template <class DX, class DY>
typename DX::Scalar H(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y) {
  using std::sqrt;
  const auto last = x.size() - 1;
  return (x - y).norm() / sqrt(x(last) * y(last));
}

/// a(x,y) = (min(x_{n+1}, y_{n+1}) / max(x_{n+1}, y_{n+1}))^{1/2}
template <class DX, class DY>
typename DX::Scalar a(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y) {
  using std::sqrt;
  const auto last = x.size() - 1;
  const auto u = x(last), v = y(last);
  return u < v ? sqrt(u / v) : sqrt(v / u);
}

/// b(x,y) = 1 if x_{n+1} < y_{n+1}, else 0
template <class DX, class DY>
typename DX::Scalar b(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y) {
  const auto last = x.size() - 1;
  return x(last) < y(last) ? typename DX::Scalar(1) : typename DX::Scalar(0);
}

/// h_m(x,y) = (x - y)_m / |x - y|
template <class DX, class DY>
typename DX::Scalar h(int m, const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y) {
  return (x(m) - y(m)) / detail::distance_checked(x, y, "h");
}

/// K_m(x,y) = (x - y)_m / (|x - y|^{n+2} (x_{n+1} y_{n+1})^lambda)
template <class DX, class DY>
typename DX::Scalar K(int m, double lambda, const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y) {
  using std::pow;
  const auto last = x.size() - 1;
  const auto d = detail::distance_checked(x, y, "K");
  return (x(m) - y(m)) / (pow(d, static_cast<double>(x.size() + 1)) * pow(x(last) * y(last), lambda));
}

/// Q_t(x,y) = |x - y|^2 + 2 t x_{n+1} y_{n+1}
template <class DX, class DY>
typename DX::Scalar Q(double t, const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y) {
  const auto last = x.size() - 1;
  return (x - y).squaredNorm() + 2.0 * t * x(last) * y(last);
}

/// int_0^pi exp(-c (1 - cos theta)) sin^{2 lambda - 1}(theta) d theta, c >= 0.
double heat_theta_integral(double lambda, double c);

/// Kernel of exp(-s^2 Delta_lambda).
double heat_kernel(const ModelParams& p, double s, PointRef x, PointRef y);

/// heat_kernel at fixed s with the theta integral tabulated in c = x_{n+1} y_{n+1} / (2 s^2).
class HeatKernel {
 public:
  HeatKernel(const ModelParams& p, double s, double c_max);
  double operator()(PointRef x, PointRef y) const;

 private:
  ModelParams p_;
  double s_;
  double prefactor_;
  PiecewiseChebyshev scaled_;  // J(c) (1 + c)^lambda
};

/// Kernel of Delta_lambda^{-1/2} from the t-integral of Q_t^{-lambda-n/2}.
double invsqrt_kernel_closed(const ModelParams& p, PointRef x, PointRef y);

/// Kernel of Delta_lambda^{-1/2} as (2/sqrt(pi)) int_0^inf heat_kernel(s) ds.
double invsqrt_kernel_subordination(const ModelParams& p, PointRef x, PointRef y);

/// Kernel of the Bessel-Riesz transform R_{lambda,k} (k = p.k, 1-based as in ModelParams),
/// assembled from the symbols H, a, b, h, K and F_{2,0}, F_{1,1}, F_{2,1}.
class BesselRieszKernel {
 public:
  /// Without a table, F is evaluated by quadrature.
  explicit BesselRieszKernel(const ModelParams& p, const aux::AuxTable* table = nullptr);
  double operator()(PointRef x, PointRef y) const;

 private:
  double F(aux::AuxIndex idx, double x) const;

  ModelParams p_;
  double norm_;
  const aux::AuxTable* table_;
};

double riesz_kernel_bessel(const ModelParams& p, PointRef x, PointRef y);

/// omega_n (y - x)_l / |x - y|^{n+2} on R^{n+1}, l 0-based.
double riesz_kernel_classical(int l, PointRef x, PointRef y);

/// base(x,y) (f(y) - f(x))
double commutator_kernel(const KernelFn& base, const Symbol& f, PointRef x, PointRef y);

/// Schur-multiplier side of the commutator identity, with respect to m_lambda:
/// Schur symbols (F o H, a, b, h) applied to x^{-lambda} [R_l, M_f](x,y) y^{lambda}, divided by y^{2 lambda}.
double prop35_rhs_kernel(const ModelParams& p, const Symbol& f, PointRef x, PointRef y,
                         const aux::AuxTable* table = nullptr);

struct RatioBoundReport {
  std::size_t drawn = 0;
  std::size_t accepted = 0;
  std::size_t violations = 0;
  double min_ratio = 0;
  double max_ratio = 0;
  Point worst_x, worst_y;
  bool passed = false;
};

/// Random pairs with H(x,y) <= 1 (rejection sampling); checks
/// (3 - sqrt 5)/2 <= x_{n+1} / y_{n+1} <= (3 + sqrt 5)/2.
RatioBoundReport ratio_bound_check(int n, std::size_t accepted_target, std::uint64_t seed);

struct TaylorReport {
  std::vector<double> separations;
  std::vector<double> residual_rms;
  std::vector<double> leading_ratios;  // least-squares coefficient of W on the classical kernel per level
  double exponent = 0;                 // slope of log residual_rms against log separation
  double required = 0;                 // (1 - n) - 0.2
  double expected_ratio = 0;           // schur_norm * F_{2,0}(0)
  bool zero_residual = false;
  bool passed = false;
};

/// Compares W = [R_{lambda,k}, M_f](x,y) (x_{n+1} y_{n+1})^lambda with its
/// diagonal limit schur_norm F_{2,0}(0) [R_k, M_f](x,y) at separations 2^{-m}, m = 3..10.
TaylorReport taylor_local_check(const ModelParams& p, const Symbol& f, const Box& box, std::uint64_t seed = 1);

}  // namespace brl::kern
