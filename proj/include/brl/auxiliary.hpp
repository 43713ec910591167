#pragma once

// Auxiliary functions
//
//   F_{k,l}(x) = x^{n+k} int_0^2 (x^2 + 2t)^{-lambda-n/2-1} (2t - t^2)^{lambda-1} t^l dt
//   G_{k,l}(x) = (F_{k,l}(x) - F_{k,l}(0)) / x
//
// for (k,l) in {(2,0), (1,1), (2,1)}, together with their splitting into a
// smooth part, a regularized small-t part and explicit power/log terms.

#include "brl/chebyshev.hpp"
#include "brl/special_functions.hpp"

#include <array>
#include <utility>
#include <vector>

namespace brl::aux {

struct AuxIndex {
  int k = 2;
  int l = 0;

  /// Throws std::invalid_argument unless (k,l) is (2,0), (1,1) or (2,1).
  void validate() const;
  friend bool operator==(const AuxIndex&, const AuxIndex&) = default;
};

inline constexpr AuxIndex kF20{2, 0};
inline constexpr AuxIndex kF11{1, 1};
inline constexpr AuxIndex kF21{2, 1};
inline constexpr std::array<AuxIndex, 3> kAllIndices{kF20, kF11, kF21};

/// theta-form of the t-integrals, t = 1 - cos(theta):
///   int_0^pi (h^2 + 4 sin^2(theta/2))^{-beta} sin^{2 lambda - 1}(theta) (2 sin^2(theta/2))^l d theta,
/// which equals int_0^2 (h^2 + 2t)^{-beta} (2t - t^2)^{lambda-1} t^l dt.  h > 0.
double theta_integral(double h, double beta, double lambda, int l, double rel_tol = 1e-13);

/// F_{k,l}(x); at x = 0 the right limit (closed form) is returned.
double F(AuxIndex idx, const ModelParams& p, double x);

/// Right limit at 0 in closed form:
/// F_{2,0}(0) = Gamma(lambda) Gamma(n/2+1) / (2 Gamma(lambda+n/2+1)), F_{1,1}(0) = F_{2,1}(0) = 0.
double F_at_zero(AuxIndex idx, const ModelParams& p);

/// Right derivative at 0 in closed form. F_{1,1}'(0) = Gamma(lambda+1) Gamma(n/2) / (4 Gamma(lambda+n/2+1));
/// the other two vanish.
double F_slope_at_zero(AuxIndex idx, const ModelParams& p);

/// Right limit from quadrature alone: Richardson extrapolation (linear in x)
/// over x = 1e-4, 1e-5, 1e-6.  `cauchy_gap` is the difference between the
/// extrapolants built from the coarse and the fine pair.
struct RightLimit {
  double value = 0;
  double cauchy_gap = 0;
  std::array<double, 3> samples{};
};
RightLimit F_right_limit(AuxIndex idx, const ModelParams& p);

double G(AuxIndex idx, const ModelParams& p, double x);

/// Coefficient of the log-singular term, following the paper-side definition
///   a_{l,j} = 2 binom(-lambda-n/2-1, m) chi_N(m),  m = j + l - n/2 - 1,
/// with N the positive integers and a_{l,j} = 0 for odd n.
double a_coeff(int l, int j, const ModelParams& p);

/// The coefficient `c` for which C_{l,j}(x) - c x^{2j} log(x) is analytic near 0:
/// -2 binom(-lambda-n/2-1, m) for integer m >= 0 (even n), else 0.
double log_coefficient(int l, int j, const ModelParams& p);

/// F_{k,l}(x) = x^{n+k} A_l(x) + x^k B_l(x) + x^{k+2l-2} sum_j c_j C_{l,j}(x),
/// c_j = (-1)^j 2^{-(l+2j+1)} binom(lambda-1, j), j = 0..n+2.
/// A_l integrates over t in [1/2, 2]; B_l(x) = x^n int_0^{1/2} (x^2+2t)^{-lambda-n/2-1} (2t)^{lambda-1} R(t) t^l dt
/// with R the binomial tail of (1 - t/2)^{lambda-1} from order n+3 on.
class AuxDecomposition {
 public:
  AuxDecomposition(AuxIndex idx, const ModelParams& p);

  double A(double x) const;
  double B(double x) const;
  double C(int j, double x) const;
  /// Full right-hand side, 0 < x <= 1.
  double evaluate(double x) const;

  const std::vector<std::pair<int, double>>& c_coeffs() const { return c_coeffs_; }
  const std::vector<double>& a_coeffs() const { return a_coeffs_; }
  /// Coefficients of P_{k,l}, index = power of x.
  const std::vector<double>& p_log() const { return p_log_; }

 private:
  AuxIndex idx_;
  ModelParams p_;
  double alpha_;
  std::vector<std::pair<int, double>> c_coeffs_;
  std::vector<double> a_coeffs_;
  std::vector<double> p_log_;
};

inline double F_decomposed(AuxIndex idx, const ModelParams& p, double x) { return AuxDecomposition(idx, p).evaluate(x); }

/// Finite-difference probe of |F^{(j)}(x)| x^{2 + 2 lambda + j - k}.
struct DerivativeProbe {
  std::vector<double> xs;
  std::vector<double> ratios;
  std::vector<double> decade_sups;  // sup per decade, ascending decades
  double sup = 0;
  bool bounded = false;  // finite, and the decade-to-decade growth factors are non-increasing
};
DerivativeProbe derivative_bound_probe(AuxIndex idx, const ModelParams& p, int j, const std::vector<double>& xs);

/// Central finite difference of order j in {0,1,2}, step x * 1e-4.
double F_derivative_fd(AuxIndex idx, const ModelParams& p, int j, double x);

/// Piecewise Chebyshev tables of F_{2,0}, F_{1,1}, F_{2,1} on [0, h_max];
/// arguments beyond h_max fall back to quadrature.
class AuxTable {
 public:
  AuxTable(const ModelParams& p, double h_max);
  double operator()(AuxIndex idx, double x) const;
  double h_max() const { return h_max_; }
  const ModelParams& params() const { return p_; }

 private:
  ModelParams p_;
  double h_max_;
  std::array<PiecewiseChebyshev, 3> tables_;
};

}  // namespace brl::aux
