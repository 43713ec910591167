#pragma once

// Special functions and model constants for the Bessel operator
//
//   Delta_lambda = -sum_k d^2/dx_k^2 - (2 lambda / x_{n+1}) d/dx_{n+1}
//
// on the upper half-space R^{n+1}_+ with measure dm_lambda = x_{n+1}^{2 lambda} dx.

namespace brl {

/// Dimension n (ambient dimension n+1), Bessel parameter lambda and
/// transform index k, 1 <= k <= n+1.
struct ModelParams {
  int n = 1;
  double lambda = 1.0;
  int k = 1;

  int dim() const { return n + 1; }
  /// Throws std::invalid_argument unless n >= 1, lambda > 0, 1 <= k <= n+1.
  void validate() const;
};

/// Constants of the model.
///
/// `kappa_lambda`, `kappa1`, `kappa2`, `kappa3` follow the literal closed
/// forms attached to the heat kernel, the kernel of Delta_lambda^{-1/2}, the
/// Bessel-Riesz kernel and the Schur-multiplier representation.
/// Those closed forms are only correct up to positive factors, so every
/// kernel evaluator uses the `*_norm` fields instead: they are fixed by
/// requiring that the heat semigroup preserves constants, which makes the
/// three representations of Delta_lambda^{-1/2} agree and gives
/// schur_norm * F_{2,0}(0) == 1.
struct ModelConstants {
  double kappa_lambda = 0;
  double kappa1 = 0;
  double kappa2 = 0;
  double omega_n = 0;  // classical Riesz kernel normalization in R^{n+1}
  double kappa3 = 0;

  double heat_norm = 0;
  double invsqrt_norm = 0;
  double riesz_norm = 0;  // (2 lambda + n) * invsqrt_norm
  double schur_norm = 0;  // riesz_norm / omega_n
};

ModelConstants model_constants(const ModelParams& p);

/// Bessel function of the first kind J_nu(x) for nu >= -1/2, x >= 0.
/// Power series for x <= 12, Miller backward recurrence for 12 < x < 40,
/// Hankel asymptotic expansion for x >= 40.
double bessel_j(double nu, double x);

namespace detail {
// Individual branches, exposed for the overlap audits in the tests.
double bessel_j_series(double nu, double x);
double bessel_j_miller(double nu, double x);
double bessel_j_asymptotic(double nu, double x);
}  // namespace detail

/// phi_lambda(xi) = xi^{1/2 - lambda} J_{lambda - 1/2}(xi), continuous at 0.
double phi_lambda(double lambda, double xi);

/// psi_lambda(t) = t^lambda phi_lambda(t) = t^{1/2} J_{lambda - 1/2}(t).
double psi_lambda(double lambda, double t);

/// x (x-1) ... (x-k+1) / k!
double gen_binomial(double x, int k);

}  // namespace brl
