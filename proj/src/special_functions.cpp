#include "brl/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace brl {

void ModelParams::validate() const {
  if (n < 1) throw std::invalid_argument("ModelParams: n must be >= 1, got " + std::to_string(n));
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("ModelParams: lambda must be > 0, got " + std::to_string(lambda));
  if (k < 1 || k > n + 1)
    throw std::invalid_argument("ModelParams: k must lie in [1, n+1], got " + std::to_string(k));
}

ModelConstants model_constants(const ModelParams& p) {
  p.validate();
  using std::numbers::pi;
  const double n = p.n;
  const double lam = p.lambda;
  const double sqrt_pi = std::sqrt(pi);
  const double gamma_ratio = std::tgamma(lam + 0.5) / std::tgamma(lam);

  ModelConstants c;
  c.kappa_lambda = gamma_ratio / (std::pow(2.0, 2.0 * lam) * sqrt_pi);
  c.kappa1 = std::pow(2.0, n) / sqrt_pi * gamma_ratio;
  c.kappa2 = (2.0 * lam + n) * c.kappa1;
  c.omega_n = std::tgamma((n + 2.0) / 2.0) / std::pow(pi, (n + 2.0) / 2.0);
  c.kappa3 = c.kappa2 / c.omega_n;

  c.heat_norm = std::pow(2.0, -2.0 * lam) * std::pow(4.0 * pi, -n / 2.0) / (sqrt_pi * std::tgamma(lam));
  c.invsqrt_norm = std::tgamma(lam + n / 2.0) / (std::pow(pi, (n + 2.0) / 2.0) * std::tgamma(lam));
  c.riesz_norm = (2.0 * lam + n) * c.invsqrt_norm;
  c.schur_norm = c.riesz_norm / c.omega_n;
  return c;
}

namespace {

constexpr double kSeriesMax = 12.0;
constexpr double kAsymptoticMin = 40.0;

// sum_k (-x^2/4)^k / (k! Gamma(nu+k+1)), i.e. J_nu(x) / (x/2)^nu.
long double reduced_series(long double nu, long double x) {
  const long double q = -x * x / 4.0L;
  long double term = 1.0L / std::tgamma(nu + 1.0L);
  long double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<long double>(k) * (nu + k));
    sum += term;
    if (std::fabs(term) <= 1e-21L * std::fabs(sum) && k > x) break;
  }
  return sum;
}

void check_domain(double nu, double x) {
  if (std::isnan(x) || x < 0.0) throw std::domain_error("bessel_j: argument must be >= 0");
  if (!(nu >= -0.5)) throw std::domain_error("bessel_j: order must be >= -1/2");
}

}  // namespace

namespace detail {

double bessel_j_series(double nu, double x) {
  check_domain(nu, x);
  if (x == 0.0) {
    if (nu == 0.0) return 1.0;
    return nu > 0.0 ? 0.0 : INFINITY;
  }
  const long double xl = x;
  return static_cast<double>(std::pow(xl / 2.0L, static_cast<long double>(nu)) * reduced_series(nu, xl));
}

double bessel_j_miller(double nu, double x) {
  check_domain(nu, x);
  if (x == 0.0) return bessel_j_series(nu, x);
  int top = static_cast<int>(std::ceil(x)) + 60;
  if (top % 2) ++top;
  std::vector<long double> j(static_cast<std::size_t>(top) + 2, 0.0L);
  const long double xl = x;
  const long double nul = nu;
  j[top + 1] = 0.0L;
  j[top] = 1e-30L;
  for (int m = top; m >= 1; --m) {
    j[m - 1] = 2.0L * (nul + m) / xl * j[m] - j[m + 1];
    if (std::fabs(j[m - 1]) > 1e300L) {
      for (int i = m - 1; i <= top; ++i) j[i] *= 1e-300L;
    }
  }
  // (x/2)^nu / Gamma(nu+1) = sum_k r_k J_{nu+2k}(x), r_0 = 1,
  // r_k = (nu+2k)/k * prod_{m=1}^{k-1} (nu+m)/m.
  long double norm = j[0];
  long double prod = 1.0L;
  for (int k = 1; 2 * k <= top; ++k) {
    if (k > 1) prod *= (nul + (k - 1)) / static_cast<long double>(k - 1);
    norm += (nul + 2.0L * k) / k * prod * j[2 * k];
  }
  const long double scale = std::pow(xl / 2.0L, nul) / std::tgamma(nul + 1.0L);
  return static_cast<double>(scale * j[0] / norm);
}

double bessel_j_asymptotic(double nu, double x) {
  check_domain(nu, x);
  const long double mu = 4.0L * nu * nu;
  const long double xl = x;
  long double p = 1.0L, q = 0.0L;
  long double a = 1.0L;  // a_k(nu) / x^k
  long double prev = INFINITY;
  for (int k = 1; k < 200; ++k) {
    const long double odd = 2.0L * k - 1.0L;
    a *= (mu - odd * odd) / (8.0L * k * xl);
    const long double mag = std::fabs(a);
    if (mag > prev) break;
    prev = mag;
    const int sign = ((k / 2) % 2 == 0) ? 1 : -1;
    if (k % 2 == 0)
      p += sign * a;
    else
      q += sign * a;
    if (mag < 1e-20L) break;
  }
  const double phase = (nu / 2.0 + 0.25) * std::numbers::pi;
  const double cx = std::cos(x), sx = std::sin(x);
  const double cp = std::cos(phase), sp = std::sin(phase);
  const long double cos_w = static_cast<long double>(cx) * cp + static_cast<long double>(sx) * sp;
  const long double sin_w = static_cast<long double>(sx) * cp - static_cast<long double>(cx) * sp;
  const long double amp = std::sqrt(2.0L / (std::numbers::pi_v<long double> * xl));
  return static_cast<double>(amp * (p * cos_w - q * sin_w));
}

}  // namespace detail

double bessel_j(double nu, double x) {
  check_domain(nu, x);
  if (x <= kSeriesMax) return detail::bessel_j_series(nu, x);
  if (x < kAsymptoticMin) return detail::bessel_j_miller(nu, x);
  return detail::bessel_j_asymptotic(nu, x);
}

double phi_lambda(double lambda, double xi) {
  if (!(lambda > 0.0)) throw std::domain_error("phi_lambda: lambda must be > 0");
  if (xi < 0.0) throw std::domain_error("phi_lambda: argument must be >= 0");
  const double nu = lambda - 0.5;
  if (xi <= kSeriesMax) {
    // xi^{-nu} J_nu(xi) = 2^{-nu} * reduced series, finite at xi = 0.
    return static_cast<double>(std::pow(2.0L, static_cast<long double>(-nu)) * reduced_series(nu, xi));
  }
  return std::pow(xi, -nu) * bessel_j(nu, xi);
}

double psi_lambda(double lambda, double t) {
  if (!(lambda > 0.0)) throw std::domain_error("psi_lambda: lambda must be > 0");
  if (t < 0.0) throw std::domain_error("psi_lambda: argument must be >= 0");
  if (t == 0.0) return 0.0;
  return std::sqrt(t) * bessel_j(lambda - 0.5, t);
}

double gen_binomial(double x, int k) {
  if (k < 0) throw std::domain_error("gen_binomial: k must be >= 0");
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= (x - i) / (i + 1);
  return r;
}

}  // namespace brl
