#include "brl/spectral_kernel.hpp"

#include "brl/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace brl::kern {

namespace {

using std::numbers::pi;

// Chunked integral of an oscillating, decaying integrand over [0, inf).
// Stops once `quiet` consecutive chunks are below rel_tol times the running l1.
struct ChunkedResult {
  double value = 0;
  double last = 0;
  double cut = 0;
  bool settled = false;
};

ChunkedResult chunked_half_line(const ScalarFn& f, double width, double limit, double rel_tol) {
  constexpr int quiet = 3;
  ChunkedResult r;
  double l1 = 0;
  int calm = 0;
  for (double a = 0.0; a < limit; a += width) {
    // the first chunk may carry an integrable log singularity at 0.  Chunks span
    // about half an oscillation, so shallow bisection suffices; deeper levels only
    // chase the inner quadrature's noise once the integrand has decayed.
    const QuadResult part =
        a == 0.0 ? quad::tanh_sinh(f, a, a + width, rel_tol) : quad::gauss_kronrod(f, a, a + width, rel_tol, 6);
    r.value += part.value;
    l1 += part.l1;
    r.last = std::abs(part.value);
    r.cut = a + width;
    calm = part.l1 <= rel_tol * l1 ? calm + 1 : 0;
    if (calm >= quiet && l1 > 0.0) {
      r.settled = true;
      break;
    }
    if (l1 == 0.0 && a > 0.0 && part.l1 == 0.0 && ++calm >= quiet) {
      r.settled = true;
      break;
    }
  }
  return r;
}

// int_{R^n} e^{i <z', d'>} g(sqrt(|z'|^2 + t^2)) dz', with d = |d'|
double tangential_transform(int n, const RadialProfile& g, double d, double t, double rel_tol) {
  if (n == 1) {
    if (d == 0.0) {
      const QuadResult r = quad::half_line([&](double u) { return g(std::hypot(u, t)); }, 0.0, rel_tol);
      quad::require_converged(r, rel_tol, "spectral_kernel (tangential)");
      return 2.0 * r.value;
    }
    const QuadResult r = quad::fourier_cos([&](double u) { return g(std::hypot(u, t)); }, d, std::max(t, 1.0 / d), rel_tol);
    return 2.0 * r.value;
  }
  const double half = 0.5 * n;
  if (d == 0.0) {
    const double sphere = 2.0 * std::pow(pi, half) / std::tgamma(half);
    const QuadResult r =
        quad::half_line([&](double rho) { return std::pow(rho, n - 1) * g(std::hypot(rho, t)); }, 0.0, rel_tol);
    quad::require_converged(r, rel_tol, "spectral_kernel (tangential)");
    return sphere * r.value;
  }
  const double nu = half - 1.0;
  auto integrand = [&](double rho) { return bessel_j(nu, rho * d) * std::pow(rho, half) * g(std::hypot(rho, t)); };
  const ChunkedResult r = chunked_half_line(integrand, pi / d, 1e6, rel_tol);
  if (!r.settled) throw QuadratureError("spectral_kernel (Hankel)", r.value, r.last);
  return std::pow(2.0 * pi, half) * std::pow(d, 1.0 - half) * r.value;
}

}  // namespace

SpectralResult spectral_kernel(const ModelParams& p, const RadialProfile& g, PointRef x, PointRef y,
                               const SpectralOptions& opts) {
  p.validate();
  require_half_space(x, "spectral_kernel");
  require_half_space(y, "spectral_kernel");
  const int n = p.n;
  const double lam = p.lambda;
  const double d = (x.head(n) - y.head(n)).norm();
  const double xs = x(n), ys = y(n);
  const double inner_tol = std::min(1e-10, 1e-3 * opts.rel_tol);

  auto outer = [&](double t) {
    if (t == 0.0) return 0.0;
    return tangential_transform(n, g, d, t, inner_tol) * phi_lambda(lam, xs * t) * phi_lambda(lam, ys * t) *
           std::pow(t, 2.0 * lam);
  };
  // one chunk spans about half an oscillation of the slower Bessel factor
  const double width = std::clamp(pi / std::max(xs, ys), 0.05, 4.0);
  const ChunkedResult r = chunked_half_line(outer, width, opts.z_limit, opts.rel_tol);
  if (!r.settled) throw QuadratureError("spectral_kernel", r.value, r.last);

  SpectralResult out;
  out.value = std::pow(2.0 * pi, -n) * r.value;
  out.truncation_error = std::pow(2.0 * pi, -n) * r.last;
  out.z_cut = r.cut;
  return out;
}

double spectral_diagonal(const ModelParams& p, const RadialProfile& g, PointRef x, const SpectralOptions& opts) {
  return spectral_kernel(p, g, x, x, opts).value;
}

}  // namespace brl::kern
