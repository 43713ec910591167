#include "brl/auxiliary.hpp"

#include "brl/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace brl::aux {

namespace {

double alpha_of(const ModelParams& p) { return p.lambda + p.n / 2.0 + 1.0; }

int slot(AuxIndex idx) {
  if (idx == kF20) return 0;
  if (idx == kF11) return 1;
  return 2;
}

// Tail of the binomial series of (1 - t/2)^{lambda-1} from order j0 on.
double binomial_tail(double lambda, int j0, double t) {
  double term = gen_binomial(lambda - 1.0, j0) * std::pow(-t / 2.0, j0);
  double sum = 0.0;
  for (int j = j0; j < j0 + 400; ++j) {
    sum += term;
    if (term == 0.0 || std::abs(term) < 1e-18 * std::abs(sum)) break;
    term *= (lambda - 1.0 - j) / (j + 1.0) * (-t / 2.0);
  }
  return sum;
}

}  // namespace

void AuxIndex::validate() const {
  if (!(*this == kF20 || *this == kF11 || *this == kF21))
    throw std::invalid_argument("AuxIndex: (k,l) must be (2,0), (1,1) or (2,1), got (" + std::to_string(k) + "," +
                                std::to_string(l) + ")");
}

double theta_integral(double h, double beta, double lambda, int l, double rel_tol) {
  if (!(h > 0.0)) throw std::domain_error("theta_integral: h must be > 0");
  const double h2 = h * h;
  auto f = [=](double th) {
    const double s = std::sin(0.5 * th);
    const double s2 = s * s;
    double v = std::pow(h2 + 4.0 * s2, -beta) * std::pow(std::sin(th), 2.0 * lambda - 1.0);
    if (l > 0) v *= std::pow(2.0 * s2, l);
    return v;
  };
  const auto breaks = quad::geometric_breaks(0.0, std::min(h, 0.5), std::numbers::pi);
  const QuadResult r = quad::piecewise(f, breaks, rel_tol);
  quad::require_converged(r, rel_tol, "theta_integral");
  return r.value;
}

double F_at_zero(AuxIndex idx, const ModelParams& p) {
  idx.validate();
  if (idx == kF20)
    return std::tgamma(p.lambda) * std::tgamma(p.n / 2.0 + 1.0) / (2.0 * std::tgamma(alpha_of(p)));
  return 0.0;
}

double F_slope_at_zero(AuxIndex idx, const ModelParams& p) {
  idx.validate();
  if (idx == kF11)
    return std::tgamma(p.lambda + 1.0) * std::tgamma(p.n / 2.0) / (4.0 * std::tgamma(alpha_of(p)));
  return 0.0;
}

double F(AuxIndex idx, const ModelParams& p, double x) {
  idx.validate();
  if (x < 0.0 || std::isnan(x)) throw std::domain_error("F: argument must be >= 0");
  if (x == 0.0) return F_at_zero(idx, p);
  return std::pow(x, p.n + idx.k) * theta_integral(x, alpha_of(p), p.lambda, idx.l);
}

RightLimit F_right_limit(AuxIndex idx, const ModelParams& p) {
  RightLimit r;
  r.samples = {F(idx, p, 1e-4), F(idx, p, 1e-5), F(idx, p, 1e-6)};
  const double coarse = (10.0 * r.samples[1] - r.samples[0]) / 9.0;
  const double fine = (10.0 * r.samples[2] - r.samples[1]) / 9.0;
  r.value = fine;
  r.cauchy_gap = std::abs(fine - coarse);
  return r;
}

double G(AuxIndex idx, const ModelParams& p, double x) {
  if (x == 0.0) return F_slope_at_zero(idx, p);
  return (F(idx, p, x) - F_at_zero(idx, p)) / x;
}

double a_coeff(int l, int j, const ModelParams& p) {
  if (p.n % 2 != 0) return 0.0;
  const int m = j + l - p.n / 2 - 1;
  if (m < 1) return 0.0;
  return 2.0 * gen_binomial(-alpha_of(p), m);
}

double log_coefficient(int l, int j, const ModelParams& p) {
  if (p.n % 2 != 0) return 0.0;
  const int m = j + l - p.n / 2 - 1;
  if (m < 0) return 0.0;
  return -2.0 * gen_binomial(-alpha_of(p), m);
}

AuxDecomposition::AuxDecomposition(AuxIndex idx, const ModelParams& p) : idx_(idx), p_(p), alpha_(alpha_of(p)) {
  idx.validate();
  p.validate();
  const int jmax = p.n + 2;
  const int base = idx.k + 2 * idx.l - 2;
  p_log_.assign(static_cast<std::size_t>(base + 2 * jmax + 1), 0.0);
  for (int j = 0; j <= jmax; ++j) {
    const double c = ((j % 2) ? -1.0 : 1.0) * std::ldexp(1.0, -(idx.l + 2 * j + 1)) * gen_binomial(p.lambda - 1.0, j);
    c_coeffs_.emplace_back(j, c);
    a_coeffs_.push_back(a_coeff(idx.l, j, p));
    p_log_[static_cast<std::size_t>(base + 2 * j)] += c * a_coeffs_.back();
  }
}

double AuxDecomposition::A(double x) const {
  const double x2 = x * x;
  const double lam = p_.lambda, alpha = alpha_;
  const int l = idx_.l;
  auto f = [=](double th) {
    const double t = 1.0 - std::cos(th);
    double v = std::pow(x2 + 2.0 * t, -alpha) * std::pow(std::sin(th), 2.0 * lam - 1.0);
    if (l > 0) v *= std::pow(t, l);
    return v;
  };
  const QuadResult r = quad::tanh_sinh(f, std::numbers::pi / 3.0, std::numbers::pi);
  quad::require_converged(r, 1e-13, "AuxDecomposition::A");
  return r.value;
}

double AuxDecomposition::B(double x) const {
  const double x2 = x * x;
  const double lam = p_.lambda, alpha = alpha_;
  const int l = idx_.l, j0 = p_.n + 3;
  if (binomial_tail(lam, j0, 0.25) == 0.0) return 0.0;
  auto f = [=](double t) {
    double v = std::pow(x2 + 2.0 * t, -alpha) * std::pow(2.0 * t, lam - 1.0) * binomial_tail(lam, j0, t);
    if (l > 0) v *= std::pow(t, l);
    return v;
  };
  const auto breaks = quad::geometric_breaks(0.0, std::min(x2 / 2.0, 0.125), 0.5);
  const QuadResult r = quad::piecewise(f, breaks);
  quad::require_converged(r, 1e-13, "AuxDecomposition::B");
  return std::pow(x, p_.n) * r.value;
}

double AuxDecomposition::C(int j, double x) const {
  if (!(x > 0.0)) throw std::domain_error("AuxDecomposition::C: x must be > 0");
  const double alpha = alpha_;
  const double e = p_.n / 2.0 - j - idx_.l;
  // int_{x^2}^1 (s+1)^{-alpha} s^e ds with s = e^v
  double inner = 0.0;
  if (x != 1.0) {
    auto f = [=](double v) { return std::pow(std::exp(v) + 1.0, -alpha) * std::exp(v * (e + 1.0)); };
    const double a = 2.0 * std::log(x);
    const QuadResult r = a < 0.0 ? quad::gauss_kronrod(f, a, 0.0) : quad::gauss_kronrod(f, 0.0, a);
    quad::require_converged(r, 1e-13, "AuxDecomposition::C");
    inner = a < 0.0 ? r.value : -r.value;
  }
  const double pw = p_.lambda - 1.0 + j + idx_.l;
  auto g = [=](double u) { return std::pow(1.0 + u, -alpha) * std::pow(u, pw); };
  const QuadResult r = quad::tanh_sinh(g, 0.0, 1.0);
  quad::require_converged(r, 1e-13, "AuxDecomposition::C");
  return std::pow(x, 2 * j) * (inner + r.value);
}

double AuxDecomposition::evaluate(double x) const {
  if (!(x > 0.0)) throw std::domain_error("AuxDecomposition::evaluate: x must be > 0");
  const int n = p_.n, k = idx_.k;
  double sum = 0.0;
  for (const auto& [j, c] : c_coeffs_) {
    if (c != 0.0) sum += c * C(j, x);
  }
  return std::pow(x, n + k) * A(x) + std::pow(x, k) * B(x) + std::pow(x, k + 2 * idx_.l - 2) * sum;
}

double F_derivative_fd(AuxIndex idx, const ModelParams& p, int j, double x) {
  const double h = x * 1e-4;
  switch (j) {
    case 0:
      return F(idx, p, x);
    case 1:
      return (F(idx, p, x + h) - F(idx, p, x - h)) / (2.0 * h);
    case 2:
      return (F(idx, p, x + h) - 2.0 * F(idx, p, x) + F(idx, p, x - h)) / (h * h);
    default:
      throw std::invalid_argument("F_derivative_fd: order must be 0, 1 or 2");
  }
}

DerivativeProbe derivative_bound_probe(AuxIndex idx, const ModelParams& p, int j, const std::vector<double>& xs) {
  DerivativeProbe out;
  out.xs = xs;
  std::sort(out.xs.begin(), out.xs.end());
  int current_decade = std::numeric_limits<int>::min();
  for (double x : out.xs) {
    if (!(x > 0.0)) throw std::domain_error("derivative_bound_probe: sample points must be > 0");
    const double r = std::abs(F_derivative_fd(idx, p, j, x)) * std::pow(x, 2.0 + 2.0 * p.lambda + j - idx.k);
    out.ratios.push_back(r);
    out.sup = std::max(out.sup, r);
    // a decade is [10^d, 10^{d+1}); the small offset keeps exact powers of 10 in the upper decade
    const int d = static_cast<int>(std::floor(std::log10(x) + 1e-12));
    if (d != current_decade) {
      out.decade_sups.push_back(r);
      current_decade = d;
    } else {
      out.decade_sups.back() = std::max(out.decade_sups.back(), r);
    }
  }
  out.bounded = std::isfinite(out.sup);
  double prev_growth = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < out.decade_sups.size(); ++i) {
    const double growth = out.decade_sups[i] / out.decade_sups[i - 1];
    if (growth > prev_growth * (1.0 + 1e-9)) out.bounded = false;
    prev_growth = growth;
  }
  return out;
}

AuxTable::AuxTable(const ModelParams& p, double h_max) : p_(p), h_max_(h_max) {
  p.validate();
  if (!(h_max > 0.0)) throw std::invalid_argument("AuxTable: h_max must be > 0");
  // fine pieces near 0, uniform up to 1, geometric beyond
  std::vector<double> edges{0.0, 1e-3, 4e-3, 1.6e-2, 0.05};
  while (edges.back() < std::min(h_max, 1.0)) edges.push_back(edges.back() + 0.05);
  while (edges.back() < h_max) edges.push_back(edges.back() * 1.05);
  for (AuxIndex idx : kAllIndices) tables_[slot(idx)] = PiecewiseChebyshev([&](double x) { return F(idx, p, x); }, edges);
}

double AuxTable::operator()(AuxIndex idx, double x) const {
  if (x < 0.0 || std::isnan(x)) throw std::domain_error("AuxTable: argument must be >= 0");
  if (x == 0.0) return F_at_zero(idx, p_);
  const PiecewiseChebyshev& t = tables_[slot(idx)];
  if (x >= t.hi()) return F(idx, p_, x);
  return t(x);
}

}  // namespace brl::aux
