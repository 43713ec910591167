#include "brl/kernels.hpp"

#include "brl/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace brl::kern {

double heat_theta_integral(double lambda, double c) {
  if (!(c >= 0.0)) throw std::domain_error("heat_theta_integral: c must be >= 0");
  if (c > 1e4) {
    // theta = u / sqrt(c); the integrand is below exp(-2 u^2 / pi^2) so u <= 40 suffices
    const double rc = std::sqrt(c);
    auto g = [=](double u) {
      const double s = std::sin(0.5 * u / rc);
      return std::exp(-2.0 * c * s * s) * std::pow(rc * std::sin(u / rc), 2.0 * lambda - 1.0);
    };
    const QuadResult r = quad::piecewise(g, std::vector<double>{0.0, 1.0, 4.0, 10.0, 40.0}, 1e-14);
    quad::require_converged(r, 1e-14, "heat_theta_integral");
    return std::pow(c, -lambda) * r.value;
  }
  auto f = [=](double th) {
    const double s = std::sin(0.5 * th);
    return std::exp(-2.0 * c * s * s) * std::pow(std::sin(th), 2.0 * lambda - 1.0);
  };
  const double feature = c > 0.0 ? std::min(0.5, 1.0 / std::sqrt(c)) : 0.5;
  const auto breaks = quad::geometric_breaks(0.0, feature, std::numbers::pi);
  const QuadResult r = quad::piecewise(f, breaks, 1e-14);
  quad::require_converged(r, 1e-14, "heat_theta_integral");
  return r.value;
}

double heat_kernel(const ModelParams& p, double s, PointRef x, PointRef y) {
  if (!(s > 0.0)) throw std::domain_error("heat_kernel: s must be > 0");
  require_half_space(x, "heat_kernel");
  require_half_space(y, "heat_kernel");
  const ModelConstants mc = model_constants(p);
  const int last = p.n;
  const double c = x(last) * y(last) / (2.0 * s * s);
  // combined in the exponent so that s -> 0 gives 0 rather than inf * 0
  const double gauss = std::exp(-(2.0 * p.lambda + 1.0 + p.n) * std::log(s) - (x - y).squaredNorm() / (4.0 * s * s));
  if (gauss == 0.0) return 0.0;
  return mc.heat_norm * gauss * heat_theta_integral(p.lambda, c);
}

HeatKernel::HeatKernel(const ModelParams& p, double s, double c_max) : p_(p), s_(s) {
  if (!(s > 0.0)) throw std::domain_error("HeatKernel: s must be > 0");
  prefactor_ = model_constants(p).heat_norm * std::pow(s, -2.0 * p.lambda - 1.0 - p.n);
  std::vector<double> edges{0.0};
  while (edges.back() < std::min(c_max, 4.0)) edges.push_back(edges.back() + 0.25);
  while (edges.back() < c_max) edges.push_back(edges.back() * 1.25);
  const double lam = p.lambda;
  scaled_ = PiecewiseChebyshev([lam](double c) { return heat_theta_integral(lam, c) * std::pow(1.0 + c, lam); }, edges);
}

double HeatKernel::operator()(PointRef x, PointRef y) const {
  const int last = p_.n;
  const double c = x(last) * y(last) / (2.0 * s_ * s_);
  const double j = c <= scaled_.hi() ? scaled_(c) * std::pow(1.0 + c, -p_.lambda) : heat_theta_integral(p_.lambda, c);
  return prefactor_ * std::exp(-(x - y).squaredNorm() / (4.0 * s_ * s_)) * j;
}

double invsqrt_kernel_closed(const ModelParams& p, PointRef x, PointRef y) {
  require_half_space(x, "invsqrt_kernel_closed");
  require_half_space(y, "invsqrt_kernel_closed");
  const double hv = H(x, y);
  if (hv == 0.0) throw std::domain_error("invsqrt_kernel_closed: coincident points");
  const double beta = p.lambda + p.n / 2.0;
  const int last = p.n;
  return model_constants(p).invsqrt_norm * std::pow(x(last) * y(last), -beta) *
         aux::theta_integral(hv, beta, p.lambda, 0);
}

double invsqrt_kernel_subordination(const ModelParams& p, PointRef x, PointRef y) {
  const double d = (x - y).norm();
  if (d == 0.0) throw std::domain_error("invsqrt_kernel_subordination: coincident points");
  auto f = [&](double s) { return s > 0.0 ? heat_kernel(p, s, x, y) : 0.0; };
  const QuadResult head = quad::tanh_sinh(f, 0.0, d, 1e-11);
  const QuadResult tail = quad::half_line(f, d, 1e-11);
  quad::require_converged(head, 1e-11, "invsqrt_kernel_subordination");
  quad::require_converged(tail, 1e-11, "invsqrt_kernel_subordination");
  return 2.0 / std::sqrt(std::numbers::pi) * (head.value + tail.value);
}

BesselRieszKernel::BesselRieszKernel(const ModelParams& p, const aux::AuxTable* table)
    : p_(p), norm_(model_constants(p).riesz_norm), table_(table) {}

double BesselRieszKernel::F(aux::AuxIndex idx, double x) const {
  return table_ ? (*table_)(idx, x) : aux::F(idx, p_, x);
}

double BesselRieszKernel::operator()(PointRef x, PointRef y) const {
  const int n = p_.n, last = n, k0 = p_.k - 1;
  const double lam = p_.lambda;
  const double hv = H(x, y);
  double sum = F(aux::kF20, hv) * K(k0, lam, x, y);
  if (p_.k == n + 1) {
    const double f11 = F(aux::kF11, hv), f21 = F(aux::kF21, hv);
    const double av = a(x, y), bv = b(x, y), h_last = h(last, x, y);
    for (int l = 0; l <= n; ++l) {
      const double hl = h(l, x, y), kl = K(l, lam, x, y);
      sum += av * hl * f11 * kl - bv * h_last * hl * f21 * kl;
    }
  }
  return -norm_ * sum;
}

double riesz_kernel_bessel(const ModelParams& p, PointRef x, PointRef y) {
  require_half_space(x, "riesz_kernel_bessel");
  require_half_space(y, "riesz_kernel_bessel");
  return BesselRieszKernel(p)(x, y);
}

double riesz_kernel_classical(int l, PointRef x, PointRef y) {
  const double d = detail::distance_checked(x, y, "riesz_kernel_classical");
  const double m = static_cast<double>(x.size());  // n + 1
  const double omega = std::tgamma((m + 1.0) / 2.0) / std::pow(std::numbers::pi, (m + 1.0) / 2.0);
  return omega * (y(l) - x(l)) / std::pow(d, m + 1.0);
}

double commutator_kernel(const KernelFn& base, const Symbol& f, PointRef x, PointRef y) {
  return base(x, y) * (f(y) - f(x));
}

double prop35_rhs_kernel(const ModelParams& p, const Symbol& f, PointRef x, PointRef y, const aux::AuxTable* table) {
  require_half_space(x, "prop35_rhs_kernel");
  require_half_space(y, "prop35_rhs_kernel");
  const int n = p.n, last = n, k0 = p.k - 1;
  const double lam = p.lambda;
  auto F = [&](aux::AuxIndex idx, double v) { return table ? (*table)(idx, v) : aux::F(idx, p, v); };
  const double df = f(y) - f(x);
  auto classical_commutator = [&](int l) { return riesz_kernel_classical(l, x, y) * df; };

  const double hv = H(x, y);
  double sum = F(aux::kF20, hv) * classical_commutator(k0);
  if (p.k == n + 1) {
    const double f11 = F(aux::kF11, hv), f21 = F(aux::kF21, hv);
    const double av = a(x, y), bv = b(x, y), h_last = h(last, x, y);
    for (int l = 0; l <= n; ++l) {
      const double hl = h(l, x, y), cl = classical_commutator(l);
      sum += hl * av * f11 * cl - hl * h_last * bv * f21 * cl;
    }
  }
  // M_{x^{-lambda}} (.) M_{x^{lambda}} on the dx-kernel, then the change to m_lambda
  const double conj = std::pow(x(last), -lam) * std::pow(y(last), lam) / std::pow(y(last), 2.0 * lam);
  return model_constants(p).schur_norm * sum * conj;
}

RatioBoundReport ratio_bound_check(int n, std::size_t accepted_target, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("ratio_bound_check: n must be >= 1");
  const double lo = (3.0 - std::sqrt(5.0)) / 2.0, hi = (3.0 + std::sqrt(5.0)) / 2.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  RatioBoundReport rep;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  rep.max_ratio = 0.0;
  Point x(n + 1), y(n + 1);
  double worst_excess = -std::numeric_limits<double>::infinity();
  while (rep.accepted < accepted_target) {
    ++rep.drawn;
    y(n) = std::exp(6.0 * unit(rng) - 3.0);
    x(n) = y(n) * std::exp(2.4 * unit(rng) - 1.2);
    Eigen::VectorXd dir(n);
    for (int i = 0; i < n; ++i) dir(i) = gauss(rng);
    dir.normalize();
    const double radius = 1.2 * std::sqrt(x(n) * y(n)) * unit(rng);
    for (int i = 0; i < n; ++i) {
      y(i) = 4.0 * unit(rng) - 2.0;
      x(i) = y(i) + radius * dir(i);
    }
    if (H(x, y) > 1.0) continue;
    ++rep.accepted;
    const double r = x(n) / y(n);
    rep.min_ratio = std::min(rep.min_ratio, r);
    rep.max_ratio = std::max(rep.max_ratio, r);
    const double excess = std::max(lo / r, r / hi);
    if (excess > 1.0 + 1e-12) ++rep.violations;
    if (excess > worst_excess) {
      worst_excess = excess;
      rep.worst_x = x;
      rep.worst_y = y;
    }
  }
  rep.passed = rep.violations == 0;
  return rep;
}

TaylorReport taylor_local_check(const ModelParams& p, const Symbol& f, const Box& box, std::uint64_t seed) {
  p.validate();
  box.validate();
  const int n = p.n, last = n, k0 = p.k - 1;
  if (box.dim() != n + 1) throw std::invalid_argument("taylor_local_check: box dimension must be n+1");
  if ((box.hi - box.lo).norm() > box.center()(last))
    throw std::invalid_argument("taylor_local_check: box diameter must not exceed the normal coordinate of its center");

  TaylorReport rep;
  rep.required = (1.0 - n) - 0.2;
  rep.expected_ratio = model_constants(p).schur_norm * aux::F_at_zero(aux::kF20, p);

  constexpr int kPairs = 24;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Point> bases, dirs;
  for (int i = 0; i < kPairs; ++i) {
    Point x(n + 1), u(n + 1);
    for (int d = 0; d <= n; ++d) {
      x(d) = box.lo(d) + (box.hi(d) - box.lo(d)) * unit(rng);
      u(d) = gauss(rng);
    }
    bases.push_back(x);
    dirs.push_back(u.normalized());
  }

  const BesselRieszKernel kr(p);
  for (int m = 3; m <= 10; ++m) {
    const double delta = std::ldexp(1.0, -m);
    double rr = 0.0, wc = 0.0, cc = 0.0;
    for (int i = 0; i < kPairs; ++i) {
      const Point& x = bases[i];
      const Point y = x + delta * dirs[i];
      const double df = f(y) - f(x);
      const double w = kr(x, y) * df * std::pow(x(last) * y(last), p.lambda);
      const double c = riesz_kernel_classical(k0, x, y) * df;
      const double r = w - rep.expected_ratio * c;
      rr += r * r;
      wc += w * c;
      cc += c * c;
    }
    rep.separations.push_back(delta);
    rep.residual_rms.push_back(std::sqrt(rr / kPairs));
    rep.leading_ratios.push_back(cc > 0.0 ? wc / cc : 0.0);
  }

  if (std::all_of(rep.residual_rms.begin(), rep.residual_rms.end(), [](double v) { return v == 0.0; })) {
    rep.zero_residual = true;
    rep.exponent = std::numeric_limits<double>::infinity();
    rep.passed = true;
    return rep;
  }
  const int m = static_cast<int>(rep.separations.size());
  Eigen::MatrixXd A(m, 2);
  Eigen::VectorXd rhs(m);
  for (int i = 0; i < m; ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = std::log(rep.separations[i]);
    rhs(i) = std::log(rep.residual_rms[i]);
  }
  const Eigen::Vector2d coef = A.colPivHouseholderQr().solve(rhs);
  rep.exponent = coef(1);
  rep.passed = rep.exponent >= rep.required;
  return rep;
}

}  // namespace brl::kern
