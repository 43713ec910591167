#include "brl/quadrature.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <numbers>

namespace brl::quad {

namespace {

boost::math::quadrature::tanh_sinh<double>& tanh_sinh_rule() {
  thread_local boost::math::quadrature::tanh_sinh<double> rule(12);
  return rule;
}

boost::math::quadrature::exp_sinh<double>& exp_sinh_rule() {
  thread_local boost::math::quadrature::exp_sinh<double> rule(12);
  return rule;
}

boost::math::quadrature::ooura_fourier_cos<double>& ooura_cos_rule() {
  thread_local boost::math::quadrature::ooura_fourier_cos<double> rule(1e-12, 8);
  return rule;
}

}  // namespace

void require_converged(const QuadResult& r, double rel_tol, const char* where) {
  const double scale = std::max(std::abs(r.value), r.l1);
  if (!std::isfinite(r.value) || r.error > std::sqrt(rel_tol) * scale + 1e-300)
    throw QuadratureError(where, r.value, r.error);
}

QuadResult tanh_sinh(const ScalarFn& f, double a, double b, double rel_tol) {
  QuadResult r;
  if (a == b) return r;
  // the two-argument form reports the distance to the nearer endpoint, which
  // keeps abscissae off the endpoints when |a| or |b| is large
  auto g = [&](double x, double xc) { return f(xc < 0.0 ? a - xc : (xc > 0.0 ? b - xc : x)); };
  r.value = tanh_sinh_rule().integrate(g, a, b, rel_tol, &r.error, &r.l1);
  return r;
}

QuadResult gauss_kronrod(const ScalarFn& f, double a, double b, double rel_tol, unsigned max_depth) {
  QuadResult r;
  if (a == b) return r;
  r.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, rel_tol, &r.error, &r.l1);
  return r;
}

QuadResult piecewise(const ScalarFn& f, std::span<const double> breaks, double rel_tol) {
  QuadResult total;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const QuadResult part = tanh_sinh(f, breaks[i], breaks[i + 1], rel_tol);
    total.value += part.value;
    total.error += part.error;
    total.l1 += part.l1;
  }
  return total;
}

QuadResult half_line(const ScalarFn& f, double a, double rel_tol) {
  QuadResult r;
  r.value = exp_sinh_rule().integrate([&](double t) { return f(t); }, a, std::numeric_limits<double>::infinity(),
                                      rel_tol, &r.error, &r.l1);
  return r;
}

std::vector<double> geometric_breaks(double start, double feature, double end, double ratio) {
  std::vector<double> out{start};
  if (feature > 0.0) {
    for (double b = start + feature; b < end; b = start + (b - start) * ratio) out.push_back(b);
  }
  out.push_back(end);
  return out;
}

QuadResult fourier_cos(const ScalarFn& f, double omega, double feature, double rel_tol) {
  using std::numbers::pi;
  const double period = 2.0 * pi / omega;
  const double cut = period * std::ceil(std::max(4.0 * feature, period) / period);
  const auto breaks = geometric_breaks(0.0, std::min(feature, cut / 4.0), cut);
  QuadResult head = piecewise([&](double t) { return f(t) * std::cos(omega * t); }, breaks, rel_tol);
  // cos(omega (u + cut)) == cos(omega u) since cut is a whole number of periods
  auto [tail, tail_rel] = ooura_cos_rule().integrate([&](double u) { return f(u + cut); }, omega);
  head.value += tail;
  head.error += std::abs(tail) * tail_rel;
  head.l1 += std::abs(tail);
  return head;
}

}  // namespace brl::quad
