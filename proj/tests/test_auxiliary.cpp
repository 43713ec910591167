#include "brl/auxiliary.hpp"
#include "brl/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace brl;
using namespace brl::aux;

namespace {

std::vector<ModelParams> models() {
  std::vector<ModelParams> v;
  for (int n : {1, 2, 3})
    for (double lam : {0.5, 1.0, 1.5}) v.push_back({n, lam, 1});
  return v;
}

// The defining t-integral straight from its formula, for lambda >= 1 where the integrand is bounded.
double F_direct(AuxIndex idx, const ModelParams& p, double x) {
  const double beta = p.lambda + p.n / 2.0 + 1.0;
  auto f = [&](double t) {
    return std::pow(x * x + 2.0 * t, -beta) * std::pow(2.0 * t - t * t, p.lambda - 1.0) * std::pow(t, idx.l);
  };
  const double feature = std::min(x * x, 1.0);
  const auto breaks = quad::geometric_breaks(0.0, feature, 2.0);
  return std::pow(x, p.n + idx.k) * quad::piecewise(f, breaks, 1e-13).value;
}

}  // namespace

TEST_CASE("AuxIndex validation") {
  CHECK_NOTHROW(kF20.validate());
  CHECK_THROWS_AS((AuxIndex{1, 0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((AuxIndex{3, 1}).validate(), std::invalid_argument);
}

TEST_CASE("F matches the defining integral") {
  for (double lam : {1.0, 1.5, 2.0})
    for (int n : {1, 2})
      for (AuxIndex idx : kAllIndices)
        for (double x : {0.05, 0.4, 1.0, 3.0}) {
          const ModelParams p{n, lam, 1};
          CHECK(F(idx, p, x) == doctest::Approx(F_direct(idx, p, x)).epsilon(1e-10));
        }
}

TEST_CASE("F_{2,0}(0) closed form") {
  CHECK(F_at_zero(kF20, {1, 1.0, 1}) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  for (const ModelParams& p : models()) {
    const RightLimit lim = F_right_limit(kF20, p);
    CHECK(lim.value == doctest::Approx(F_at_zero(kF20, p)).epsilon(1e-7));
    CHECK(lim.cauchy_gap <= 1e-9);
    // the closed form is also what the samples approach
    for (double x : {1e-2, 1e-3, 1e-4})
      CHECK(std::abs(F(kF20, p, x) - F_at_zero(kF20, p)) <= 10.0 * x * F_at_zero(kF20, p));
  }
}

TEST_CASE("F_{1,1} and F_{2,1} vanish at 0 with the stated slopes") {
  for (const ModelParams& p : models()) {
    CHECK(std::abs(F_right_limit(kF11, p).value) <= 1e-8);
    CHECK(std::abs(F_right_limit(kF21, p).value) <= 1e-8);
    CHECK(F_at_zero(kF11, p) == 0.0);
    const double x = 1e-5;
    CHECK(F(kF11, p, x) / x == doctest::Approx(F_slope_at_zero(kF11, p)).epsilon(1e-3));
    CHECK(std::abs(F(kF21, p, x) / x) <= 1e-3);
  }
}

TEST_CASE("theta form equals the t form") {
  const double h = 0.7, beta = 2.3, lam = 1.5;
  for (int l : {0, 1}) {
    const double direct = quad::tanh_sinh(
                              [&](double t) {
                                return std::pow(h * h + 2 * t, -beta) * std::pow(2 * t - t * t, lam - 1) * std::pow(t, l);
                              },
                              0.0, 2.0)
                              .value;
    CHECK(theta_integral(h, beta, lam, l) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("G is the difference quotient") {
  const ModelParams p{1, 1.0, 1};
  for (AuxIndex idx : kAllIndices)
    CHECK(G(idx, p, 0.3) == doctest::Approx((F(idx, p, 0.3) - F_at_zero(idx, p)) / 0.3).epsilon(1e-12));
}

TEST_CASE("decomposition reproduces F") {
  for (const ModelParams& p : models())
    for (AuxIndex idx : kAllIndices) {
      const AuxDecomposition dec(idx, p);
      for (double x : {0.05, 0.3, 1.0}) CHECK(std::abs(dec.evaluate(x) - F(idx, p, x)) <= 1e-8);
    }
}

TEST_CASE("log coefficient of C_{l,j}") {
  // n = 2, l = 1, j = 1 and n = 4, l = 1, j = 2: the inner integrand is (s + 1)^{-alpha} / s,
  // so C(x) / x^{2j} - c log x must settle with an O(x^2) remainder.
  for (auto [n, j] : {std::pair{2, 1}, std::pair{4, 2}}) {
    const ModelParams p{n, 1.0, 1};
    const double c = log_coefficient(1, j, p);
    CHECK(c == doctest::Approx(-2.0));
    const AuxDecomposition dec(kF11, p);
    auto g = [&](double x) { return dec.C(j, x) / std::pow(x, 2 * j) - c * std::log(x); };
    const double g0 = g(1e-4);
    CHECK(std::abs(g(1e-2) - g0) <= 1e-3);
    CHECK(std::abs(g(1e-3) - g0) <= 1e-5);
  }
  CHECK(log_coefficient(1, 1, {1, 1.0, 1}) == 0.0);
  CHECK(log_coefficient(0, 0, {2, 1.0, 1}) == 0.0);
  // m = 1 for n = 2, l = 1, j = 2: -2 binom(-alpha, 1) = 2 alpha
  CHECK(log_coefficient(1, 2, {2, 1.0, 1}) == doctest::Approx(2.0 * 3.0));
}

TEST_CASE("a_coeff vanishes for odd n and for m < 1") {
  CHECK(a_coeff(1, 2, {3, 1.0, 1}) == 0.0);
  CHECK(a_coeff(1, 1, {2, 1.0, 1}) == 0.0);
  CHECK(a_coeff(1, 2, {2, 1.0, 1}) == doctest::Approx(-log_coefficient(1, 2, {2, 1.0, 1})));
}

TEST_CASE("derivative probe stays bounded") {
  std::vector<double> xs;
  for (int i = 0; i < 16; ++i) xs.push_back(std::pow(10.0, 0.125 * i));
  const DerivativeProbe pr = derivative_bound_probe(kF11, {1, 1.0, 1}, 1, xs);
  CHECK(pr.bounded);
  CHECK(pr.decade_sups.size() == 2);
  CHECK(std::isfinite(pr.sup));
}

TEST_CASE("F_derivative_fd against the slope at a moderate point") {
  const ModelParams p{2, 1.5, 1};
  const double x = 0.8, h = 1e-3;
  const double slope = (F(kF20, p, x + h) - F(kF20, p, x - h)) / (2 * h);
  CHECK(F_derivative_fd(kF20, p, 1, x) == doctest::Approx(slope).epsilon(1e-6));
  CHECK_THROWS(F_derivative_fd(kF20, p, 3, x));
}

TEST_CASE("AuxTable reproduces F") {
  const ModelParams p{1, 1.0, 2};
  const AuxTable t(p, 5.0);
  for (AuxIndex idx : kAllIndices)
    for (double x : {0.0, 1e-3, 0.1, 0.77, 2.0, 4.99, 7.0})
      CHECK(std::abs(t(idx, x) - F(idx, p, x)) <= 1e-12 * std::max(1.0, std::abs(F(idx, p, x))));
}
