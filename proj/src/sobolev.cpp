#include "brl/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace brl {

using std::numbers::pi;

double sphere_area(int n) {
  if (n < 0) throw std::invalid_argument("sphere_area: n must be >= 0");
  return 2.0 * std::pow(pi, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1));
}

GaussRule gauss_jacobi(int m, double alpha, double beta) {
  if (m <= 0) throw std::invalid_argument("gauss_jacobi: need at least one node");
  if (!(alpha > -1.0 && beta > -1.0)) throw std::invalid_argument("gauss_jacobi: alpha, beta must be > -1");
  const double ab = alpha + beta;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    const double s = 2.0 * k + ab;
    J(k, k) = k == 0 ? (beta - alpha) / (ab + 2.0) : (beta * beta - alpha * alpha) / (s * (s + 2.0));
    if (k + 1 < m) {
      const double j = k + 1;
      const double t = 2.0 * j + ab;
      // for j = 1 the factor (j + ab) / (t - 1) is cancelled by hand; it is 0/0 when ab = -1
      const double q = k == 0 ? 4.0 * (1.0 + alpha) * (1.0 + beta) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0))
                              : 4.0 * j * (j + alpha) * (j + beta) * (j + ab) / (t * t * (t + 1.0) * (t - 1.0));
      J(k, k + 1) = J(k + 1, k) = std::sqrt(q);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  const double mu0 =
      std::pow(2.0, ab + 1.0) * std::tgamma(alpha + 1.0) * std::tgamma(beta + 1.0) / std::tgamma(ab + 2.0);
  GaussRule r;
  r.nodes = es.eigenvalues();
  r.weights = mu0 * es.eigenvectors().row(0).transpose().array().square();
  return r;
}

SphereRule sphere_rule(int n, int degree) {
  if (n < 1) throw std::invalid_argument("sphere_rule: n must be >= 1");
  if (degree < 0) throw std::invalid_argument("sphere_rule: degree must be >= 0");
  SphereRule r;
  r.n = n;
  r.degree = degree;
  if (n == 1) {
    const int m = std::max(64, degree + 1);
    r.nodes.resize(2, m);
    r.weights = Eigen::VectorXd::Constant(m, 2.0 * pi / m);
    for (int j = 0; j < m; ++j) {
      const double th = 2.0 * pi * j / m;
      r.nodes(0, j) = std::cos(th);
      r.nodes(1, j) = std::sin(th);
    }
    return r;
  }
  // s = (sqrt(1 - t^2) u, t), ds = (1 - t^2)^{(n-2)/2} dt du, u in S^{n-1}
  const SphereRule inner = sphere_rule(n - 1, degree);
  const double a = 0.5 * (n - 2);
  const GaussRule g = gauss_jacobi(degree / 2 + 1, a, a);
  const Eigen::Index mi = inner.weights.size(), mt = g.nodes.size();
  r.nodes.resize(n + 1, mi * mt);
  r.weights.resize(mi * mt);
  for (Eigen::Index i = 0; i < mt; ++i) {
    const double t = g.nodes(i), c = std::sqrt(std::max(0.0, 1.0 - t * t));
    for (Eigen::Index j = 0; j < mi; ++j) {
      const Eigen::Index col = i * mi + j;
      r.nodes.col(col).head(n) = c * inner.nodes.col(j);
      r.nodes(n, col) = t;
      r.weights(col) = g.weights(i) * inner.weights(j);
    }
  }
  return r;
}

double sphere_monomial_integral(const std::vector<int>& exponents) {
  double num = 2.0, b_sum = 0.0;
  for (int e : exponents) {
    if (e < 0) throw std::invalid_argument("sphere_monomial_integral: negative exponent");
    if (e % 2 != 0) return 0.0;
    const double b = 0.5 * (e + 1);
    num *= std::tgamma(b);
    b_sum += b;
  }
  return num / std::tgamma(b_sum);
}

double sphere_rule_self_test(const SphereRule& rule) {
  const int d = rule.n + 1;
  std::vector<int> e(d, 0);
  double worst = 0;
  // enumerate exponent vectors with total degree <= rule.degree
  while (true) {
    double q = 0;
    for (Eigen::Index j = 0; j < rule.weights.size(); ++j) {
      double v = rule.weights(j);
      for (int i = 0; i < d; ++i) v *= std::pow(rule.nodes(i, j), e[i]);
      q += v;
    }
    worst = std::max(worst, std::abs(q - sphere_monomial_integral(e)));
    int i = d - 1;
    for (; i >= 0; --i) {
      ++e[i];
      int total = 0;
      for (int x : e) total += x;
      if (total <= rule.degree) break;
      e[i] = 0;
    }
    if (i < 0) break;
  }
  return worst;
}

namespace {

void require_fd_clearance(const Symbol& f, const BoxGrid& grid) {
  const Eigen::ArrayXd margin = 2.0 * grid.spacing.array();
  const bool inside = (f.support.lo.array() >= grid.bounds.lo.array() + margin).all() &&
                      (f.support.hi.array() <= grid.bounds.hi.array() - margin).all();
  if (!inside)
    throw std::domain_error("grid_gradients: finite differences need the symbol support to clear the box by 2 cells");
}

}  // namespace

Eigen::MatrixXd grid_gradients(const Symbol& f, const BoxGrid& grid, GradientMode mode) {
  if (mode == GradientMode::automatic) mode = f.has_gradient() ? GradientMode::analytic : GradientMode::finite_difference;
  const int d = grid.dim();
  Eigen::MatrixXd out(d, grid.size());
  if (mode == GradientMode::analytic) {
    if (!f.has_gradient()) throw std::domain_error("grid_gradients: symbol has no analytic gradient");
    for (Eigen::Index i = 0; i < grid.size(); ++i) out.col(i) = f.gradient(grid.node(i));
    return out;
  }
  require_fd_clearance(f, grid);
  Eigen::VectorXd y(d);
  auto at = [&](PointRef x, int a, double dx) {
    y = x;
    y(a) += dx;
    return f(y);
  };
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const auto x = grid.node(i);
    for (int a = 0; a < d; ++a) {
      // widest central stencil that fits (orders 6, 4, 2), one-sided in the edge cells
      const double h = grid.spacing(a), lo = grid.bounds.lo(a), hi = grid.bounds.hi(a);
      const auto fits = [&](int m) { return x(a) - m * h >= lo && x(a) + m * h <= hi; };
      const auto diff = [&](int m) { return at(x, a, m * h) - at(x, a, -m * h); };
      if (fits(3))
        out(a, i) = (45.0 * diff(1) - 9.0 * diff(2) + diff(3)) / (60.0 * h);
      else if (fits(2))
        out(a, i) = (8.0 * diff(1) - diff(2)) / (12.0 * h);
      else if (fits(1))
        out(a, i) = diff(1) / (2.0 * h);
      else if (x(a) + h <= hi)
        out(a, i) = (at(x, a, h) - f(x)) / h;
      else
        out(a, i) = (f(x) - at(x, a, -h)) / h;
    }
  }
  return out;
}

double sobolev_seminorm(const Symbol& f, double p, const BoxGrid& grid, GradientMode mode) {
  if (!(p > 1.0)) throw std::invalid_argument("sobolev_seminorm: p must be > 1");
  const Eigen::MatrixXd g = grid_gradients(f, grid, mode);
  double sum = 0;
  for (Eigen::Index i = 0; i < grid.size(); ++i) sum += grid.cell_weights(i) * std::pow(g.col(i).norm(), p);
  return std::pow(sum, 1.0 / p);
}

double directional_seminorm(const Symbol& f, int k, double p, const BoxGrid& grid, const SphereRule& sphere,
                            GradientMode mode) {
  if (!(p > 1.0)) throw std::invalid_argument("directional_seminorm: p must be > 1");
  if (k < 1 || k > grid.dim()) throw std::invalid_argument("directional_seminorm: k out of range");
  if (sphere.n + 1 != grid.dim()) throw std::invalid_argument("directional_seminorm: sphere dimension mismatch");
  const Eigen::MatrixXd g = grid_gradients(f, grid, mode);
  // integrand at sphere node j: d_k f - s_k <s_j, grad f>
  const Eigen::VectorXd sk = sphere.nodes.row(k - 1).transpose();
  double sum = 0;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const Eigen::VectorXd proj = sphere.nodes.transpose() * g.col(i);
    const Eigen::ArrayXd v = (g(k - 1, i) - sk.array() * proj.array()).abs().pow(p);
    sum += grid.cell_weights(i) * sphere.weights.dot(v.matrix());
  }
  return std::pow(sum, 1.0 / p);
}

EquivalenceProbe equivalence_probe(const std::vector<Symbol>& symbols, int k, double p, const BoxGrid& grid,
                                   const SphereRule& sphere, GradientMode mode) {
  if (symbols.empty()) throw std::invalid_argument("equivalence_probe: no symbols");
  EquivalenceProbe r;
  for (const Symbol& f : symbols) {
    const double s = sobolev_seminorm(f, p, grid, mode);
    if (!(s > 0.0)) throw std::domain_error("equivalence_probe: symbol with vanishing seminorm");
    r.ratios.push_back(directional_seminorm(f, k, p, grid, sphere, mode) / s);
  }
  r.c1 = *std::min_element(r.ratios.begin(), r.ratios.end());
  r.c2 = *std::max_element(r.ratios.begin(), r.ratios.end());
  return r;
}

}  // namespace brl
