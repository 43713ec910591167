#pragma once

// Homogeneous Sobolev seminorm and the sphere-averaged directional seminorm
//
//   ||f||^{(k)} = ( int_{box x S^n} |d_k f(x) - s_k <s, grad f(x)>|^p dx ds )^{1/p}

#include "brl/discretize.hpp"
#include "brl/symbols.hpp"

#include <vector>

namespace brl {

/// Quadrature on the unit sphere S^n in R^{n+1}.  Node j is column j of `nodes`.
struct SphereRule {
  int n = 1;
  int degree = 0;  // polynomials up to this total degree are integrated exactly
  Eigen::MatrixXd nodes;
  Eigen::VectorXd weights;
};

/// |S^n| = 2 pi^{(n+1)/2} / Gamma((n+1)/2)
double sphere_area(int n);

/// n = 1: uniform trapezoid rule with max(64, degree + 1) nodes.
/// n >= 2: Gauss-Gegenbauer in the last coordinate times a rule on S^{n-1}
/// (for n = 2 this is Gauss-Legendre in cos theta times uniform phi).
SphereRule sphere_rule(int n, int degree = 20);

/// Exact integral of prod_i s_i^{a_i} over S^n.
double sphere_monomial_integral(const std::vector<int>& exponents);

/// Largest absolute error of the rule over all monomials of total degree <= rule.degree.
double sphere_rule_self_test(const SphereRule& rule);

/// Gauss nodes and weights for the weight (1 - t)^alpha (1 + t)^beta on [-1, 1] (Golub-Welsch).
struct GaussRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};
GaussRule gauss_jacobi(int m, double alpha, double beta);

enum class GradientMode {
  automatic,         // analytic when the symbol has one, finite differences otherwise
  analytic,
  finite_difference  // central with step = cell width (up to sixth order), one-sided in the boundary cells
};

/// Gradient of f at every grid node (columns).  Finite differences require the
/// symbol's support to clear the box boundary by >= 2 cells (std::domain_error otherwise).
Eigen::MatrixXd grid_gradients(const Symbol& f, const BoxGrid& grid, GradientMode mode = GradientMode::automatic);

/// (int_box |grad f|^p dx)^{1/p} by the grid's cell rule.
double sobolev_seminorm(const Symbol& f, double p, const BoxGrid& grid, GradientMode mode = GradientMode::automatic);

/// k is 1-based as in ModelParams.
double directional_seminorm(const Symbol& f, int k, double p, const BoxGrid& grid, const SphereRule& sphere,
                            GradientMode mode = GradientMode::automatic);

struct EquivalenceProbe {
  std::vector<double> ratios;  // directional / sobolev per symbol
  double c1 = 0;               // min ratio
  double c2 = 0;               // max ratio
};

EquivalenceProbe equivalence_probe(const std::vector<Symbol>& symbols, int k, double p, const BoxGrid& grid,
                                   const SphereRule& sphere, GradientMode mode = GradientMode::automatic);

}  // namespace brl
