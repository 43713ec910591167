#include "brl/symbols.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace brl {

void require_half_space(PointRef x, const char* where) {
  if (x.size() < 2 || !(x(x.size() - 1) > 0.0))
    throw std::domain_error(std::string(where) + ": point must lie in the open upper half-space");
}

void Box::validate() const {
  if (lo.size() != hi.size() || lo.size() < 2) throw std::invalid_argument("Box: need matching bounds of dimension >= 2");
  for (int i = 0; i < lo.size(); ++i) {
    if (!(lo(i) < hi(i))) throw std::invalid_argument("Box: degenerate interval on axis " + std::to_string(i));
  }
  if (!(lo(lo.size() - 1) > 0.0)) throw std::invalid_argument("Box: lower bound of the last axis must be > 0");
}

Symbol gaussian_bump(const Point& center, double width, double amplitude) {
  if (!(width > 0.0)) throw std::invalid_argument("gaussian_bump: width must be > 0");
  Symbol s;
  s.kind = "gaussian-bump";
  const double inv = 1.0 / (2.0 * width * width);
  s.value = [=](PointRef x) { return amplitude * std::exp(-(x - center).squaredNorm() * inv); };
  s.gradient = [=](PointRef x) -> Eigen::VectorXd {
    const double v = amplitude * std::exp(-(x - center).squaredNorm() * inv);
    return -2.0 * inv * v * (x - center);
  };
  s.support = {center.array() - 8.0 * width, center.array() + 8.0 * width};
  return s;
}

Symbol cosine_bump(const Point& center, const Eigen::VectorXd& radii, double amplitude) {
  if (radii.size() != center.size() || !(radii.array() > 0.0).all())
    throw std::invalid_argument("cosine_bump: radii must be positive and match the center");
  using std::numbers::pi;
  Symbol s;
  s.kind = "cosine-bump";
  s.value = [=](PointRef x) {
    const double r = ((x - center).array() / radii.array()).matrix().norm();
    if (r >= 1.0) return 0.0;
    const double c = std::cos(0.5 * pi * r);
    return amplitude * c * c;
  };
  s.gradient = [=](PointRef x) -> Eigen::VectorXd {
    const Eigen::VectorXd u = (x - center).array() / radii.array();
    const double r = u.norm();
    if (r >= 1.0 || r == 0.0) return Eigen::VectorXd::Zero(x.size());
    // d/dr cos^2(pi r / 2) = -(pi/2) sin(pi r); dr/dx_i = u_i / (radii_i r)
    const double dr = -0.5 * pi * amplitude * std::sin(pi * r);
    return (dr / r) * (u.array() / radii.array()).matrix();
  };
  s.support = {center - radii, center + radii};
  return s;
}

Symbol coordinate_window(int axis, const Box& window, double amplitude) {
  if (axis < 0 || axis >= window.dim()) throw std::invalid_argument("coordinate_window: axis out of range");
  Symbol s;
  s.kind = "coordinate-window";
  s.value = [=](PointRef x) { return window.contains(x) ? amplitude * x(axis) : 0.0; };
  s.gradient = [=](PointRef x) -> Eigen::VectorXd {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
    if (window.contains(x)) g(axis) = amplitude;
    return g;
  };
  s.support = window;
  return s;
}

Symbol constant_symbol(double c, const Box& where) {
  Symbol s;
  s.kind = "constant";
  s.value = [=](PointRef) { return c; };
  s.gradient = [](PointRef x) -> Eigen::VectorXd { return Eigen::VectorXd::Zero(x.size()); };
  s.support = where;
  return s;
}

Symbol scaled(const Symbol& f, double c) {
  Symbol s = f;
  s.value = [f, c](PointRef x) { return c * f.value(x); };
  if (f.has_gradient()) s.gradient = [f, c](PointRef x) -> Eigen::VectorXd { return c * f.gradient(x); };
  return s;
}

Symbol translated(const Symbol& f, const Eigen::VectorXd& shift) {
  Symbol s = f;
  s.value = [f, shift](PointRef x) { return f.value(x - shift); };
  if (f.has_gradient()) s.gradient = [f, shift](PointRef x) -> Eigen::VectorXd { return f.gradient(x - shift); };
  s.support = {f.support.lo + shift, f.support.hi + shift};
  return s;
}

Symbol sum(const Symbol& f, const Symbol& g) {
  Symbol s;
  s.kind = f.kind + "+" + g.kind;
  s.value = [f, g](PointRef x) { return f.value(x) + g.value(x); };
  if (f.has_gradient() && g.has_gradient())
    s.gradient = [f, g](PointRef x) -> Eigen::VectorXd { return f.gradient(x) + g.gradient(x); };
  s.support = {f.support.lo.cwiseMin(g.support.lo), f.support.hi.cwiseMax(g.support.hi)};
  return s;
}

Eigen::VectorXd fd_gradient(const Symbol& f, PointRef x, double h) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x, xm = x;
  for (int i = 0; i < x.size(); ++i) {
    xp(i) = x(i) + h;
    xm(i) = x(i) - h;
    g(i) = (f.value(xp) - f.value(xm)) / (2.0 * h);
    xp(i) = xm(i) = x(i);
  }
  return g;
}

}  // namespace brl
