#pragma once

// Kernels of g(sqrt(Delta_lambda)) from the joint Fourier / Fourier-Bessel transform:
//
//   K(x,y) = (2 pi)^{-n} int e^{i <z', x' - y'>} phi_lambda(x_{n+1} z_{n+1}) g(|z|) phi_lambda(y_{n+1} z_{n+1}) dm_lambda(z)

#include "brl/special_functions.hpp"
#include "brl/types.hpp"

#include <functional>

namespace brl::kern {

using RadialProfile = std::function<double(double)>;

struct SpectralOptions {
  double rel_tol = 1e-7;
  /// Largest z_{n+1} the outer integral may reach before giving up.
  double z_limit = 4000.0;
};

struct SpectralResult {
  double value = 0;
  double truncation_error = 0;  // size of the last outer chunks past the cutoff
  double z_cut = 0;
};

/// For n = 1 the z' integral is a cosine transform and g may decay slowly
/// (g(r) = 1/r is allowed when x' != y').  For n >= 2 the z' integral is
/// reduced to a Hankel transform and g must decay at least like (1+r)^{-n-2}.
/// Throws QuadratureError when the outer integral has not settled by z_limit.
SpectralResult spectral_kernel(const ModelParams& p, const RadialProfile& g, PointRef x, PointRef y,
                               const SpectralOptions& opts = {});

/// K(x,x) = (2 pi)^{-n} int phi_lambda^2(x_{n+1} z_{n+1}) g(|z|) dm_lambda(z), decaying g.
double spectral_diagonal(const ModelParams& p, const RadialProfile& g, PointRef x, const SpectralOptions& opts = {});

}  // namespace brl::kern
