#pragma once

// Singular value sequences, weak Schatten quasinorms, submajorization and power-law fits.

#include "brl/discretize.hpp"

#include <filesystem>
#include <vector>

namespace brl {

/// Descending, nonnegative.
struct SingularValueSeq {
  Eigen::VectorXd values;

  Eigen::Index size() const { return values.size(); }
  double operator[](Eigen::Index k) const { return values(k); }
};

/// Sorts descending; throws std::invalid_argument on negative or non-finite entries.
SingularValueSeq make_sequence(std::vector<double> values);

/// bdc: divide-and-conquer SVD (backward stable, default).
/// gram: square roots of the eigenvalues of A^T A; about twice as fast, with
/// absolute error of order eps ||A|| / mu_k on small mu_k, adequate for fits
/// in the head of the spectrum.
enum class SvdMethod { bdc, gram };

SingularValueSeq singular_values(const Eigen::MatrixXd& a, SvdMethod method = SvdMethod::bdc);
SingularValueSeq singular_values(const OperatorMatrix& a, SvdMethod method = SvdMethod::bdc);

/// sup_k (k+1)^{1/p} mu_k
double weak_quasinorm(const SingularValueSeq& s, double p);

/// Index k at which the sup of weak_quasinorm is attained (first one on ties).
Eigen::Index weak_quasinorm_argmax(const SingularValueSeq& s, double p);

/// True iff every prefix sum of g is <= the matching prefix sum of f; the
/// shorter sequence is padded with zeros.
bool submajorize_check(const SingularValueSeq& g, const SingularValueSeq& f);

/// Inclusive index range [lo, hi].
struct IndexWindow {
  Eigen::Index lo = 0;
  Eigen::Index hi = 0;
};

/// [ceil(N^lo_exp), floor(N^hi_exp)], clipped to [0, N-1].
IndexWindow default_window(Eigen::Index n, double lo_exp = 0.3, double hi_exp = 0.7);

struct WeylFit {
  double p = 0;
  double exponent = 0;            // free least-squares slope of log mu_k against log(k+1)
  double coefficient = 0;         // exp(intercept) of the free fit
  double residual = 0;            // RMS log residual of the free fit
  double pinned_coefficient = 0;  // C in mu_k ~ C (k+1)^{-1/p}
  double pinned_residual = 0;
  IndexWindow window;
};

/// Throws std::invalid_argument for an empty or out-of-range window and
/// std::domain_error for zero singular values inside it.
WeylFit weyl_fit(const SingularValueSeq& s, double p, IndexWindow window);
WeylFit weyl_fit(const SingularValueSeq& s, double p);

/// `index,mu,weighted_mu` with weighted_mu = (index+1)^{1/p} mu, 17 significant digits.
void write_spectrum_csv(const SingularValueSeq& s, double p, const std::filesystem::path& path);

}  // namespace brl
