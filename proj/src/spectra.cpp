#include "brl/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace brl {

SingularValueSeq make_sequence(std::vector<double> values) {
  for (double v : values)
    if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("make_sequence: values must be finite and >= 0");
  std::sort(values.begin(), values.end(), std::greater<>());
  SingularValueSeq s;
  s.values = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  return s;
}

namespace {

std::string describe(const Eigen::MatrixXd& a) {
  std::ostringstream os;
  os << a.rows() << "x" << a.cols() << " matrix, Frobenius norm " << a.norm();
  return os.str();
}

}  // namespace

SingularValueSeq singular_values(const Eigen::MatrixXd& a, SvdMethod method) {
  if (!a.allFinite()) throw std::domain_error("singular_values: non-finite entries in " + describe(a));
  std::vector<double> v;
  if (method == SvdMethod::bdc) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
    if (svd.info() != Eigen::Success) throw std::runtime_error("singular_values: SVD failed for " + describe(a));
    const Eigen::VectorXd& sv = svd.singularValues();
    v.assign(sv.data(), sv.data() + sv.size());
  } else {
    Eigen::MatrixXd g;
    if (a.rows() >= a.cols())
      g.noalias() = a.transpose() * a;
    else
      g.noalias() = a * a.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("singular_values: eigensolver failed for " + describe(a));
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) v.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i))));
  }
  return make_sequence(std::move(v));
}

SingularValueSeq singular_values(const OperatorMatrix& a, SvdMethod method) { return singular_values(a.entries, method); }

double weak_quasinorm(const SingularValueSeq& s, double p) {
  const Eigen::Index k = weak_quasinorm_argmax(s, p);
  return std::pow(static_cast<double>(k + 1), 1.0 / p) * s[k];
}

Eigen::Index weak_quasinorm_argmax(const SingularValueSeq& s, double p) {
  if (s.size() == 0) throw std::invalid_argument("weak_quasinorm: empty sequence");
  if (!(p > 0.0)) throw std::invalid_argument("weak_quasinorm: p must be > 0");
  Eigen::Index best = 0;
  double sup = -1.0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    const double v = std::pow(static_cast<double>(k + 1), 1.0 / p) * s[k];
    if (v > sup) {
      sup = v;
      best = k;
    }
  }
  return best;
}

bool submajorize_check(const SingularValueSeq& g, const SingularValueSeq& f) {
  const Eigen::Index n = std::max(g.size(), f.size());
  double sg = 0, sf = 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    sg += t < g.size() ? g[t] : 0.0;
    sf += t < f.size() ? f[t] : 0.0;
    if (sg > sf) return false;
  }
  return true;
}

IndexWindow default_window(Eigen::Index n, double lo_exp, double hi_exp) {
  if (n <= 0) throw std::invalid_argument("default_window: empty sequence");
  const double N = static_cast<double>(n);
  IndexWindow w;
  w.lo = std::min<Eigen::Index>(static_cast<Eigen::Index>(std::ceil(std::pow(N, lo_exp))), n - 1);
  w.hi = std::min<Eigen::Index>(static_cast<Eigen::Index>(std::floor(std::pow(N, hi_exp))), n - 1);
  return w;
}

WeylFit weyl_fit(const SingularValueSeq& s, double p, IndexWindow window) {
  if (!(p > 0.0)) throw std::invalid_argument("weyl_fit: p must be > 0");
  if (window.lo < 0 || window.hi >= s.size() || window.hi - window.lo < 1)
    throw std::invalid_argument("weyl_fit: window must hold at least two indices inside the sequence");
  const Eigen::Index m = window.hi - window.lo + 1;
  Eigen::VectorXd lx(m), ly(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index k = window.lo + i;
    if (!(s[k] > 0.0)) throw std::domain_error("weyl_fit: zero singular value at index " + std::to_string(k));
    lx(i) = std::log(static_cast<double>(k + 1));
    ly(i) = std::log(s[k]);
  }
  WeylFit fit;
  fit.p = p;
  fit.window = window;

  const double mx = lx.mean(), my = ly.mean();
  const Eigen::VectorXd cx = lx.array() - mx;
  fit.exponent = cx.dot(ly.array().matrix() - Eigen::VectorXd::Constant(m, my)) / cx.squaredNorm();
  const double intercept = my - fit.exponent * mx;
  fit.coefficient = std::exp(intercept);
  fit.residual = std::sqrt((ly.array() - intercept - fit.exponent * lx.array()).square().mean());

  const double pinned = -1.0 / p;
  const double log_c = (ly.array() - pinned * lx.array()).mean();
  fit.pinned_coefficient = std::exp(log_c);
  fit.pinned_residual = std::sqrt((ly.array() - log_c - pinned * lx.array()).square().mean());
  return fit;
}

WeylFit weyl_fit(const SingularValueSeq& s, double p) { return weyl_fit(s, p, default_window(s.size())); }

void write_spectrum_csv(const SingularValueSeq& s, double p, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_spectrum_csv: cannot open " + path.string());
  os << "index,mu,weighted_mu\n" << std::setprecision(17);
  for (Eigen::Index k = 0; k < s.size(); ++k)
    os << k << ',' << s[k] << ',' << std::pow(static_cast<double>(k + 1), 1.0 / p) * s[k] << '\n';
}

}  // namespace brl
