#include "brl/spectra.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <unistd.h>

using namespace brl;

TEST_CASE("singular values of small matrices") {
  const Eigen::Matrix3d d = Eigen::Vector3d(3, 1, 2).asDiagonal();
  for (SvdMethod m : {SvdMethod::bdc, SvdMethod::gram}) {
    const SingularValueSeq s = singular_values(Eigen::MatrixXd(d), m);
    CHECK(s.values.isApprox(Eigen::Vector3d(3, 2, 1), 1e-14));
  }
  const Eigen::Vector4d u(1, 2, 0, -2);
  const Eigen::Vector4d v(0.5, 0.5, 0.5, 0.5);
  const SingularValueSeq r = singular_values(Eigen::MatrixXd(u * v.transpose()));
  CHECK(r[0] == doctest::Approx(3.0));
  CHECK(r.values.tail(3).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("gram and divide-and-conquer agree on the head of the spectrum") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(60, 60);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
  const SingularValueSeq b = singular_values(a, SvdMethod::bdc), q = singular_values(a, SvdMethod::gram);
  CHECK((b.values.head(30) - q.values.head(30)).cwiseAbs().maxCoeff() <= 1e-11 * b[0]);
}

TEST_CASE("non-finite matrices are rejected") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3);
  a(1, 2) = std::nan("");
  CHECK_THROWS(singular_values(a));
  CHECK_THROWS_AS(make_sequence({1.0, -0.5}), std::invalid_argument);
  CHECK(make_sequence({1.0, 3.0, 2.0}).values.isApprox(Eigen::Vector3d(3, 2, 1)));
}

TEST_CASE("weak quasinorm") {
  const SingularValueSeq harmonic = make_sequence({1.0, 0.5, 1.0 / 3.0, 0.25});
  CHECK(weak_quasinorm(harmonic, 1.0) == doctest::Approx(1.0));
  CHECK(weak_quasinorm(harmonic, 2.0) == doctest::Approx(1.0));
  const SingularValueSeq flat = make_sequence({1.0, 1.0, 1.0});
  CHECK(weak_quasinorm(flat, 1.0) == doctest::Approx(3.0));
  CHECK(weak_quasinorm_argmax(flat, 1.0) == 2);
  CHECK(weak_quasinorm(flat, 2.0) == doctest::Approx(std::sqrt(3.0)));
  CHECK_THROWS(weak_quasinorm(make_sequence({}), 2.0));
  CHECK(weak_quasinorm_argmax(harmonic, 1.0) == 0);  // first of the ties
}

TEST_CASE("submajorization examples") {
  CHECK(submajorize_check(make_sequence({2, 1}), make_sequence({3, 0})));
  CHECK_FALSE(submajorize_check(make_sequence({3, 1}), make_sequence({2, 2})));
  CHECK(submajorize_check(make_sequence({1, 1}), make_sequence({2})));  // padded with zeros
  CHECK_FALSE(submajorize_check(make_sequence({2, 1}), make_sequence({2})));
}

TEST_CASE("submajorization is a preorder on random sequences") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto draw = [&] {
    std::vector<double> v(6);
    for (double& x : v) x = u(rng);
    return make_sequence(v);
  };
  int chains = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const SingularValueSeq a = draw(), b = draw(), c = draw();
    CHECK(submajorize_check(a, a));
    if (submajorize_check(a, b) && submajorize_check(b, c)) {
      ++chains;
      CHECK(submajorize_check(a, c));
    }
    // scaling by a factor >= 1 moves a sequence up
    SingularValueSeq big = a;
    big.values *= 1.5;
    CHECK(submajorize_check(a, big));
  }
  CHECK(chains > 0);
}

TEST_CASE("default window") {
  const IndexWindow w = default_window(100);
  CHECK(w.lo == 4);
  CHECK(w.hi == 25);
  const IndexWindow all = default_window(10, 0.0, 1.0);
  CHECK(all.lo == 1);
  CHECK(all.hi == 9);
}

TEST_CASE("Weyl fit of an exact power law") {
  std::vector<double> v;
  for (int k = 0; k < 400; ++k) v.push_back(2.0 * std::pow(k + 1.0, -0.5));
  const SingularValueSeq s = make_sequence(v);
  const WeylFit f = weyl_fit(s, 2.0);
  CHECK(f.exponent == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(f.coefficient == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.pinned_coefficient == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.residual <= 1e-12);
  CHECK(f.pinned_residual <= 1e-12);

  // a different exponent shows up as a pinned residual but not in the free fit
  std::vector<double> w;
  for (int k = 0; k < 400; ++k) w.push_back(std::pow(k + 1.0, -1.0));
  const WeylFit g = weyl_fit(make_sequence(w), 2.0);
  CHECK(g.exponent == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(g.pinned_residual > 0.1);

  CHECK_THROWS_AS(weyl_fit(s, 2.0, IndexWindow{10, 5}), std::invalid_argument);
  CHECK_THROWS_AS(weyl_fit(s, 2.0, IndexWindow{0, 400}), std::invalid_argument);
  CHECK_THROWS_AS(weyl_fit(make_sequence({1, 1, 0, 0}), 2.0, IndexWindow{0, 3}), std::domain_error);
}

TEST_CASE("spectrum CSV") {
  const auto path = std::filesystem::temp_directory_path() / ("brl-spectrum-" + std::to_string(::getpid()) + ".csv");
  write_spectrum_csv(make_sequence({2.0, 1.0}), 2.0, path);
  std::ifstream is(path);
  std::string header, l0, l1;
  std::getline(is, header);
  std::getline(is, l0);
  std::getline(is, l1);
  CHECK(header == "index,mu,weighted_mu");
  CHECK(l0 == "0,2,2");
  CHECK(l1.rfind("1,1,1.414213562373095", 0) == 0);
  std::filesystem::remove(path);
}
