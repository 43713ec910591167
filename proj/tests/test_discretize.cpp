#include "brl/discretize.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <unistd.h>

using namespace brl;

namespace {

Box box2(double a0, double b0, double a1, double b1) {
  return Box{Eigen::Vector2d(a0, a1), Eigen::Vector2d(b0, b1)};
}

std::filesystem::path scratch(const char* name) {
  return std::filesystem::temp_directory_path() / (std::string(name) + "-" + std::to_string(::getpid()));
}

}  // namespace

TEST_CASE("midpoint rule on [0,1] with 4 cells") {
  const MidpointRule r = midpoint_rule(0.0, 1.0, 4);
  CHECK(r.nodes.isApprox(Eigen::Vector4d(0.125, 0.375, 0.625, 0.875)));
  CHECK(r.weights.isApprox(Eigen::Vector4d::Constant(0.25)));
  CHECK_THROWS_AS(midpoint_rule(0.0, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(midpoint_rule(1.0, 1.0, 3), std::invalid_argument);
}

TEST_CASE("2 x 2 grid on [0,1] x [1,2]") {
  const BoxGrid g = make_grid(box2(0, 1, 1, 2), 2);
  REQUIRE(g.size() == 4);
  Eigen::MatrixXd want(2, 4);
  want << 0.25, 0.25, 0.75, 0.75,  //
      1.25, 1.75, 1.25, 1.75;
  CHECK(g.nodes.isApprox(want));
  CHECK(g.cell_weights.isApprox(Eigen::Vector4d::Constant(0.25)));
  CHECK(g.flat_index({1, 0}) == 2);
  CHECK(g.cell_weights.sum() == doctest::Approx(1.0));
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(make_grid(box2(0, 1, 0, 1), 4), std::invalid_argument);  // touches the boundary
  CHECK_THROWS_AS(make_grid(box2(0, 1, 1, 2), std::vector<int>{4}), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(box2(0, 1, 1, 2), 200), std::invalid_argument);  // over the node cap
  CHECK_NOTHROW(make_grid(box2(0, 1, 1, 2), 200, 40000));
  const BoxGrid g = make_grid(box2(0, 1, 1, 2), std::vector<int>{3, 5});
  CHECK(g.size() == 15);
  CHECK(g.spacing.isApprox(Eigen::Vector2d(1.0 / 3, 0.2)));
}

TEST_CASE("assembly of a constant kernel") {
  const BoxGrid g = make_grid(box2(0, 1, 1, 2), 3);
  const double lam = 1.5;
  const OperatorMatrix a = assemble([](PointRef, PointRef) { return 1.0; }, g, SpaceTag::weighted, lam);
  const Eigen::VectorXd nu = a.measure_weights();
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    CHECK(nu(i) == doctest::Approx(g.cell_weights(i) * std::pow(g.node(i)(1), 2 * lam)));
    CHECK(a.entries(i, i) == 0.0);  // default diagonal rule
  }
  CHECK(a.entries(0, 1) == doctest::Approx(std::sqrt(nu(0) * nu(1))));
  CHECK(a.action()(0, 1) == doctest::Approx(nu(1)));

  AssemblyOptions opts;
  opts.diagonal = DiagonalRule::evaluate;
  const OperatorMatrix b = assemble([](PointRef, PointRef) { return 1.0; }, g, SpaceTag::weighted, lam, opts);
  CHECK(b.entries(4, 4) == doctest::Approx(nu(4)));
  CHECK(b.report.diagonal_bias == 0.0);
}

TEST_CASE("assembly does not depend on the thread count") {
  const BoxGrid g = make_grid(box2(-1, 1, 0.5, 1.5), 9);
  const KernelFn k = [](PointRef x, PointRef y) { return std::log((x - y).norm()) * x(1) / y(1); };
  AssemblyOptions one, many;
  one.threads = 1;
  many.threads = 4;
  const OperatorMatrix a = assemble(k, g, SpaceTag::weighted, 1.0, one);
  const OperatorMatrix b = assemble(k, g, SpaceTag::weighted, 1.0, many);
  CHECK((a.entries.array() == b.entries.array()).all());
  CHECK(a.report.diagonal_bias > 0.0);
}

TEST_CASE("kernel failures name the node pair") {
  const BoxGrid g = make_grid(box2(0, 1, 1, 2), 2);
  const KernelFn bad = [](PointRef x, PointRef) -> double {
    if (x(0) > 0.5) throw std::domain_error("boom");
    return 1.0;
  };
  AssemblyOptions opts;
  opts.threads = 2;
  try {
    assemble(bad, g, SpaceTag::unweighted, 1.0, opts);
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("boom") != std::string::npos);
    CHECK(msg.find("nodes (2,") != std::string::npos);
  }
}

TEST_CASE("weight conjugation") {
  const BoxGrid g = make_grid(box2(0, 1, 0.5, 1.5), 4);
  const KernelFn k = [](PointRef x, PointRef y) { return std::exp(-(x - y).squaredNorm()) * (1.0 + x(0)); };
  const OperatorMatrix a = assemble(k, g, SpaceTag::weighted, 1.0);
  const OperatorMatrix u = conjugate_weight(a, WeightDirection::to_unweighted);
  CHECK(u.space == SpaceTag::unweighted);
  const OperatorMatrix w = conjugate_weight(u, WeightDirection::to_weighted);
  CHECK(w.space == SpaceTag::weighted);
  CHECK((w.entries - a.entries).cwiseAbs().maxCoeff() <= 1e-15);

  // the action picks up (x_i / x_j)^{lambda}
  const Eigen::MatrixXd ta = a.action(), tu = u.action();
  for (Eigen::Index i = 0; i < g.size(); ++i)
    for (Eigen::Index j = 0; j < g.size(); ++j)
      CHECK(tu(i, j) == doctest::Approx(ta(i, j) * g.node(i)(1) / g.node(j)(1)).epsilon(1e-12));

  CHECK_THROWS_AS(conjugate_weight(a, WeightDirection::to_weighted), std::invalid_argument);

  const OperatorMatrix z = assemble(k, g, SpaceTag::weighted, 0.0);
  CHECK((conjugate_weight(z, WeightDirection::to_unweighted).entries.array() == z.entries.array()).all());
}

TEST_CASE("Schur products") {
  const BoxGrid g = make_grid(box2(0, 1, 0.5, 1.5), 4);
  const KernelFn k = [](PointRef x, PointRef y) { return x(0) - y(1); };
  const OperatorMatrix a = assemble(k, g, SpaceTag::weighted, 1.0);
  const PairSymbol one = [](PointRef, PointRef) { return 1.0; };
  const PairSymbol m1 = [](PointRef x, PointRef y) { return x(1) / y(1); };
  const PairSymbol m2 = [](PointRef x, PointRef y) { return 1.0 / (x - y).norm(); };  // undefined on the diagonal
  CHECK((schur_apply(one, a).entries.array() == a.entries.array()).all());
  const Eigen::MatrixXd ab = schur_apply(m2, schur_apply(m1, a)).entries;
  const Eigen::MatrixXd ba = schur_apply(m1, schur_apply(m2, a)).entries;
  CHECK((ab - ba).cwiseAbs().maxCoeff() <= 1e-15 * ab.cwiseAbs().maxCoeff());
  CHECK(ab.diagonal().isZero());
}

TEST_CASE("matrix export round trip") {
  const BoxGrid g = make_grid(box2(0, 1, 0.5, 1.5), std::vector<int>{3, 2});
  const OperatorMatrix a =
      assemble([](PointRef x, PointRef y) { return x(0) * y(1) + 0.1; }, g, SpaceTag::unweighted, 0.75);
  const auto path = scratch("brl-matrix.bin");
  write_matrix(a, path);
  const MatrixFile m = read_matrix(path);
  CHECK(m.version == 1);
  CHECK(m.space == SpaceTag::unweighted);
  CHECK(m.lambda == 0.75);
  CHECK((m.entries.array() == a.entries.array()).all());
  CHECK(std::filesystem::file_size(path) == 32 + 8 * 36);

  std::ifstream nodes(path.string() + ".nodes.csv");
  std::string header, first;
  std::getline(nodes, header);
  std::getline(nodes, first);
  CHECK(header == "index,x1,x2,cell_weight,measure_weight");
  CHECK(first.rfind("0,", 0) == 0);

  std::filesystem::remove(path);
  std::filesystem::remove(path.string() + ".nodes.csv");
  CHECK_THROWS(read_matrix(path));
}
