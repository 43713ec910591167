#include "brl/experiment.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <unistd.h>

using namespace brl;
using namespace brl::experiment;
using nlohmann::json;

namespace {

std::string config_error(const json& j) {
  try {
    config_from_json(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::filesystem::path scratch(const char* name) {
  return std::filesystem::temp_directory_path() / (std::string(name) + "-" + std::to_string(::getpid()));
}

}  // namespace

TEST_CASE("default configuration round-trips through JSON") {
  const ExperimentConfig d = default_config();
  CHECK_NOTHROW(d.validate());
  const json j = to_json(d);
  const ExperimentConfig back = config_from_json(j);
  CHECK(to_json(back) == j);
  CHECK(config_hash(j) == config_hash(to_json(back)));
  CHECK(config_hash(j).size() == 16);
  CHECK(config_from_json(json::object()).points_per_dim == d.points_per_dim);
}

TEST_CASE("config errors name the field") {
  CHECK(config_error({{"bogus", 1}}).rfind("$.bogus: unknown key", 0) == 0);
  CHECK(config_error({{"params", {{"n", 1}, {"lambda", 1.0}, {"k", 2}, {"extra", 0}}}}).rfind("$.params.extra", 0) == 0);
  CHECK(config_error({{"threads", "four"}}).rfind("$.threads: expected an integer", 0) == 0);
  CHECK(config_error({{"seed", -3}}).rfind("$.seed", 0) == 0);
  CHECK(config_error({{"export_matrix", 1}}).rfind("$.export_matrix", 0) == 0);
  CHECK(config_error({{"symbol", {{"kind", "square"}}}}).find("symbol.kind") != std::string::npos);
  CHECK(config_error({{"box", {{"points_per_dim", "many"}}}}).rfind("$.box.points_per_dim", 0) == 0);
  CHECK(config_error({{"params", {{"n", 1}, {"lambda", -1.0}, {"k", 1}}}}).rfind("$.", 0) == 0);
  CHECK(config_error({{"refine", 9}}).find("refine") != std::string::npos);
  CHECK(config_error({{"pipeline", "everything"}}).find("pipeline") != std::string::npos);
  CHECK(config_error({{"svd", "qr"}}).find("svd") != std::string::npos);
}

TEST_CASE("symbols must clear the box for spectra") {
  json j = to_json(default_config());
  j["symbol"]["center"] = {0.1, 1.0};
  CHECK(config_error(j).find("symbol") != std::string::npos);
  j["pipeline"] = "kernel";
  CHECK(config_error(j).empty());
}

TEST_CASE("make_symbol builds each kind") {
  SymbolConfig s;
  s.kind = "gaussian-bump";
  s.center = {0.0, 1.0};
  s.width = {0.5};
  CHECK(make_symbol(s, 2)(Eigen::Vector2d(0.0, 1.0)) == doctest::Approx(1.0));
  s.kind = "coordinate-window";
  s.axis = 2;
  s.window_lo = {-1, 0.5};
  s.window_hi = {1, 2};
  CHECK(make_symbol(s, 2)(Eigen::Vector2d(0.0, 1.5)) == doctest::Approx(1.5));
  CHECK(make_symbol(s, 2)(Eigen::Vector2d(0.0, 3.0)) == 0.0);
  s.kind = "constant";
  s.value = 4.0;
  CHECK(make_symbol(s, 2)(Eigen::Vector2d(9.0, 9.0)) == 4.0);
  s.kind = "cosine-bump";
  s.center = {0.0};
  CHECK_THROWS_AS(make_symbol(s, 2), ConfigError);
}

TEST_CASE("commutator spectra: linearity in f and constants") {
  const ExperimentConfig c = default_config();
  const BoxGrid g = make_grid(c.box, 12);
  const Symbol f = make_symbol(c.symbol, 2);
  const SingularValueSeq s1 = singular_values(commutator_matrix(c.params, g, f, 1));
  const SingularValueSeq s2 = singular_values(commutator_matrix(c.params, g, scaled(f, 2.0), 1));
  CHECK((s2.values - 2.0 * s1.values).cwiseAbs().maxCoeff() <= 1e-13 * s1[0]);
  const SingularValueSeq s3 = singular_values(commutator_matrix(c.params, g, sum(f, constant_symbol(3.0, c.box)), 1));
  CHECK((s3.values - s1.values).cwiseAbs().maxCoeff() <= 1e-12 * s1[0]);
  const SingularValueSeq z = singular_values(commutator_matrix(c.params, g, constant_symbol(1.0, c.box), 1));
  CHECK(z[0] == 0.0);
}

TEST_CASE("commutator spectrum reports a fit") {
  const ExperimentConfig c = default_config();
  SpectrumOptions so;
  so.threads = 1;
  const CommutatorSpectrum r = commutator_spectrum(c.params, make_grid(c.box, 16), make_symbol(c.symbol, 2), so);
  CHECK(r.spectrum.size() == 256);
  CHECK(r.fit.exponent < 0.0);
  CHECK(r.quasinorm > 0.0);
  CHECK(r.quasinorm == doctest::Approx(weak_quasinorm(r.spectrum, 2.0)));
}

TEST_CASE("spectrum pipeline writes its artifacts") {
  ExperimentConfig c = default_config();
  c.points_per_dim = {12, 12};
  c.output_dir = scratch("brl-run").string();
  c.export_matrix = true;
  c.threads = 1;
  const RunReport rep = run(c);
  namespace fs = std::filesystem;
  const fs::path out(c.output_dir);
  CHECK(fs::exists(out / "spectrum.csv"));
  CHECK(fs::exists(out / "fit.json"));
  CHECK(fs::exists(out / "report.json"));
  CHECK(fs::exists(out / "matrix.bin"));
  const MatrixFile m = read_matrix(out / "matrix.bin");
  CHECK(m.entries.rows() == 144);
  std::ifstream is(out / "report.json");
  const json r = json::parse(is);
  CHECK(r.at("config_hash") == rep.config_hash);
  CHECK(r.at("version") == BRL_VERSION);
  CHECK(!rep.assertions.empty());
  fs::remove_all(out);
}

TEST_CASE("sobolev pipeline") {
  ExperimentConfig c = default_config();
  c.pipeline = "sobolev";
  c.output_dir = scratch("brl-sobolev").string();
  const RunReport rep = run(c);
  CHECK(rep.passed());
  CHECK(rep.results.at("ratio").get<double>() > 0.0);
  std::filesystem::remove_all(c.output_dir);
}
