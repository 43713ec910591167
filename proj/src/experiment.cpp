#include "brl/experiment.hpp"

#include "brl/acceptance.hpp"
#include "brl/auxiliary.hpp"
#include "brl/kernels.hpp"
#include "brl/sobolev.hpp"
#include "brl/spectral_kernel.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#ifndef BRL_VERSION
#define BRL_VERSION "dev"
#endif

namespace brl::experiment {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

// --- strict JSON reading -------------------------------------------------------

class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  /// Rejects keys that were never asked for.
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) fail(path_ + "." + it.key(), "unknown key");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& at(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string child(const std::string& key) const { return path_ + "." + key; }

  template <class T>
  void get(const std::string& key, T& out) {
    if (!has(key)) return;
    const json& v = j_.at(key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) fail(child(key), "expected a boolean");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) fail(child(key), "expected an integer");
        if constexpr (std::is_unsigned_v<T>) {
          if (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)
            fail(child(key), "expected a non-negative integer");
        }
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) fail(child(key), "expected a number");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) fail(child(key), "expected a string");
      } else {
        if (!v.is_array()) fail(child(key), "expected an array");
        for (const auto& e : v)
          if (!e.is_number()) fail(child(key), "expected an array of numbers");
      }
      out = v.get<T>();
    } catch (const json::exception& e) {
      fail(child(key), e.what());
    }
  }

  [[noreturn]] static void fail(const std::string& path, const std::string& what) { throw ConfigError(path + ": " + what); }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

SymbolConfig symbol_from_json(const json& j, const std::string& path) {
  Reader r(j, path);
  SymbolConfig s;
  r.get("kind", s.kind);
  r.get("center", s.center);
  if (r.has("width")) {
    const json& w = r.at("width");
    if (w.is_number())
      s.width = {w.get<double>()};
    else
      r.get("width", s.width);
  }
  r.get("amplitude", s.amplitude);
  r.get("axis", s.axis);
  r.get("window_lo", s.window_lo);
  r.get("window_hi", s.window_hi);
  r.get("value", s.value);
  r.finish();
  return s;
}

json symbol_to_json(const SymbolConfig& s) {
  json j{{"kind", s.kind}};
  if (s.kind == "gaussian-bump" || s.kind == "cosine-bump") {
    j["center"] = s.center;
    j["width"] = s.width;
    j["amplitude"] = s.amplitude;
  } else if (s.kind == "coordinate-window") {
    j["axis"] = s.axis;
    j["window_lo"] = s.window_lo;
    j["window_hi"] = s.window_hi;
    j["amplitude"] = s.amplitude;
  } else {
    j["value"] = s.value;
  }
  return j;
}

void validate_symbol(const SymbolConfig& s, int dim, const std::string& path) {
  auto need = [&](const std::vector<double>& v, std::size_t size, const char* field) {
    if (v.size() != size) Reader::fail(path + "." + field, "expected " + std::to_string(size) + " entries");
  };
  if (s.kind == "gaussian-bump") {
    need(s.center, dim, "center");
    need(s.width, 1, "width");
    if (!(s.width[0] > 0.0)) Reader::fail(path + ".width", "must be > 0");
  } else if (s.kind == "cosine-bump") {
    need(s.center, dim, "center");
    if (s.width.size() != 1 && s.width.size() != static_cast<std::size_t>(dim))
      Reader::fail(path + ".width", "expected 1 or " + std::to_string(dim) + " entries");
    for (double w : s.width)
      if (!(w > 0.0)) Reader::fail(path + ".width", "must be > 0");
  } else if (s.kind == "coordinate-window") {
    if (s.axis < 1 || s.axis > dim) Reader::fail(path + ".axis", "must be in [1, " + std::to_string(dim) + "]");
    need(s.window_lo, dim, "window_lo");
    need(s.window_hi, dim, "window_hi");
  } else if (s.kind != "constant") {
    Reader::fail(path + ".kind", "unknown symbol kind '" + s.kind + "'");
  }
}

std::string hex64(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

// --- output helpers ------------------------------------------------------------

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << std::setprecision(17);
  return os;
}

void write_json(const json& j, const std::filesystem::path& path) { open_out(path) << j.dump(2) << '\n'; }

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

json fit_to_json(const WeylFit& f) {
  return {{"exponent", f.exponent},
          {"coefficient", f.coefficient},
          {"pinned_coefficient", f.pinned_coefficient},
          {"window", {f.window.lo, f.window.hi}},
          {"residual", f.residual},
          {"pinned_residual", f.pinned_residual},
          {"p", f.p}};
}

SvdMethod svd_method(const std::string& s) { return s == "gram" ? SvdMethod::gram : SvdMethod::bdc; }

std::vector<int> refined(const std::vector<int>& ppd, int level) {
  std::vector<int> out = ppd;
  for (int& m : out) m <<= level;
  return out;
}

bool is_constant(const SymbolConfig& s) { return s.kind == "constant"; }

// --- pipelines -----------------------------------------------------------------

void pipeline_auxfn(const ExperimentConfig& c, RunReport& rep, Stopwatch& sw) {
  namespace fs = std::filesystem;
  const ModelParams& p = c.params;
  auto csv = open_out(fs::path(c.output_dir) / "auxfn.csv");
  csv << "k,l,x,F,G,F_decomposed,decomposition_residual\n";
  double worst_residual = 0;
  json limits = json::array();
  double worst_limit = 0;
  for (const aux::AuxIndex idx : aux::kAllIndices) {
    const aux::AuxDecomposition dec(idx, p);
    for (int i = 0; i <= 40; ++i) {
      const double x = std::pow(10.0, -3.0 + 0.125 * i);
      const double f = aux::F(idx, p, x);
      double d = kNaN, r = kNaN;
      if (x <= 1.0) {
        d = dec.evaluate(x);
        r = std::abs(d - f);
        worst_residual = std::max(worst_residual, r);
      }
      csv << idx.k << ',' << idx.l << ',' << x << ',' << f << ',' << aux::G(idx, p, x) << ',' << d << ',' << r << '\n';
    }
    const aux::RightLimit lim = aux::F_right_limit(idx, p);
    const double closed = aux::F_at_zero(idx, p);
    const double gap = std::abs(lim.value - closed) / std::max(1.0, std::abs(closed));
    worst_limit = std::max(worst_limit, gap);
    limits.push_back({{"k", idx.k}, {"l", idx.l}, {"numeric", lim.value}, {"closed_form", closed},
                      {"cauchy_gap", lim.cauchy_gap}, {"gap", gap}});
  }
  rep.timings.emplace_back("tabulate", sw.lap());

  json probes = json::array();
  bool all_bounded = true;
  const std::vector<double> xs = [] {
    std::vector<double> v;
    for (int i = 0; i < 24; ++i) v.push_back(std::pow(10.0, 0.125 * i));
    return v;
  }();
  for (const aux::AuxIndex idx : aux::kAllIndices)
    for (int j = 0; j <= 2; ++j) {
      const aux::DerivativeProbe pr = aux::derivative_bound_probe(idx, p, j, xs);
      all_bounded = all_bounded && pr.bounded;
      probes.push_back({{"k", idx.k}, {"l", idx.l}, {"j", j}, {"decade_sups", pr.decade_sups}, {"bounded", pr.bounded}});
    }
  rep.timings.emplace_back("derivative_probe", sw.lap());

  rep.results["right_limits"] = limits;
  rep.results["derivative_probes"] = probes;
  rep.results["max_decomposition_residual"] = worst_residual;
  rep.assertions.push_back(check_le("decomposition_residual", worst_residual, 1e-8));
  rep.assertions.push_back(check_le("right_limit_vs_closed_form", worst_limit, 1e-6));
  rep.assertions.push_back(check_ge("derivative_envelope_bounded", all_bounded ? 1.0 : 0.0, 1.0));
}

void pipeline_kernel(const ExperimentConfig& c, RunReport& rep, Stopwatch& sw) {
  namespace fs = std::filesystem;
  const ModelParams& p = c.params;
  const int d = p.dim();
  std::mt19937_64 rng(c.seed);
  std::vector<std::uniform_real_distribution<double>> axis;
  for (int a = 0; a < d; ++a) axis.emplace_back(c.box.lo(a), c.box.hi(a));
  auto draw = [&] {
    Point x(d);
    for (int a = 0; a < d; ++a) x(a) = axis[a](rng);
    return x;
  };
  const bool spectral = p.n == 1;
  kern::SpectralOptions so;
  so.rel_tol = c.spectral_rel_tol;

  auto csv = open_out(fs::path(c.output_dir) / "kernel.csv");
  for (int a = 0; a < d; ++a) csv << 'x' << a + 1 << ',';
  for (int a = 0; a < d; ++a) csv << 'y' << a + 1 << ',';
  csv << "closed,subordination,spectral,riesz,riesz_fd,rel_closed_subordination,rel_closed_spectral,"
         "rel_subordination_spectral,rel_riesz_fd\n";

  double worst = 0, worst_riesz = 0;
  int accepted = 0;
  while (accepted < c.kernel_pairs) {
    const Point x = draw(), y = draw();
    if ((x - y).norm() < 0.1 * std::min(x(d - 1), y(d - 1))) continue;  // well separated only
    ++accepted;
    const double cl = kern::invsqrt_kernel_closed(p, x, y);
    const double sub = kern::invsqrt_kernel_subordination(p, x, y);
    const double spec = spectral ? kern::spectral_kernel(p, [](double r) { return 1.0 / r; }, x, y, so).value : kNaN;
    const double rz = kern::riesz_kernel_bessel(p, x, y);
    const double h = 1e-5 * std::min(x(d - 1), (x - y).norm());
    Point xp = x, xm = x;
    xp(p.k - 1) += h;
    xm(p.k - 1) -= h;
    const double fd = (kern::invsqrt_kernel_closed(p, xp, y) - kern::invsqrt_kernel_closed(p, xm, y)) / (2.0 * h);
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); };
    const double e1 = rel(cl, sub), e2 = spectral ? rel(cl, spec) : kNaN, e3 = spectral ? rel(sub, spec) : kNaN;
    const double e4 = rel(rz, fd);
    worst = std::max({worst, e1, spectral ? std::max(e2, e3) : 0.0});
    worst_riesz = std::max(worst_riesz, e4);
    for (int a = 0; a < d; ++a) csv << x(a) << ',';
    for (int a = 0; a < d; ++a) csv << y(a) << ',';
    csv << cl << ',' << sub << ',' << spec << ',' << rz << ',' << fd << ',' << e1 << ',' << e2 << ',' << e3 << ','
        << e4 << '\n';
  }
  rep.timings.emplace_back("kernels", sw.lap());
  rep.results["pairs"] = accepted;
  rep.results["spectral_included"] = spectral;
  rep.results["max_pairwise_relative_error"] = worst;
  rep.results["max_riesz_fd_relative_error"] = worst_riesz;
  rep.assertions.push_back(check_le("invsqrt_pairwise_agreement", worst, 1e-3));
  rep.assertions.push_back(check_le("riesz_vs_fd_derivative", worst_riesz, 1e-5));
}

void pipeline_spectrum(const ExperimentConfig& c, RunReport& rep, Stopwatch& sw) {
  namespace fs = std::filesystem;
  const ModelParams& p = c.params;
  const double pw = p.n + 1;
  const Symbol f = make_symbol(c.symbol, p.dim());
  json levels = json::array();
  for (int level = 0; level <= c.refine; ++level) {
    const BoxGrid grid = make_grid(c.box, refined(c.points_per_dim, level), c.node_cap);
    OperatorMatrix kept;
    SpectrumOptions so{c.threads, svd_method(c.svd), c.fit_lo_exp, c.fit_hi_exp,
                       c.export_matrix && level == 0 ? &kept : nullptr};
    const std::string tag = level == 0 ? "" : "_L" + std::to_string(level);
    json lv{{"level", level}, {"points_per_dim", grid.points_per_dim}, {"nodes", grid.size()}};

    if (is_constant(c.symbol)) {
      // the commutator kernel vanishes identically; keep the full pipeline anyway
      const OperatorMatrix a = commutator_matrix(p, grid, f, c.threads);
      const SingularValueSeq s = singular_values(a, svd_method(c.svd));
      write_spectrum_csv(s, pw, fs::path(c.output_dir) / ("spectrum" + tag + ".csv"));
      if (so.keep_matrix) kept = a;
      lv["max_singular_value"] = s[0];
      rep.assertions.push_back(check_le("constant_symbol_spectrum_zero" + tag, s[0], 0.0));
    } else {
      const CommutatorSpectrum cs = commutator_spectrum(p, grid, f, so);
      write_spectrum_csv(cs.spectrum, pw, fs::path(c.output_dir) / ("spectrum" + tag + ".csv"));
      json fj = fit_to_json(cs.fit);
      write_json(fj, fs::path(c.output_dir) / ("fit" + tag + ".json"));
      lv["fit"] = fj;
      lv["weak_quasinorm"] = cs.quasinorm;
      lv["diagonal_bias"] = cs.diagonal_bias;
      lv["assembly_seconds"] = cs.assembly_seconds;
      lv["svd_seconds"] = cs.svd_seconds;
      rep.assertions.push_back(
          check_le("weyl_exponent_deviation" + tag, std::abs(cs.fit.exponent + 1.0 / pw), c.exponent_tolerance));
    }
    if (so.keep_matrix) write_matrix(kept, fs::path(c.output_dir) / "matrix.bin");
    levels.push_back(lv);
    rep.timings.emplace_back("level" + std::to_string(level), sw.lap());
  }
  rep.results["levels"] = levels;
}

void pipeline_sobolev(const ExperimentConfig& c, RunReport& rep, Stopwatch& sw) {
  namespace fs = std::filesystem;
  const ModelParams& p = c.params;
  const double pw = p.n + 1;
  const Symbol f = make_symbol(c.symbol, p.dim());
  const BoxGrid grid = make_grid(c.box, c.points_per_dim, c.node_cap);
  const SphereRule sphere = sphere_rule(p.n);
  const double s = sobolev_seminorm(f, pw, grid);
  const double dk = directional_seminorm(f, p.k, pw, grid, sphere);
  const json out{{"p", pw}, {"k", p.k}, {"seminorm_p", s}, {"directional_k", dk}, {"ratio", s > 0.0 ? dk / s : kNaN}};
  write_json(out, fs::path(c.output_dir) / "sobolev.json");
  rep.results = out;
  rep.timings.emplace_back("seminorms", sw.lap());
}

void pipeline_ratio(const ExperimentConfig& c, RunReport& rep, Stopwatch& sw) {
  namespace fs = std::filesystem;
  const ModelParams& p = c.params;
  const double pw = p.n + 1;
  const Symbol f = make_symbol(c.symbol, p.dim());
  const Symbol g = make_symbol(*c.symbol2, p.dim());
  json levels = json::array();
  for (int level = 0; level <= c.refine; ++level) {
    const BoxGrid grid = make_grid(c.box, refined(c.points_per_dim, level), c.node_cap);
    const SpectrumOptions so{c.threads, svd_method(c.svd), c.fit_lo_exp, c.fit_hi_exp, nullptr};
    const RatioReport r = ratio_experiment(p, grid, f, g, c.ratio_tolerance, so);
    const std::string tag = level == 0 ? "" : "_L" + std::to_string(level);
    levels.push_back({{"level", level},
                      {"nodes", grid.size()},
                      {"coefficient_f", r.coefficient_f},
                      {"coefficient_g", r.coefficient_g},
                      {"seminorm_f", r.seminorm_f},
                      {"seminorm_g", r.seminorm_g},
                      {"coefficient_ratio", r.coefficient_ratio},
                      {"seminorm_ratio", r.seminorm_ratio},
                      {"relative_gap", r.relative_gap},
                      {"fit_f", fit_to_json(r.fit_f)},
                      {"fit_g", fit_to_json(r.fit_g)}});
    auto csv = open_out(fs::path(c.output_dir) / ("ratio" + tag + ".csv"));
    csv << "quantity,f,g,ratio\n";
    csv << "pinned_coefficient," << r.coefficient_f << ',' << r.coefficient_g << ',' << r.coefficient_ratio << '\n';
    csv << "directional_seminorm," << r.seminorm_f << ',' << r.seminorm_g << ',' << r.seminorm_ratio << '\n';
    rep.assertions.push_back(check_le("coefficient_vs_seminorm_ratio" + tag, r.relative_gap, c.ratio_tolerance));
    rep.timings.emplace_back("level" + std::to_string(level), sw.lap());
  }
  rep.results["p"] = pw;
  rep.results["levels"] = levels;
}

using Progress = std::function<void(const std::string&)>;

void pipeline_verify(const ExperimentConfig& c, RunReport& rep, Stopwatch& sw, const Progress& progress) {
  acceptance::Options opts;
  opts.threads = c.threads;
  opts.seed = c.seed;
  json out = json::array();
  const auto each = [&](const acceptance::CriterionResult& r) {
    if (progress) progress(acceptance::format_line(r));
  };
  for (const auto& r : acceptance::run_all(opts, {}, each)) {
    out.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}});
    Assertion a{"criterion_" + std::to_string(r.id), r.measured, r.relation, r.tolerance, r.passed};
    rep.assertions.push_back(a);
  }
  rep.results["criteria"] = out;
  rep.timings.emplace_back("acceptance", sw.lap());
}

}  // namespace

// --- configuration ---------------------------------------------------------------

void ExperimentConfig::validate() const {
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    Reader::fail("params", e.what());
  }
  const int d = params.dim();
  if (box.dim() != d) Reader::fail("box", "expected bounds of dimension " + std::to_string(d));
  try {
    box.validate();
  } catch (const std::invalid_argument& e) {
    Reader::fail("box", e.what());
  }
  if (points_per_dim.size() != static_cast<std::size_t>(d))
    Reader::fail("box.points_per_dim", "expected one count per axis");
  if (refine < 0 || refine > 4) Reader::fail("refine", "must be in [0, 4]");
  std::size_t finest = 1;
  for (int m : points_per_dim) {
    if (m <= 0) Reader::fail("box.points_per_dim", "counts must be positive");
    finest *= static_cast<std::size_t>(m) << refine;
  }
  if (finest > node_cap) Reader::fail("node_cap", "finest grid has " + std::to_string(finest) + " nodes, above the cap");

  static const std::set<std::string> pipelines{"auxfn", "kernel", "spectrum", "sobolev", "ratio", "verify"};
  if (!pipelines.count(pipeline)) Reader::fail("pipeline", "unknown pipeline '" + pipeline + "'");
  validate_symbol(symbol, d, "symbol");
  if (symbol2) validate_symbol(*symbol2, d, "symbol2");
  if (pipeline == "ratio" && !symbol2) Reader::fail("symbol2", "required by the ratio pipeline");

  // symbols must sit at least two cells inside the box
  auto inside = [&](const SymbolConfig& sc, const std::string& path) {
    if (sc.kind == "constant") return;
    const Symbol s = make_symbol(sc, d);
    for (int a = 0; a < d; ++a) {
      const double margin = 2.0 * (box.hi(a) - box.lo(a)) / points_per_dim[a];
      if (s.support.lo(a) < box.lo(a) + margin - 1e-12 || s.support.hi(a) > box.hi(a) - margin + 1e-12)
        Reader::fail(path, "support must clear the box by two cells on axis " + std::to_string(a + 1));
    }
  };
  if (pipeline == "spectrum" || pipeline == "sobolev" || pipeline == "ratio") {
    inside(symbol, "symbol");
    if (symbol2) inside(*symbol2, "symbol2");
  }

  if (!(fit_lo_exp > 0.0 && fit_lo_exp < fit_hi_exp && fit_hi_exp < 1.0))
    Reader::fail("fit", "need 0 < lo_exp < hi_exp < 1");
  if (!(quadrature_rel_tol > 0.0)) Reader::fail("quadrature.rel_tol", "must be > 0");
  if (!(spectral_rel_tol > 0.0)) Reader::fail("quadrature.spectral_rel_tol", "must be > 0");
  if (svd != "bdc" && svd != "gram") Reader::fail("svd", "expected 'bdc' or 'gram'");
  if (threads < 0) Reader::fail("threads", "must be >= 0");
  if (kernel_pairs <= 0) Reader::fail("kernel.pairs", "must be > 0");
  if (!(exponent_tolerance > 0.0)) Reader::fail("tolerances.exponent", "must be > 0");
  if (!(ratio_tolerance > 0.0)) Reader::fail("tolerances.ratio", "must be > 0");
}

ExperimentConfig default_config() {
  ExperimentConfig c;
  c.box.lo = Eigen::Vector2d(0.0, 0.5);
  c.box.hi = Eigen::Vector2d(1.0, 1.5);
  c.points_per_dim = {48, 48};
  c.symbol.kind = "cosine-bump";
  c.symbol.center = {0.5, 1.0};
  c.symbol.width = {0.3};
  return c;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c = default_config();
  Reader r(j, "$");
  if (r.has("params")) {
    Reader pr(r.at("params"), "$.params");
    pr.get("n", c.params.n);
    pr.get("lambda", c.params.lambda);
    pr.get("k", c.params.k);
    pr.finish();
  }
  if (r.has("box")) {
    Reader br(r.at("box"), "$.box");
    std::vector<double> lo = to_std(c.box.lo), hi = to_std(c.box.hi);
    br.get("lo", lo);
    br.get("hi", hi);
    c.box.lo = to_vector(lo);
    c.box.hi = to_vector(hi);
    if (br.has("points_per_dim")) {
      const json& v = br.at("points_per_dim");
      if (v.is_number_integer())
        c.points_per_dim.assign(lo.size(), v.get<int>());
      else if (v.is_array() && std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number_integer(); }))
        c.points_per_dim = v.get<std::vector<int>>();
      else
        Reader::fail("$.box.points_per_dim", "expected an integer or an array of integers");
    } else if (c.points_per_dim.size() != lo.size()) {
      c.points_per_dim.assign(lo.size(), c.points_per_dim.empty() ? 48 : c.points_per_dim.front());
    }
    br.finish();
  }
  if (r.has("symbol")) c.symbol = symbol_from_json(r.at("symbol"), "$.symbol");
  if (r.has("symbol2")) c.symbol2 = symbol_from_json(r.at("symbol2"), "$.symbol2");
  r.get("pipeline", c.pipeline);
  if (r.has("fit")) {
    Reader fr(r.at("fit"), "$.fit");
    fr.get("lo_exp", c.fit_lo_exp);
    fr.get("hi_exp", c.fit_hi_exp);
    fr.finish();
  }
  if (r.has("quadrature")) {
    Reader qr(r.at("quadrature"), "$.quadrature");
    qr.get("rel_tol", c.quadrature_rel_tol);
    qr.get("spectral_rel_tol", c.spectral_rel_tol);
    qr.finish();
  }
  if (r.has("tolerances")) {
    Reader tr(r.at("tolerances"), "$.tolerances");
    tr.get("exponent", c.exponent_tolerance);
    tr.get("ratio", c.ratio_tolerance);
    tr.finish();
  }
  if (r.has("kernel")) {
    Reader kr(r.at("kernel"), "$.kernel");
    kr.get("pairs", c.kernel_pairs);
    kr.finish();
  }
  r.get("output_dir", c.output_dir);
  r.get("node_cap", c.node_cap);
  r.get("svd", c.svd);
  r.get("export_matrix", c.export_matrix);
  r.get("threads", c.threads);
  r.get("seed", c.seed);
  r.get("refine", c.refine);
  r.finish();
  try {
    c.validate();
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    throw ConfigError(what.rfind("$", 0) == 0 ? what : "$." + what);
  }
  return c;
}

json to_json(const ExperimentConfig& c) {
  json j{{"params", {{"n", c.params.n}, {"lambda", c.params.lambda}, {"k", c.params.k}}},
         {"box", {{"lo", to_std(c.box.lo)}, {"hi", to_std(c.box.hi)}, {"points_per_dim", c.points_per_dim}}},
         {"symbol", symbol_to_json(c.symbol)},
         {"pipeline", c.pipeline},
         {"fit", {{"lo_exp", c.fit_lo_exp}, {"hi_exp", c.fit_hi_exp}}},
         {"quadrature", {{"rel_tol", c.quadrature_rel_tol}, {"spectral_rel_tol", c.spectral_rel_tol}}},
         {"tolerances", {{"exponent", c.exponent_tolerance}, {"ratio", c.ratio_tolerance}}},
         {"kernel", {{"pairs", c.kernel_pairs}}},
         {"output_dir", c.output_dir},
         {"node_cap", c.node_cap},
         {"svd", c.svd},
         {"export_matrix", c.export_matrix},
         {"threads", c.threads},
         {"seed", c.seed},
         {"refine", c.refine}};
  if (c.symbol2) j["symbol2"] = symbol_to_json(*c.symbol2);
  return j;
}

Symbol make_symbol(const SymbolConfig& s, int dim) {
  validate_symbol(s, dim, "symbol");
  if (s.kind == "gaussian-bump") return gaussian_bump(to_vector(s.center), s.width[0], s.amplitude);
  if (s.kind == "cosine-bump") {
    const Eigen::VectorXd radii =
        s.width.size() == 1 ? Eigen::VectorXd::Constant(dim, s.width[0]) : to_vector(s.width);
    return cosine_bump(to_vector(s.center), radii, s.amplitude);
  }
  if (s.kind == "coordinate-window")
    return coordinate_window(s.axis - 1, Box{to_vector(s.window_lo), to_vector(s.window_hi)}, s.amplitude);
  const double inf = std::numeric_limits<double>::infinity();
  return constant_symbol(s.value, Box{Eigen::VectorXd::Constant(dim, -inf), Eigen::VectorXd::Constant(dim, inf)});
}

// --- reports -------------------------------------------------------------------

Assertion check_le(std::string name, double measured, double tolerance) {
  return {std::move(name), measured, "<=", tolerance, measured <= tolerance};
}

Assertion check_ge(std::string name, double measured, double tolerance) {
  return {std::move(name), measured, ">=", tolerance, measured >= tolerance};
}

bool RunReport::passed() const {
  return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
}

json RunReport::to_json() const {
  json t = json::object();
  for (const auto& [stage, s] : timings) t[stage] = s;
  json as = json::array();
  for (const auto& a : assertions)
    as.push_back({{"name", a.name}, {"measured", a.measured}, {"relation", a.relation}, {"tolerance", a.tolerance},
                  {"passed", a.passed}});
  return {{"version", version}, {"config_hash", config_hash}, {"config", config}, {"timings", t},
          {"results", results}, {"assertions", as}, {"passed", passed()}};
}

std::string config_hash(const json& config) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : config.dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return hex64(h);
}

RunReport run(const ExperimentConfig& config, const Progress& progress) {
  config.validate();
  std::filesystem::create_directories(config.output_dir);
  RunReport rep;
  rep.config = to_json(config);
  rep.config_hash = config_hash(rep.config);
  rep.version = BRL_VERSION;
  Stopwatch sw;
  const std::string& pl = config.pipeline;
  try {
    if (pl == "auxfn")
      pipeline_auxfn(config, rep, sw);
    else if (pl == "kernel")
      pipeline_kernel(config, rep, sw);
    else if (pl == "spectrum")
      pipeline_spectrum(config, rep, sw);
    else if (pl == "sobolev")
      pipeline_sobolev(config, rep, sw);
    else if (pl == "ratio")
      pipeline_ratio(config, rep, sw);
    else
      pipeline_verify(config, rep, sw, progress);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw std::runtime_error("pipeline '" + pl + "': " + e.what());
  }
  write_json(rep.to_json(), std::filesystem::path(config.output_dir) / "report.json");
  if (progress && pl != "verify")
    for (const auto& [stage, s] : rep.timings) progress(stage + ": " + std::to_string(s) + " s");
  return rep;
}

// --- commutator spectra --------------------------------------------------------

OperatorMatrix commutator_matrix(const ModelParams& p, const BoxGrid& grid, const Symbol& f, int threads) {
  p.validate();
  const Eigen::VectorXd lo = grid.bounds.lo, hi = grid.bounds.hi;
  // largest H over the box: diameter over the smallest normal coordinate
  const double h_max = 1.01 * (hi - lo).norm() / lo(lo.size() - 1);
  const aux::AuxTable table(p, h_max);
  const kern::BesselRieszKernel riesz(p, &table);
  AssemblyOptions opts;
  opts.threads = threads;
  return assemble([&](PointRef x, PointRef y) { return kern::commutator_kernel(riesz, f, x, y); }, grid,
                  SpaceTag::weighted, p.lambda, opts);
}

CommutatorSpectrum commutator_spectrum(const ModelParams& p, const BoxGrid& grid, const Symbol& f,
                                       const SpectrumOptions& opts) {
  CommutatorSpectrum out;
  OperatorMatrix a = commutator_matrix(p, grid, f, opts.threads);
  out.assembly_seconds = a.report.seconds;
  out.diagonal_bias = a.report.diagonal_bias;
  const auto start = std::chrono::steady_clock::now();
  out.spectrum = singular_values(a, opts.svd);
  out.svd_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double pw = p.n + 1;
  out.fit = weyl_fit(out.spectrum, pw, default_window(out.spectrum.size(), opts.fit_lo_exp, opts.fit_hi_exp));
  out.quasinorm = weak_quasinorm(out.spectrum, pw);
  if (opts.keep_matrix) *opts.keep_matrix = std::move(a);
  return out;
}

RatioReport ratio_experiment(const ModelParams& p, const BoxGrid& grid, const Symbol& f, const Symbol& g,
                             double tolerance, const SpectrumOptions& opts) {
  const double pw = p.n + 1;
  const SphereRule sphere = sphere_rule(p.n);
  RatioReport r;
  r.tolerance = tolerance;
  r.seminorm_f = directional_seminorm(f, p.k, pw, grid, sphere);
  r.seminorm_g = directional_seminorm(g, p.k, pw, grid, sphere);
  const double scale = std::max(r.seminorm_f, r.seminorm_g);
  if (!(std::min(r.seminorm_f, r.seminorm_g) > 1e-12 * std::max(scale, 1.0)))
    throw std::domain_error("ratio_experiment: a directional seminorm is numerically zero");
  SpectrumOptions so = opts;
  so.keep_matrix = nullptr;
  const CommutatorSpectrum sf = commutator_spectrum(p, grid, f, so);
  const CommutatorSpectrum sg = commutator_spectrum(p, grid, g, so);
  r.fit_f = sf.fit;
  r.fit_g = sg.fit;
  r.coefficient_f = sf.fit.pinned_coefficient;
  r.coefficient_g = sg.fit.pinned_coefficient;
  r.coefficient_ratio = r.coefficient_f / r.coefficient_g;
  r.seminorm_ratio = r.seminorm_f / r.seminorm_g;
  r.relative_gap = std::abs(r.coefficient_ratio - r.seminorm_ratio) / r.seminorm_ratio;
  r.passed = r.relative_gap <= tolerance;
  return r;
}

}  // namespace brl::experiment
