#pragma once

// Configuration-driven pipelines: auxfn, kernel, spectrum, sobolev, ratio, verify.

#include "brl/discretize.hpp"
#include "brl/spectra.hpp"
#include "brl/special_functions.hpp"
#include "brl/symbols.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace brl::experiment {

/// Thrown for invalid configurations; the message starts with the JSON field path.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SymbolConfig {
  std::string kind = "cosine-bump";  // gaussian-bump | cosine-bump | coordinate-window | constant
  std::vector<double> center;        // bumps
  std::vector<double> width;         // one entry (isotropic) or one per axis; gaussian-bump takes one
  double amplitude = 1.0;
  int axis = 1;                      // coordinate-window, 1-based
  std::vector<double> window_lo, window_hi;
  double value = 1.0;                // constant
};

struct ExperimentConfig {
  ModelParams params{1, 1.0, 2};
  Box box;
  std::vector<int> points_per_dim;
  SymbolConfig symbol;
  std::optional<SymbolConfig> symbol2;  // second symbol of the ratio pipeline
  std::string pipeline = "spectrum";
  double fit_lo_exp = 0.3;
  double fit_hi_exp = 0.7;
  double quadrature_rel_tol = 1e-10;
  double spectral_rel_tol = 1e-7;
  std::string output_dir = "out";
  std::size_t node_cap = kDefaultNodeCap;
  std::string svd = "bdc";  // bdc | gram
  bool export_matrix = false;
  int threads = 0;
  std::uint64_t seed = 1;
  int refine = 0;
  int kernel_pairs = 20;
  double exponent_tolerance = 0.1;
  double ratio_tolerance = 0.15;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// n = 1, lambda = 1, k = 2, box [0,1] x [0.5,1.5], 48 x 48, cosine bump at (0.5, 1) of radius 0.3.
ExperimentConfig default_config();

/// Strict parser: unknown keys and wrong types raise ConfigError with the field path.
/// Missing keys keep their defaults.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);

Symbol make_symbol(const SymbolConfig& s, int dim);

struct Assertion {
  std::string name;
  double measured = 0;
  std::string relation;  // "<=", ">=", "=="
  double tolerance = 0;
  bool passed = false;
};

Assertion check_le(std::string name, double measured, double tolerance);
Assertion check_ge(std::string name, double measured, double tolerance);

struct RunReport {
  nlohmann::json config;
  std::string config_hash;
  std::string version;
  std::vector<std::pair<std::string, double>> timings;  // seconds per stage
  nlohmann::json results = nlohmann::json::object();
  std::vector<Assertion> assertions;

  bool passed() const;
  nlohmann::json to_json() const;
};

/// FNV-1a 64 of the compact JSON dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

/// Runs the configured pipeline and writes its artifacts plus report.json into output_dir.
/// `progress` receives one line per finished stage (acceptance criteria for verify).
RunReport run(const ExperimentConfig& config, const std::function<void(const std::string&)>& progress = {});

/// Commutator [R_{lambda,k}, M_f] on the grid, in L_2(m_lambda), with its spectrum and fits.
struct CommutatorSpectrum {
  SingularValueSeq spectrum;
  WeylFit fit;
  double quasinorm = 0;  // weak_quasinorm with p = n + 1
  double diagonal_bias = 0;
  double assembly_seconds = 0;
  double svd_seconds = 0;
};

struct SpectrumOptions {
  int threads = 0;
  SvdMethod svd = SvdMethod::bdc;
  double fit_lo_exp = 0.3;
  double fit_hi_exp = 0.7;
  OperatorMatrix* keep_matrix = nullptr;  // receives the assembled matrix when set
};

OperatorMatrix commutator_matrix(const ModelParams& p, const BoxGrid& grid, const Symbol& f, int threads = 0);
CommutatorSpectrum commutator_spectrum(const ModelParams& p, const BoxGrid& grid, const Symbol& f,
                                       const SpectrumOptions& opts = {});

struct RatioReport {
  double coefficient_f = 0;  // pinned Weyl coefficients
  double coefficient_g = 0;
  double seminorm_f = 0;     // directional seminorms, p = n + 1
  double seminorm_g = 0;
  double coefficient_ratio = 0;
  double seminorm_ratio = 0;
  double relative_gap = 0;   // |C_f/C_g - s_f/s_g| / (s_f/s_g)
  double tolerance = 0;
  bool passed = false;
  WeylFit fit_f, fit_g;
};

/// Both symbols on the same grid and parameters.  Throws std::domain_error
/// when either seminorm is numerically zero.
RatioReport ratio_experiment(const ModelParams& p, const BoxGrid& grid, const Symbol& f, const Symbol& g,
                             double tolerance = 0.15, const SpectrumOptions& opts = {});

}  // namespace brl::experiment
