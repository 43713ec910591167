// brlab: command-line runner for the experiment pipelines.
//
//   brlab <pipeline> [--config cfg.json] [--out dir] [--threads N] [--seed S] [--refine L] [--export-matrix]
//   brlab run --config cfg.json        (pipeline taken from the config)
//   brlab config                       (print the default configuration)
//
// Exit status: 0 all assertions passed, 1 an assertion failed, 2 bad usage or
// configuration, 3 numerical or I/O failure.

#include "brl/experiment.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

using brl::experiment::ConfigError;
using brl::experiment::ExperimentConfig;

struct Overrides {
  std::string config_path;
  std::optional<std::string> out;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
  std::optional<int> refine;
  bool export_matrix = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "output directory (overrides output_dir)");
  cmd->add_option("--threads", o.threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", o.seed, "seed for sampling experiments");
  cmd->add_option("--refine", o.refine, "number of grid-doubling levels")->check(CLI::Range(0, 4));
  cmd->add_flag("--export-matrix", o.export_matrix, "write matrix.bin for the base grid");
}

ExperimentConfig load(const Overrides& o, const std::string& pipeline) {
  nlohmann::json j = nlohmann::json::object();
  if (!o.config_path.empty()) {
    std::ifstream is(o.config_path);
    try {
      j = nlohmann::json::parse(is);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(o.config_path + ": " + e.what());
    }
  }
  if (!pipeline.empty()) j["pipeline"] = pipeline;
  if (o.out) j["output_dir"] = *o.out;
  if (o.threads) j["threads"] = *o.threads;
  if (o.seed) j["seed"] = *o.seed;
  if (o.refine) j["refine"] = *o.refine;
  if (o.export_matrix) j["export_matrix"] = true;
  return brl::experiment::config_from_json(j);
}

int execute(const ExperimentConfig& cfg) {
  const brl::experiment::RunReport rep =
      brl::experiment::run(cfg, [](const std::string& line) { std::cout << line << std::endl; });
  for (const auto& a : rep.assertions)
    std::cout << (a.passed ? "PASS " : "FAIL ") << a.name << ": " << a.measured << ' ' << a.relation << ' '
              << a.tolerance << '\n';
  std::cout << "report: " << cfg.output_dir << "/report.json (config " << rep.config_hash << ")\n";
  return rep.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bessel-Riesz commutator laboratory"};
  app.set_version_flag("--version", BRL_VERSION);
  app.require_subcommand(1);

  Overrides o;
  std::string chosen;
  auto* run = app.add_subcommand("run", "run the pipeline named in the configuration");
  add_common(run, o);
  run->callback([&] { chosen = "run"; });
  for (const char* name : {"auxfn", "kernel", "spectrum", "sobolev", "ratio", "verify"}) {
    auto* cmd = app.add_subcommand(name, std::string("run the ") + name + " pipeline");
    add_common(cmd, o);
    cmd->callback([&chosen, name] { chosen = name; });
  }
  app.add_subcommand("config", "print the default configuration")->callback([&] { chosen = "config"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (chosen == "config") {
      std::cout << brl::experiment::to_json(brl::experiment::default_config()).dump(2) << '\n';
      return 0;
    }
    const ExperimentConfig cfg = load(o, chosen == "run" ? "" : chosen);
    return execute(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
