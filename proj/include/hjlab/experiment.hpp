#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hjlab/multitime.hpp"

namespace hjlab {

/// Everything a command needs, parsed from a config file with CLI overrides
/// applied on top. The effective config is echoed into the run manifest, so
/// a run is reproducible from its manifest alone.
struct ExperimentConfig {
  nlohmann::json hamiltonian = {{"kind", "pendulum"}};
  nlohmann::json hamiltonian_g;  // second Hamiltonian for pair commands
  std::string u0 = "zero";
  int n = 512;
  std::vector<double> times{0.0, 1.0};         // solve record times
  double t = 0.25;                             // oracle time
  double s = 0.0;
  std::vector<double> t_grid{0.0, 0.25, 0.5};  // defect grids
  std::vector<double> s_grid{0.0, 0.25, 0.5};
  double T = 20.0;     // critical-value horizon
  double cfl = 0.4;
  double budget = 100.0;  // regularity c11 budget
  double bracket_grad_bound = 3.0;
  int bracket_nx = 256;
  int bracket_np = 256;
  double flow_x = 0.1;
  double flow_p = 0.0;
  double flow_t = 1.0;
  double flow_dt = 1e-3;
  std::string out = "out";

  /// Strict parse: unknown keys and wrong types are config errors.
  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  std::string hash() const;  // FNV-1a of the canonical dump, hex
};

/// Named initial-data catalog: "zero" | "const:c" | "sawtooth" | "cosine" |
/// "pendulum-weak-kam" | "file:path".
GridFunction make_u0(const std::string& spec, int n);
InitialData make_initial_data(const std::string& spec);

/// Run a subcommand, writing artifacts under cfg.out.
/// Throws: std::invalid_argument for config problems, std::runtime_error or
/// std::domain_error for numerical failures.
void run_command(const std::string& command, const ExperimentConfig& cfg);

/// Exception-to-exit-code policy of the CLI: 0 success, 2 config error,
/// 3 numerical failure.
int cli_main(int argc, char** argv);

}  // namespace hjlab
