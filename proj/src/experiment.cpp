#include "hjlab/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "hjlab/io.hpp"
#include "hjlab/weak_kam.hpp"

namespace fs = std::filesystem;

namespace hjlab {

namespace {

double as_double(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number())
    throw std::invalid_argument("config: '" + key + "' must be a number");
  return v.get<double>();
}

int as_int(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number_integer())
    throw std::invalid_argument("config: '" + key + "' must be an integer");
  return v.get<int>();
}

std::string as_string(const nlohmann::json& v, const std::string& key) {
  if (!v.is_string())
    throw std::invalid_argument("config: '" + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<double> as_times(const nlohmann::json& v, const std::string& key) {
  if (!v.is_array())
    throw std::invalid_argument("config: '" + key + "' must be an array");
  std::vector<double> out;
  for (const auto& e : v) {
    const double t = as_double(e, key);
    if (!(t >= 0.0) || !std::isfinite(t))
      throw std::invalid_argument("config: '" + key + "' entries must be >= 0");
    out.push_back(t);
  }
  return out;
}

bool power_of_two_in_range(int n) {
  return n >= 64 && n <= 8192 && (n & (n - 1)) == 0;
}

uint64_t fnv1a(std::string_view s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  atomic_write_text(path, j.dump(2) + "\n");
}

nlohmann::json manifest_base(const std::string& command,
                             const ExperimentConfig& cfg) {
  return {{"command", command},
          {"config", cfg.to_json()},
          {"config_hash", cfg.hash()},
          {"grid", cfg.n}};
}

void record_params(nlohmann::json& manifest, const SolveParams& params,
                   double dx) {
  manifest["P"] = params.grad_bound;
  manifest["theta"] = params.theta;
  manifest["dt"] = time_step(params, dx);
}

fs::path prepare_out(const ExperimentConfig& cfg) {
  fs::path dir(cfg.out);
  fs::create_directories(dir);
  return dir;
}

void cmd_solve(const ExperimentConfig& cfg) {
  const Hamiltonian1D h = Hamiltonian1D::from_json(cfg.hamiltonian);
  const GridFunction u0 = make_u0(cfg.u0, cfg.n);
  SolveParams params = make_params(h, u0, cfg.cfl);
  params.record_times = cfg.times;
  const TimeSlab slab = evolve_record(h, u0, params);

  const fs::path dir = prepare_out(cfg);
  nlohmann::json manifest = manifest_base("solve", cfg);
  record_params(manifest, params, u0.dx());
  nlohmann::json outputs = nlohmann::json::array();
  for (size_t k = 0; k < slab.times.size(); ++k) {
    const std::string name = "u_" + std::to_string(k) + ".csv";
    write_csv(dir / name, slab.slice(static_cast<int>(k)));
    outputs.push_back({{"time", slab.times[k]}, {"file", name}});
  }
  manifest["outputs"] = outputs;
  write_json(dir / "manifest.json", manifest);
}

void cmd_oracle(const ExperimentConfig& cfg) {
  const Hamiltonian1D h = Hamiltonian1D::from_json(cfg.hamiltonian);
  if (h.name() != "kinetic")
    throw std::invalid_argument("oracle: closed form only covers H = p^2/2");
  if (!(cfg.t > 0.0))
    throw std::invalid_argument("oracle: need t > 0");
  const GridFunction u0 = make_u0(cfg.u0, cfg.n);
  const GridFunction reference = hopf_lax(u0, cfg.t);
  const SolveParams params = make_params(h, u0, cfg.cfl);
  const GridFunction scheme = evolve(h, u0, cfg.t, params);
  const double sup_error = sup_dist(scheme, reference);
  const double tolerance = 3.0 * std::sqrt(u0.dx());

  const fs::path dir = prepare_out(cfg);
  write_csv(dir / "oracle.csv", reference);
  std::string rows = "x,u_scheme,u_oracle,abs_err\n";
  for (int j = 0; j < u0.size(); ++j) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", u0.node(j),
                  scheme[j], reference[j], std::abs(scheme[j] - reference[j]));
    rows += buf;
  }
  atomic_write_text(dir / "compare.csv", rows);

  nlohmann::json manifest = manifest_base("oracle", cfg);
  record_params(manifest, params, u0.dx());
  manifest["t"] = cfg.t;
  manifest["sup_error"] = sup_error;
  manifest["tolerance"] = tolerance;
  manifest["within_tolerance"] = sup_error <= tolerance;
  manifest["outputs"] = {"oracle.csv", "compare.csv"};
  write_json(dir / "manifest.json", manifest);
}

void cmd_defect(const ExperimentConfig& cfg) {
  if (!cfg.hamiltonian_g.is_object())
    throw std::invalid_argument("defect: config needs \"hamiltonian_g\"");
  const Hamiltonian1D h = Hamiltonian1D::from_json(cfg.hamiltonian);
  const Hamiltonian1D g = Hamiltonian1D::from_json(cfg.hamiltonian_g);
  const InitialData u0 = make_initial_data(cfg.u0);

  const fs::path dir = prepare_out(cfg);
  nlohmann::json manifest = manifest_base("defect", cfg);

  // Run the verdict machinery when the pair qualifies for it; otherwise the
  // defect matrix alone is the result.
  const bool tags_fit =
      h.convexity() == Convexity::tonelli_convex &&
      Hamiltonian1D::negate(g).convexity() == Convexity::tonelli_convex;
  nlohmann::json report_json;
  if (tags_fit) {
    const GridFunction probe = u0(cfg.n);
    const SolveParams pair = make_pair_params(h, g, probe, cfg.cfl);
    record_params(manifest, pair, probe.dx());
    if (poisson_bracket_sup(h, g, pair.grad_bound) <= 1e-8) {
      VerdictOptions opts;
      opts.n = cfg.n;
      opts.cfl = cfg.cfl;
      opts.t_grid = cfg.t_grid;
      opts.s_grid = cfg.s_grid;
      report_json = multitime_verdict(h, g, u0, opts).to_json();
    }
  }
  if (report_json.is_null()) {
    MultiTimeReport report = commutation_defect_refined(
        h, g, u0, cfg.n, cfg.t_grid, cfg.s_grid, cfg.cfl);
    report_json = report.to_json();
    report_json["verdict"] = "not_applicable";
  }
  write_json(dir / "defect.json", report_json);
  manifest["outputs"] = {"defect.json"};
  write_json(dir / "manifest.json", manifest);
}

void cmd_critical(const ExperimentConfig& cfg) {
  const Hamiltonian1D h = Hamiltonian1D::from_json(cfg.hamiltonian);
  const GridFunction u0 = make_u0(cfg.u0, cfg.n);
  const WeakKamReport report = critical_value(h, u0, cfg.T, cfg.cfl);

  const fs::path dir = prepare_out(cfg);
  write_json(dir / "critical.json", report.to_json());
  nlohmann::json manifest = manifest_base("critical", cfg);
  record_params(manifest, make_params(h, u0, cfg.cfl), u0.dx());
  manifest["T"] = cfg.T;
  manifest["outputs"] = {"critical.json"};
  write_json(dir / "manifest.json", manifest);
}

void cmd_bracket(const ExperimentConfig& cfg) {
  if (!cfg.hamiltonian_g.is_object())
    throw std::invalid_argument("bracket: config needs \"hamiltonian_g\"");
  const Hamiltonian1D h = Hamiltonian1D::from_json(cfg.hamiltonian);
  const Hamiltonian1D g = Hamiltonian1D::from_json(cfg.hamiltonian_g);
  const double sup = poisson_bracket_sup(h, g, cfg.bracket_grad_bound,
                                         cfg.bracket_nx, cfg.bracket_np);
  const fs::path dir = prepare_out(cfg);
  write_json(dir / "bracket.json", {{"bracket_sup", sup},
                                    {"grad_bound", cfg.bracket_grad_bound},
                                    {"nx", cfg.bracket_nx},
                                    {"np", cfg.bracket_np}});
  nlohmann::json manifest = manifest_base("bracket", cfg);
  manifest["outputs"] = {"bracket.json"};
  write_json(dir / "manifest.json", manifest);
}

void cmd_flow(const ExperimentConfig& cfg) {
  const Hamiltonian1D h = Hamiltonian1D::from_json(cfg.hamiltonian);
  const FlowState start{cfg.flow_x, cfg.flow_p};
  const FlowState end = integrate_flow(h, start, cfg.flow_t, cfg.flow_dt);
  const double e0 = h.eval(start.x, start.p);
  const double e1 = h.eval(end.x, end.p);

  const fs::path dir = prepare_out(cfg);
  write_json(dir / "flow.json", {{"x0", start.x},
                                 {"p0", start.p},
                                 {"t", cfg.flow_t},
                                 {"dt", cfg.flow_dt},
                                 {"x", end.x},
                                 {"p", end.p},
                                 {"energy_start", e0},
                                 {"energy_end", e1},
                                 {"energy_drift", std::abs(e1 - e0)}});
  nlohmann::json manifest = manifest_base("flow", cfg);
  manifest["outputs"] = {"flow.json"};
  write_json(dir / "manifest.json", manifest);
}

void cmd_regularity(const ExperimentConfig& cfg) {
  const GridFunction coarse = make_u0(cfg.u0, cfg.n);
  const GridFunction fine = make_u0(cfg.u0, 2 * cfg.n);
  const RegularityReport at_n = regularity(coarse, cfg.budget);
  const RegularityReport at_2n = regularity(fine, cfg.budget);

  const fs::path dir = prepare_out(cfg);
  write_json(dir / "regularity.json",
             {{"at_n", at_n.to_json()},
              {"at_2n", at_2n.to_json()},
              {"c11_certified", c11_certified(at_n, at_2n)}});
  nlohmann::json manifest = manifest_base("regularity", cfg);
  manifest["outputs"] = {"regularity.json"};
  write_json(dir / "manifest.json", manifest);
}

void cmd_pendulum_demo(const ExperimentConfig& cfg) {
  const fs::path dir = prepare_out(cfg);
  const Hamiltonian1D h = Hamiltonian1D::pendulum();
  const Hamiltonian1D g = Hamiltonian1D::negate(h);

  VerdictOptions opts;
  opts.n = cfg.n;
  opts.cfl = cfg.cfl;
  const MultiTimeVerdict verdict =
      multitime_verdict(h, g, make_initial_data("zero"), opts);
  write_json(dir / "defect.json", verdict.to_json());

  const RegularityReport reg_n = regularity(pendulum_weak_kam(cfg.n), cfg.budget);
  const RegularityReport reg_2n =
      regularity(pendulum_weak_kam(2 * cfg.n), cfg.budget);
  write_json(dir / "regularity.json",
             {{"at_n", reg_n.to_json()},
              {"at_2n", reg_2n.to_json()},
              {"c11_certified", c11_certified(reg_n, reg_2n)}});

  const WeakKamReport critical =
      critical_value(h, GridFunction::zeros(cfg.n), 20.0, cfg.cfl);
  write_json(dir / "critical.json", critical.to_json());

  // The zero section folds under the pendulum flow by t = 1: direct evidence
  // that no Lipschitz graph stays invariant.
  const TransverseResult fold = transverse_check(
      h, Eigen::ArrayXd::Zero(cfg.n), {1.0}, 1e-2, cfg.flow_dt);
  write_json(dir / "fold.json", fold.to_json());

  nlohmann::json summary = manifest_base("pendulum-demo", cfg);
  summary["verdict"] = verdict.kind == VerdictKind::exists_evidence
                           ? "exists_evidence"
                           : "nonexistence_evidence";
  summary["critical_value"] = critical.c_estimate;
  summary["c11_certified"] = c11_certified(reg_n, reg_2n);
  summary["fold_detected"] = !fold.graph_per_time.empty() && !fold.graph_per_time[0];
  summary["outputs"] = {"defect.json", "regularity.json", "critical.json",
                        "fold.json"};
  write_json(dir / "summary.json", summary);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object())
    throw std::invalid_argument("config: expected a JSON object");
  ExperimentConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "hamiltonian") {
      cfg.hamiltonian = value;
    } else if (key == "hamiltonian_g") {
      cfg.hamiltonian_g = value;
    } else if (key == "u0") {
      cfg.u0 = as_string(value, key);
    } else if (key == "n") {
      cfg.n = as_int(value, key);
    } else if (key == "times") {
      cfg.times = as_times(value, key);
    } else if (key == "t") {
      cfg.t = as_double(value, key);
    } else if (key == "s") {
      cfg.s = as_double(value, key);
    } else if (key == "t_grid") {
      cfg.t_grid = as_times(value, key);
    } else if (key == "s_grid") {
      cfg.s_grid = as_times(value, key);
    } else if (key == "T") {
      cfg.T = as_double(value, key);
    } else if (key == "cfl") {
      cfg.cfl = as_double(value, key);
    } else if (key == "budget") {
      cfg.budget = as_double(value, key);
    } else if (key == "bracket_grad_bound") {
      cfg.bracket_grad_bound = as_double(value, key);
    } else if (key == "bracket_nx") {
      cfg.bracket_nx = as_int(value, key);
    } else if (key == "bracket_np") {
      cfg.bracket_np = as_int(value, key);
    } else if (key == "flow_x") {
      cfg.flow_x = as_double(value, key);
    } else if (key == "flow_p") {
      cfg.flow_p = as_double(value, key);
    } else if (key == "flow_t") {
      cfg.flow_t = as_double(value, key);
    } else if (key == "flow_dt") {
      cfg.flow_dt = as_double(value, key);
    } else if (key == "out") {
      cfg.out = as_string(value, key);
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  if (!power_of_two_in_range(cfg.n))
    throw std::invalid_argument("config: n must be a power of two in [64, 8192]");
  if (!(cfg.cfl > 0.0) || !(cfg.cfl <= 0.5))
    throw std::invalid_argument("config: cfl must lie in (0, 0.5]");
  return cfg;
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["hamiltonian"] = hamiltonian;
  if (hamiltonian_g.is_object()) j["hamiltonian_g"] = hamiltonian_g;
  j["u0"] = u0;
  j["n"] = n;
  j["times"] = times;
  j["t"] = t;
  j["s"] = s;
  j["t_grid"] = t_grid;
  j["s_grid"] = s_grid;
  j["T"] = T;
  j["cfl"] = cfl;
  j["budget"] = budget;
  j["bracket_grad_bound"] = bracket_grad_bound;
  j["bracket_nx"] = bracket_nx;
  j["bracket_np"] = bracket_np;
  j["flow_x"] = flow_x;
  j["flow_p"] = flow_p;
  j["flow_t"] = flow_t;
  j["flow_dt"] = flow_dt;
  j["out"] = out;
  return j;
}

std::string ExperimentConfig::hash() const {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(to_json().dump())));
  return buf;
}

GridFunction make_u0(const std::string& spec, int n) {
  if (spec == "zero") return GridFunction::zeros(n);
  if (spec == "sawtooth") return GridFunction::sawtooth(n);
  if (spec == "cosine") return GridFunction::cosine(n);
  if (spec == "pendulum-weak-kam") return pendulum_weak_kam(n);
  if (spec.rfind("const:", 0) == 0) {
    try {
      size_t used = 0;
      const double c = std::stod(spec.substr(6), &used);
      if (used != spec.size() - 6 || !std::isfinite(c))
        throw std::invalid_argument(spec);
      return GridFunction::constant(n, c);
    } catch (const std::exception&) {
      throw std::invalid_argument("u0: bad constant in '" + spec + "'");
    }
  }
  if (spec.rfind("file:", 0) == 0) {
    GridFunction u = read_csv_grid(spec.substr(5));
    if (u.size() != n)
      throw std::invalid_argument("u0: file grid (" + std::to_string(u.size()) +
                                  ") does not match n = " + std::to_string(n));
    return u;
  }
  throw std::invalid_argument("u0: unknown spec '" + spec + "'");
}

InitialData make_initial_data(const std::string& spec) {
  return [spec](int n) { return make_u0(spec, n); };
}

void run_command(const std::string& command, const ExperimentConfig& cfg) {
  if (command == "solve") return cmd_solve(cfg);
  if (command == "oracle") return cmd_oracle(cfg);
  if (command == "defect") return cmd_defect(cfg);
  if (command == "critical") return cmd_critical(cfg);
  if (command == "bracket") return cmd_bracket(cfg);
  if (command == "flow") return cmd_flow(cfg);
  if (command == "regularity") return cmd_regularity(cfg);
  if (command == "pendulum-demo") return cmd_pendulum_demo(cfg);
  throw std::invalid_argument("unknown command '" + command + "'");
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Hamilton-Jacobi evolution experiments on the torus"};
  app.require_subcommand(1);

  std::string config_path, u0_override, out_override;
  int n_override = 0;
  double t_override = std::nan("");
  double s_override = std::nan("");
  double big_t_override = std::nan("");
  double cfl_override = 0.0;

  const std::pair<const char*, const char*> commands[] = {
      {"solve", "evolve an initial datum and dump snapshots"},
      {"oracle", "variational reference solution for H = p^2/2"},
      {"defect", "commutation defect of two evolution orders"},
      {"critical", "large-time critical-value estimate"},
      {"bracket", "sampled sup of the Poisson bracket"},
      {"flow", "integrate one characteristic"},
      {"regularity", "second-difference regularity report"},
      {"pendulum-demo", "full pendulum nonexistence bundle"},
  };
  for (const auto& [name, desc] : commands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--n", n_override, "grid size override");
    sub->add_option("--t", t_override, "time override");
    sub->add_option("--s", s_override, "second time override");
    sub->add_option("--T", big_t_override, "critical horizon override");
    sub->add_option("--u0", u0_override, "initial datum override");
    sub->add_option("--cfl", cfl_override, "CFL number override");
    sub->add_option("--out", out_override, "output directory override");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    nlohmann::json raw = nlohmann::json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in)
        throw std::invalid_argument("cannot open config file " + config_path);
      raw = nlohmann::json::parse(in);  // parse_error maps to exit 2 below
    }
    ExperimentConfig cfg = ExperimentConfig::from_json(raw);
    if (n_override != 0) {
      if (!power_of_two_in_range(n_override))
        throw std::invalid_argument("--n must be a power of two in [64, 8192]");
      cfg.n = n_override;
    }
    if (!std::isnan(t_override)) cfg.t = t_override;
    if (!std::isnan(s_override)) cfg.s = s_override;
    if (!std::isnan(big_t_override)) cfg.T = big_t_override;
    if (cfl_override != 0.0) {
      if (!(cfl_override > 0.0) || !(cfl_override <= 0.5))
        throw std::invalid_argument("--cfl must lie in (0, 0.5]");
      cfg.cfl = cfl_override;
    }
    if (!u0_override.empty()) cfg.u0 = u0_override;
    if (!out_override.empty()) cfg.out = out_override;

    run_command(app.get_subcommands().front()->get_name(), cfg);
    return 0;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  }
}

}  // namespace hjlab
