#include "detcon/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>

#include <json.hpp>

#include "detcon/analysis.hpp"
#include "detcon/io.hpp"
#include "detcon/scenario.hpp"
#include "detcon/verify.hpp"

namespace detcon::cli {

namespace fs = std::filesystem;

namespace {

Scenario load_with_overrides(const std::string& path, std::optional<std::uint64_t> seed,
                             std::optional<double> horizon) {
  Scenario sc = Scenario::load_file(path);
  if (seed) sc.rng_seed = *seed;
  if (horizon) sc.horizon = *horizon;
  return sc;
}

// refuse to clobber prior results unless asked to
void prepare_out_dir(const std::string& dir, bool force,
                     std::initializer_list<const char*> products) {
  fs::create_directories(dir);
  if (force) return;
  for (const char* name : products) {
    if (fs::exists(fs::path(dir) / name)) {
      throw ConfigError("output directory " + dir + " already contains " + name +
                        "; use --force to overwrite");
    }
  }
}

io::RunHeader make_header(const Scenario& sc) {
  return {sc.name, sc.hash_hex(), sc.rng_seed, to_string(sc.mode)};
}

void print_checks(const std::vector<CheckResult>& checks, std::ostream& out) {
  for (const CheckResult& c : checks) {
    out << (c.pass || c.skipped ? "PASS" : "FAIL") << "  " << std::left << std::setw(22)
        << c.name;
    if (c.skipped) out << " (skipped: " << c.detail << ")";
    else if (!c.detail.empty()) out << " " << c.detail;
    out << "\n";
  }
}

}  // namespace

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const Scenario sc = load_with_overrides(opts.scenario_path, opts.seed, opts.horizon);
    const SimConfig cfg = sc.to_config();
    prepare_out_dir(opts.out_dir, opts.force,
                    {"trajectory.csv", "events.csv", "metrics.json"});

    const Trajectory traj = run(cfg);
    const Metrics metrics = compute_metrics(traj, cfg.graph, cfg.params, cfg.mode);

    const io::RunHeader header = make_header(sc);
    const fs::path dir(opts.out_dir);
    io::write_trajectory_csv((dir / "trajectory.csv").string(), traj, header);
    io::write_events_csv((dir / "events.csv").string(), traj, header);
    io::write_metrics_json((dir / "metrics.json").string(), metrics, header);
    io::write_plot_script((dir / "plot_results.py").string());

    out << "scenario " << sc.name << " (hash " << header.scenario_hash << ", seed "
        << header.seed << ", mode " << header.mode << ")\n";
    out << "  events: " << traj.events.size() << ", r_com = " << metrics.r_com
        << ", cost = " << metrics.cost << "\n";
    double worst_dev = 0.0;
    for (const AgentState& s : traj.terminal) {
      worst_dev = std::max(worst_dev, std::abs(s.x - metrics.x_bar));
    }
    out << "  final max |x - x_bar| = " << worst_dev
        << ", conservation residual = " << metrics.conservation_residual << "\n";
    out << "  wrote trajectory.csv, events.csv, metrics.json, plot_results.py to "
        << opts.out_dir << "\n";
    return kOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const SimulationError& e) {
    err << "simulation error: " << e.what() << "\n";
    return kInvariantFailure;
  }
}

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const Scenario sc = load_with_overrides(opts.scenario_path, opts.seed, std::nullopt);
    const SimConfig cfg = sc.to_config();
    std::vector<CheckResult> checks;
    if (opts.from_dir) {
      const Trajectory traj = io::read_run_dir(*opts.from_dir);
      checks = verify_trajectory(traj, cfg.graph, cfg.params, cfg.mode,
                                 cfg.mode == SimMode::NoisySelfTriggered);
      out << "offline checks on " << *opts.from_dir << ":\n";
    } else {
      checks = verify_scenario(cfg, opts.oracle_cases);
      out << "checks for scenario " << sc.name << ":\n";
    }
    print_checks(checks, out);
    for (const CheckResult& c : checks) {
      if (!c.pass && !c.skipped) return kInvariantFailure;
    }
    return kOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const SimulationError& e) {
    err << "simulation error: " << e.what() << "\n";
    return kInvariantFailure;
  }
}

int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    if (opts.sigma_grid.empty()) throw ConfigError("sweep: empty sigma grid");
    for (double s : opts.sigma_grid) {
      if (!(s > 0.0 && s < 1.0)) {
        throw ConfigError("sweep: sigma " + std::to_string(s) + " outside (0, 1)");
      }
    }
    const Scenario sc = load_with_overrides(opts.scenario_path, opts.seed, opts.horizon);
    const SimConfig cfg = sc.to_config();
    prepare_out_dir(opts.out_dir, opts.force, {"sweep.csv", "wiener_check.json"});

    const auto rows = sigma_sweep(cfg, opts.sigma_grid);
    const fs::path dir(opts.out_dir);
    {
      std::ofstream f(dir / "sweep.csv");
      if (!f) throw ConfigError("cannot write sweep.csv");
      f << "# scenario: " << sc.name << "\n# hash: " << sc.hash_hex() << "\n# seed: "
        << sc.rng_seed << "\n";
      f << "sigma,r_com,cost\n";
      for (const SweepRow& r : rows) {
        f << io::format_double(r.sigma) << "," << io::format_double(r.r_com) << ","
          << io::format_double(r.cost) << "\n";
      }
    }
    out << "sweep over " << rows.size() << " sigma values:\n";
    for (const SweepRow& r : rows) {
      out << "  sigma = " << r.sigma << "  r_com = " << r.r_com << "  cost = " << r.cost
          << "\n";
    }

    if (cfg.mode == SimMode::NoisySelfTriggered) {
      const WienerCheck wc = wiener_band_check(cfg, opts.seeds);
      nlohmann::json j;
      j["scenario"] = sc.name;
      j["hash"] = sc.hash_hex();
      j["seed"] = sc.rng_seed;
      j["n_seeds"] = wc.n_seeds;
      j["target_variance"] = wc.target_variance;
      j["sample_variance"] = wc.sample_variance;
      j["sample_mean"] = wc.sample_mean;
      j["x_bar0"] = wc.x_bar0;
      j["min_gap_margin"] = wc.min_gap_margin;
      j["variance_ok"] = wc.variance_ok;
      j["mean_ok"] = wc.mean_ok;
      j["miet_ok"] = wc.miet_ok;
      j["pass"] = wc.pass();
      std::ofstream f(dir / "wiener_check.json");
      if (!f) throw ConfigError("cannot write wiener_check.json");
      f << j.dump(1) << "\n";
      out << "noise statistics over " << wc.n_seeds << " seeds: sample variance "
          << wc.sample_variance << " (target " << wc.target_variance << "), "
          << (wc.pass() ? "PASS" : "FAIL") << "\n";
      if (!wc.pass()) return kInvariantFailure;
    }
    return kOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const SimulationError& e) {
    err << "simulation error: " << e.what() << "\n";
    return kInvariantFailure;
  }
}

std::vector<double> parse_sigma_grid(const std::string& spec) {
  std::vector<double> grid;
  if (spec.find(':') != std::string::npos) {
    double start = 0, step = 0, stop = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(spec);
    if (!(is >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':' ||
        !(step > 0.0)) {
      throw ConfigError("sweep: bad grid '" + spec + "', expected start:step:stop");
    }
    for (double v = start; v <= stop + 1e-12; v += step) grid.push_back(v);
    return grid;
  }
  std::istringstream is(spec);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    if (tok.empty()) continue;
    grid.push_back(std::stod(tok));
  }
  return grid;
}

}  // namespace detcon::cli
