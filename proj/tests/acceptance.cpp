// Acceptance suite: runs every release criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "detcon/analysis.hpp"
#include "detcon/cli.hpp"
#include "detcon/io.hpp"
#include "detcon/rng.hpp"
#include "detcon/scenario.hpp"
#include "detcon/simulator.hpp"
#include "detcon/verify.hpp"

using namespace detcon;
namespace fs = std::filesystem;

namespace {

std::string g_scenario_dir = DETCON_SCENARIO_DIR;

std::string scenario_path(const char* name) {
  return (fs::path(g_scenario_dir) / name).string();
}

SimConfig load_config(const char* name) {
  return Scenario::load_file(scenario_path(name)).to_config();
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Criterion {
  int id;
  std::string title;
  std::function<bool(std::string&)> body;
};

bool expect(bool ok, const std::string& what, std::string& detail) {
  if (!ok && detail.empty()) detail = what;
  return ok;
}

// ------------------------------------------------------------------
// 1. benchmark convergence: |x_i(20) - 0.8| <= 1e-3, V nonincreasing
//    within 1e-8 per interval, wall time under a second
bool criterion1(std::string& detail) {
  const SimConfig cfg = load_config("paper_fig1.json");
  const double t0 = now_seconds();
  const Trajectory traj = run(cfg);
  const double elapsed = now_seconds() - t0;

  bool ok = true;
  for (const AgentState& s : traj.terminal) {
    ok &= expect(std::abs(s.x - 0.8) <= 1e-3,
                 "final state misses the average by more than 1e-3", detail);
  }
  Metrics m;
  lyapunov_traces(traj, m);
  double worst_rise = 0.0;
  for (std::size_t k = 1; k < m.v.size(); ++k) {
    worst_rise = std::max(worst_rise, m.v[k] - m.v[k - 1]);
  }
  ok &= expect(worst_rise <= 1e-8, "V increased beyond tolerance", detail);
  ok &= expect(elapsed < 1.0, "run exceeded 1 s", detail);
  if (ok) {
    std::ostringstream os;
    os << "max |x(20) - 0.8| = "
       << [&] {
            double worst = 0.0;
            for (const AgentState& s : traj.terminal) {
              worst = std::max(worst, std::abs(s.x - 0.8));
            }
            return worst;
          }()
       << ", max V rise = " << worst_rise << ", " << elapsed << " s";
    detail = os.str();
  }
  return ok;
}

// ------------------------------------------------------------------
// 2. observed minimum gaps respect [0.45, 0.2, 0.2, 0.1, 0.2] minus root
//    tolerance, and every agent realizes its bound within 5% either in the
//    run itself or under the adversarial drive
bool criterion2(std::string& detail) {
  const SimConfig cfg = load_config("paper_fig1.json");
  const Trajectory traj = run(cfg);
  const auto rows = miet_report(traj, cfg.params, cfg.mode);
  const std::vector<double> bounds{0.45, 0.2, 0.2, 0.1, 0.2};
  bool ok = true;
  std::ostringstream os;
  for (int i = 0; i < 5; ++i) {
    ok &= expect(rows[i].applicable, "agent recorded fewer than two events", detail);
    if (!rows[i].applicable) continue;
    ok &= expect(std::abs(rows[i].bound - bounds[i]) < 1e-12, "bound table mismatch",
                 detail);
    ok &= expect(rows[i].min_gap >= bounds[i] - 1e-9, "gap below the guaranteed bound",
                 detail);
    const bool tight_in_run = rows[i].min_gap <= 1.05 * bounds[i];
    const double adversarial = adversarial_miet_run(cfg.params[i], 1.0);
    const bool tight_adv = std::abs(adversarial - bounds[i]) <= 0.05 * bounds[i];
    ok &= expect(tight_in_run || tight_adv, "bound not realized within 5%", detail);
    os << "agent " << i + 1 << " min " << rows[i].min_gap
       << (tight_in_run ? " (tight in run)" : " (tight adversarially)") << "; ";
  }
  if (ok) detail = os.str();
  return ok;
}

// ------------------------------------------------------------------
// 3. adversarial tightness over 20 random (sigma, d, e_target) tuples,
//    invariant to the choice of e_target
bool criterion3(std::string& detail) {
  CounterRng rng(314159, 0);
  bool ok = true;
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    AgentParams p;
    p.sigma = 0.05 + 0.9 * rng.uniform();
    p.d = 0.3 + 3.7 * rng.uniform();
    p.tau = 0.0;
    p.delta = 0.0;
    p.t_max = 10.0 * p.miet();
    const double e_target = (rng.uniform() < 0.5 ? -1.0 : 1.0) *
                            std::pow(10.0, 3.0 * (2.0 * rng.uniform() - 1.0));
    const double realized = adversarial_miet_run(p, e_target);
    worst = std::max(worst, std::abs(realized - p.miet()));
    ok &= expect(std::abs(realized - p.miet()) <= 1e-6,
                 "realized time misses sigma/d by more than 1e-6", detail);
    const double rescaled = adversarial_miet_run(p, e_target * -273.15);
    ok &= expect(std::abs(realized - rescaled) <= 1e-9,
                 "realized time depends on e_target", detail);
  }
  if (ok) {
    std::ostringstream os;
    os << "20 tuples, worst |realized - sigma/d| = " << worst;
    detail = os.str();
  }
  return ok;
}

// ------------------------------------------------------------------
// 4. time-to-event lower bound holds at every dense sample of the
//    benchmark run (>= 2e4 samples), zero violations beyond root tolerance
bool criterion4(std::string& detail) {
  const SimConfig cfg = load_config("paper_fig1.json");
  const Trajectory traj = run(cfg);
  bool ok = expect(traj.samples.size() >= 20000, "fewer than 2e4 samples", detail);
  const CheckResult r = check_time_to_event_lemma(traj, cfg.params, cfg.mode);
  ok &= expect(r.pass && !r.skipped, "lemma check failed: " + r.detail, detail);
  if (ok) {
    std::ostringstream os;
    os << traj.samples.size() << " samples; " << r.detail;
    detail = os.str();
  }
  return ok;
}

// ------------------------------------------------------------------
// 5. robust mode with delta = [0.05 0.05 0.05 0.03 0.05] and random
//    detection delays: chi >= -1e-10 at every broadcast, convergence and
//    V decay as in criterion 1, gaps >= sigma/d - delta
bool criterion5(std::string& detail) {
  SimConfig cfg = load_config("paper_fig1.json");
  cfg.mode = SimMode::Robust;
  const std::vector<double> delta{0.05, 0.05, 0.05, 0.03, 0.05};
  for (int i = 0; i < 5; ++i) {
    cfg.params[i].delta = delta[i];
    cfg.params[i].tau = std::min(cfg.params[i].tau, cfg.params[i].robust_miet());
  }
  const Trajectory traj = run(cfg);

  bool ok = expect(!traj.events.size() == false, "no events", detail);
  double min_chi = 0.0;
  double max_delay = 0.0;
  for (const EventRecord& ev : traj.events) {
    min_chi = std::min(min_chi, ev.pre.chi);
    max_delay = std::max(max_delay, ev.detection_delay);
    ok &= expect(ev.pre.chi >= -1e-10, "chi negative at a broadcast", detail);
    ok &= expect(ev.detection_delay <= delta[ev.agent] + 1e-15, "delay above delta",
                 detail);
  }
  ok &= expect(max_delay > 0.0, "delays never realized", detail);
  for (const AgentState& s : traj.terminal) {
    ok &= expect(std::abs(s.x - 0.8) <= 1e-3, "robust run misses the average", detail);
  }
  Metrics m;
  lyapunov_traces(traj, m);
  for (std::size_t k = 1; k < m.v.size(); ++k) {
    ok &= expect(m.v[k] <= m.v[k - 1] + 1e-8, "V increased beyond tolerance", detail);
    if (!ok) break;
  }
  const auto rows = miet_report(traj, cfg.params, cfg.mode);
  for (int i = 0; i < 5; ++i) {
    if (!rows[i].applicable) continue;
    ok &= expect(rows[i].min_gap >= cfg.params[i].robust_miet() - 1e-12,
                 "gap below sigma/d - delta", detail);
  }
  if (ok) {
    std::ostringstream os;
    os << traj.events.size() << " events, min pre-broadcast chi = " << min_chi
       << ", max delay = " << max_delay;
    detail = os.str();
  }
  return ok;
}

// ------------------------------------------------------------------
// 6. noiseless average conservation within 1e-9 at every sample,
//    in every noise-free mode
bool criterion6(std::string& detail) {
  bool ok = true;
  double worst = 0.0;
  for (SimMode mode : {SimMode::Nominal, SimMode::Robust, SimMode::MaxTime}) {
    SimConfig cfg = load_config("paper_fig1.json");
    cfg.mode = mode;
    if (mode == SimMode::Robust) {
      for (auto& p : cfg.params) {
        p.delta = 0.03;
        p.tau = std::min(p.tau, p.robust_miet());
      }
    }
    const Trajectory traj = run(cfg);
    for (const Sample& s : traj.samples) {
      double m = 0.0;
      for (double xi : s.x) m += xi;
      const double residual = std::abs(m / 5.0 - 0.8);
      worst = std::max(worst, residual);
      ok &= expect(residual <= 1e-9, std::string("conservation broken in mode ") +
                                         to_string(mode), detail);
      if (!ok) return ok;
    }
  }
  if (ok) {
    std::ostringstream os;
    os << "worst |mean(x) - 0.8| over three modes = " << worst;
    detail = os.str();
  }
  return ok;
}

// ------------------------------------------------------------------
// 7. closed-form event times match the fixed-step oracle
//    (explicit Euler dt = 1e-6 + bisection) within 1e-5 on 50 random
//    3-agent weight-balanced strongly connected scenarios
bool criterion7(std::string& detail) {
  const CheckResult r = check_oracle_equivalence(50, 424242, 1e-6, 1e-5);
  detail = r.detail;
  return r.pass;
}

// ------------------------------------------------------------------
// 8. noise statistics: variance of the final average within a factor 2 of
//    horizon * variance / n over >= 100 seeds, dwell-enforced gaps, under 60 s
bool criterion8(std::string& detail) {
  const SimConfig cfg = load_config("paper_noise.json");
  const double t0 = now_seconds();
  const WienerCheck wc = wiener_band_check(cfg, 100);
  const double elapsed = now_seconds() - t0;

  bool ok = true;
  ok &= expect(std::abs(wc.target_variance - 0.4) < 1e-12, "target variance is not 0.4",
               detail);
  ok &= expect(wc.sample_variance >= 0.2 && wc.sample_variance <= 0.8,
               "sample variance outside [0.2, 0.8]", detail);
  ok &= expect(wc.mean_ok, "sample mean off the initial average", detail);
  ok &= expect(wc.min_gap_margin >= 0.0, "a gap fell below the guaranteed bound", detail);
  ok &= expect(elapsed < 60.0, "noise statistics exceeded 60 s", detail);
  if (ok) {
    std::ostringstream os;
    os << "variance " << wc.sample_variance << " (target 0.4), mean " << wc.sample_mean
       << ", min gap margin " << wc.min_gap_margin << ", " << elapsed << " s";
    detail = os.str();
  }
  return ok;
}

// ------------------------------------------------------------------
// 9. sigma sweep trend on {0.1, ..., 0.9}: communication rate
//    nonincreasing and cost nondecreasing, at most one adjacent inversion
bool criterion9(std::string& detail) {
  const SimConfig cfg = load_config("paper_sweep.json");
  std::vector<double> grid;
  for (int k = 1; k <= 9; ++k) grid.push_back(0.1 * k);
  const auto rows = sigma_sweep(cfg, grid);
  std::vector<double> r_com, cost;
  for (const SweepRow& r : rows) {
    r_com.push_back(r.r_com);
    cost.push_back(r.cost);
  }
  bool ok = true;
  ok &= expect(trend_holds(r_com, true, 1), "r_com not nonincreasing", detail);
  ok &= expect(trend_holds(cost, false, 1), "cost not nondecreasing", detail);
  if (ok) {
    std::ostringstream os;
    os << "r_com " << r_com.front() << " -> " << r_com.back() << ", cost " << cost.front()
       << " -> " << cost.back();
    detail = os.str();
  }
  return ok;
}

// ------------------------------------------------------------------
// 10. determinism: identical scenario and seed give byte-identical outputs
bool criterion10(std::string& detail) {
  const fs::path base = fs::temp_directory_path() / "detcon_acceptance_det";
  fs::remove_all(base);
  std::ostringstream out, err;
  for (const char* sub : {"a", "b"}) {
    cli::RunOptions opts;
    opts.scenario_path = scenario_path("paper_fig1.json");
    opts.out_dir = (base / sub).string();
    if (cli::cmd_run(opts, out, err) != cli::kOk) {
      detail = "cmd_run failed: " + err.str();
      return false;
    }
  }
  bool ok = true;
  for (const char* name : {"trajectory.csv", "events.csv", "metrics.json"}) {
    ok &= expect(slurp(base / "a" / name) == slurp(base / "b" / name),
                 std::string(name) + " differs between identical runs", detail);
  }

  for (const char* sub : {"sa", "sb"}) {
    cli::SweepOptions opts;
    opts.scenario_path = scenario_path("paper_sweep.json");
    opts.out_dir = (base / sub).string();
    opts.sigma_grid = {0.2, 0.5, 0.8};
    if (cli::cmd_sweep(opts, out, err) != cli::kOk) {
      detail = "cmd_sweep failed: " + err.str();
      return false;
    }
  }
  ok &= expect(slurp(base / "sa" / "sweep.csv") == slurp(base / "sb" / "sweep.csv"),
               "sweep.csv differs between identical runs", detail);
  if (ok) detail = "CSV and JSON outputs byte-identical across reruns";
  fs::remove_all(base);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_scenario_dir = argv[1];

  const std::vector<Criterion> criteria{
      {1, "benchmark convergence and Lyapunov decay", criterion1},
      {2, "guaranteed minimum inter-event gaps, tight within 5%", criterion2},
      {3, "adversarial tightness of sigma/d", criterion3},
      {4, "time-to-event lower bound on dense samples", criterion4},
      {5, "robust mode under random detection delays", criterion5},
      {6, "average conservation in noise-free modes", criterion6},
      {7, "exact engine vs fixed-step oracle", criterion7},
      {8, "noise statistics of the average state", criterion8},
      {9, "sigma sweep trade-off trend", criterion9},
      {10, "byte-identical reruns", criterion10},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.body(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (!ok) ++failures;
    std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", c.id,
                c.title.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
