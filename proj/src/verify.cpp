#include "detcon/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "detcon/agent.hpp"
#include "detcon/analysis.hpp"
#include "detcon/reference.hpp"
#include "detcon/rng.hpp"

namespace detcon {

namespace {

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::string format_at(double t, int agent) {
  std::ostringstream os;
  os << "t = " << t << ", agent " << agent + 1;
  return os.str();
}

}  // namespace

CheckResult check_conservation(const Trajectory& traj, bool noisy, double tol) {
  CheckResult r{"conservation", true, false, ""};
  if (noisy) {
    r.skipped = true;
    r.detail = "not applicable under state noise";
    return r;
  }
  const double x_bar = mean_of(traj.samples.front().x);
  double worst = 0.0;
  double worst_t = 0.0;
  for (const Sample& s : traj.samples) {
    const double dev = std::abs(mean_of(s.x) - x_bar);
    if (dev > worst) {
      worst = dev;
      worst_t = s.t;
    }
  }
  std::ostringstream os;
  os << "max |mean(x) - mean(x0)| = " << worst << " at t = " << worst_t;
  r.detail = os.str();
  r.pass = worst <= tol;
  return r;
}

CheckResult check_lyapunov_monotone(const Trajectory& traj, bool noisy, double tol) {
  CheckResult r{"lyapunov_monotone", true, false, ""};
  if (noisy) {
    r.skipped = true;
    r.detail = "not applicable under state noise";
    return r;
  }
  Metrics m;
  lyapunov_traces(traj, m);
  double worst = 0.0;
  double worst_t = 0.0;
  for (std::size_t k = 1; k < m.v.size(); ++k) {
    const double rise = m.v[k] - m.v[k - 1];
    if (rise > worst) {
      worst = rise;
      worst_t = m.t[k];
    }
  }
  std::ostringstream os;
  os << "max per-interval increase of V = " << worst << " at t = " << worst_t;
  r.detail = os.str();
  r.pass = worst <= tol;
  return r;
}

CheckResult check_vdot_consistency(const Trajectory& traj, const WeightedDigraph& graph,
                                   const std::vector<AgentParams>& params, bool noisy,
                                   double rel_tol) {
  CheckResult r{"vdot_consistency", true, false, ""};
  if (noisy) {
    r.skipped = true;
    r.detail = "not applicable under state noise";
    return r;
  }
  Metrics m;
  lyapunov_traces(traj, m);
  std::vector<double> event_times;
  event_times.reserve(traj.events.size());
  for (const EventRecord& ev : traj.events) event_times.push_back(ev.t);

  const int n = graph.size();
  double worst = 0.0;
  double worst_t = 0.0;
  int compared = 0;
  for (std::size_t k = 1; k < traj.samples.size(); ++k) {
    const double t0 = traj.samples[k - 1].t;
    const double t1 = traj.samples[k].t;
    const double dt = t1 - t0;
    if (dt < 1e-6) continue;
    // skip pairs straddling an event; the flow identity only holds inside a segment
    const auto it = std::lower_bound(event_times.begin(), event_times.end(),
                                     t0 + kEventTimeTol);
    if (it != event_times.end() && *it < t1 - kEventTimeTol) continue;
    double expected = 0.0;
    const Sample& s = traj.samples[k - 1];
    for (int i = 0; i < n; ++i) {
      double phi = 0.0;
      for (const auto& [j, w] : graph.out_neighbors(i)) {
        const double diff = s.xhat[i] - s.xhat[j];
        phi += w * diff * diff;
      }
      expected += -(1.0 - params[i].sigma) * phi;
    }
    const double slope = (m.v[k] - m.v[k - 1]) / dt;
    const double err = std::abs(slope - expected) / std::max(std::abs(expected), 1e-9);
    ++compared;
    if (err > worst) {
      worst = err;
      worst_t = t0;
    }
  }
  std::ostringstream os;
  os << "max relative flow-rate mismatch = " << worst << " at t = " << worst_t << " over "
     << compared << " intervals";
  r.detail = os.str();
  r.pass = worst <= rel_tol;
  return r;
}

CheckResult check_miet(const Trajectory& traj, const std::vector<AgentParams>& params,
                       SimMode mode) {
  CheckResult r{"miet_bounds", true, false, ""};
  const auto rows = miet_report(traj, params, mode);
  std::ostringstream os;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i) os << "; ";
    os << "agent " << i + 1 << " bound " << rows[i].bound;
    if (rows[i].applicable) {
      os << " min " << rows[i].min_gap;
      if (rows[i].violated) {
        r.pass = false;
        os << " VIOLATED";
      }
    } else {
      os << " (fewer than two events)";
    }
  }
  r.detail = os.str();
  return r;
}

CheckResult check_time_to_event_lemma(const Trajectory& traj,
                                      const std::vector<AgentParams>& params,
                                      SimMode mode) {
  CheckResult r{"time_to_event_bound", true, false, ""};
  if (mode != SimMode::Nominal) {
    r.skipped = true;
    r.detail = "bounds the clock trigger only; skipped for this mode";
    return r;
  }
  const int n = static_cast<int>(params.size());
  std::vector<std::vector<double>> events(n);
  for (const EventRecord& ev : traj.events) events[ev.agent].push_back(ev.t);

  int checked = 0;
  double worst = 0.0;
  std::string worst_at;
  for (const Sample& s : traj.samples) {
    for (int i = 0; i < n; ++i) {
      const auto& ts = events[i];
      const auto it = std::upper_bound(ts.begin(), ts.end(), s.t + kEventTimeTol);
      if (it == ts.end()) continue;
      const double realized = *it - s.t;
      const AgentState state{s.x[i], s.xhat[i], s.chi[i], 0.0};
      const double bound = time_to_event_bound(state, params[i]);
      const double shortfall = bound - realized;
      ++checked;
      if (shortfall > worst) {
        worst = shortfall;
        worst_at = format_at(s.t, i);
      }
    }
  }
  std::ostringstream os;
  os << checked << " sample/agent pairs, worst shortfall = " << worst;
  if (!worst_at.empty()) os << " at " << worst_at;
  r.detail = os.str();
  r.pass = worst <= kRootTol;
  return r;
}

CheckResult check_jump_invariance(const Trajectory& traj) {
  CheckResult r{"jump_invariance", true, false, ""};
  for (const EventRecord& ev : traj.events) {
    if (ev.pre.x != ev.post.x || ev.pre.chi != ev.post.chi) {
      r.pass = false;
      r.detail = "x or chi changed across the jump at " + format_at(ev.t, ev.agent);
      return r;
    }
  }
  std::ostringstream os;
  os << traj.events.size() << " events, V unchanged across every jump";
  r.detail = os.str();
  return r;
}

CheckResult check_jump_commutativity(int cases, std::uint64_t seed) {
  CheckResult r{"jump_commutativity", true, false, ""};
  CounterRng rng(seed, 0);
  for (int c = 0; c < cases; ++c) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 5);
    std::vector<AgentState> base(n);
    for (AgentState& s : base) {
      s.x = 4.0 * rng.uniform() - 2.0;
      s.xhat = 4.0 * rng.uniform() - 2.0;
      s.chi = 2.0 * rng.uniform();
      s.timer = rng.uniform();
    }
    std::vector<int> triggered;
    for (int i = 0; i < n; ++i) {
      if (rng.uniform() < 0.6) triggered.push_back(i);
    }
    std::vector<AgentState> forward = base;
    apply_jumps(forward, triggered);
    std::vector<int> shuffled = triggered;
    for (std::size_t k = shuffled.size(); k > 1; --k) {
      std::swap(shuffled[k - 1], shuffled[rng.next_u64() % k]);
    }
    std::vector<AgentState> permuted = base;
    for (int i : shuffled) permuted[i] = apply_broadcast(permuted[i]);
    for (int i = 0; i < n; ++i) {
      if (forward[i].x != permuted[i].x || forward[i].xhat != permuted[i].xhat ||
          forward[i].chi != permuted[i].chi || forward[i].timer != permuted[i].timer) {
        r.pass = false;
        r.detail = "order-dependent result in case " + std::to_string(c);
        return r;
      }
    }
  }
  r.detail = std::to_string(cases) + " random simultaneous-jump orders, identical states";
  return r;
}

SimConfig random_three_agent_config(std::uint64_t seed, int index) {
  CounterRng rng(seed, 1000 + static_cast<std::uint64_t>(index));
  const int n = 3;
  const double w_fwd = 0.4 + 0.6 * rng.uniform();
  const double w_rev = 0.4 + 0.6 * rng.uniform();
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    edges.push_back({i, (i + 1) % n, w_fwd});
    edges.push_back({i, (i + 2) % n, w_rev});
  }
  WeightedDigraph graph(n, std::move(edges));

  std::vector<double> x0(n);
  for (int tries = 0; tries < 64; ++tries) {
    for (double& v : x0) v = 2.0 * rng.uniform() - 1.0;
    const auto [lo, hi] = std::minmax_element(x0.begin(), x0.end());
    if (*hi - *lo >= 0.8) break;
  }

  std::vector<AgentParams> params(n);
  for (int i = 0; i < n; ++i) {
    params[i].sigma = 0.3 + 0.4 * rng.uniform();
    params[i].d = graph.out_degree(i);
    params[i].tau = 0.0;
    params[i].delta = 0.0;
    params[i].t_max = 10.0 * params[i].miet();
  }
  SimConfig cfg{std::move(graph), std::move(params), std::move(x0)};
  cfg.horizon = 1.0;
  cfg.mode = SimMode::Nominal;
  cfg.sample_dt = 0.1;
  cfg.rng_seed = seed;
  return cfg;
}

CheckResult check_oracle_equivalence(int cases, std::uint64_t seed, double dt, double tol) {
  CheckResult r{"oracle_equivalence", true, false, ""};
  const double horizon_margin = 1e-4;
  int events_compared = 0;
  double worst = 0.0;
  for (int c = 0; c < cases; ++c) {
    const SimConfig cfg = random_three_agent_config(seed, c);
    const Trajectory traj = run(cfg);
    const auto oracle =
        run_euler_oracle(cfg.graph, cfg.params, cfg.x0, cfg.horizon, dt);

    const int n = cfg.graph.size();
    std::vector<std::vector<double>> exact_times(n), oracle_times(n);
    for (const EventRecord& ev : traj.events) {
      if (ev.t <= cfg.horizon - horizon_margin) exact_times[ev.agent].push_back(ev.t);
    }
    for (const OracleEvent& ev : oracle) {
      if (ev.t <= cfg.horizon - horizon_margin) oracle_times[ev.agent].push_back(ev.t);
    }
    for (int i = 0; i < n; ++i) {
      if (exact_times[i].size() != oracle_times[i].size()) {
        r.pass = false;
        std::ostringstream os;
        os << "case " << c << " agent " << i + 1 << ": " << exact_times[i].size()
           << " exact events vs " << oracle_times[i].size() << " oracle events";
        r.detail = os.str();
        return r;
      }
      for (std::size_t k = 0; k < exact_times[i].size(); ++k) {
        const double diff = std::abs(exact_times[i][k] - oracle_times[i][k]);
        ++events_compared;
        worst = std::max(worst, diff);
        if (diff > tol) {
          r.pass = false;
          std::ostringstream os;
          os << "case " << c << " agent " << i + 1 << " event " << k << ": |dt| = " << diff;
          r.detail = os.str();
          return r;
        }
      }
    }
  }
  std::ostringstream os;
  os << cases << " scenarios, " << events_compared
     << " events compared, worst |dt| = " << worst;
  r.detail = os.str();
  return r;
}

std::vector<CheckResult> verify_trajectory(const Trajectory& traj,
                                           const WeightedDigraph& graph,
                                           const std::vector<AgentParams>& params,
                                           SimMode mode, bool noisy) {
  std::vector<CheckResult> out;
  out.push_back(check_conservation(traj, noisy));
  out.push_back(check_lyapunov_monotone(traj, noisy));
  out.push_back(check_vdot_consistency(traj, graph, params, noisy));
  out.push_back(check_miet(traj, params, mode));
  out.push_back(check_time_to_event_lemma(traj, params, mode));
  out.push_back(check_jump_invariance(traj));
  return out;
}

std::vector<CheckResult> verify_scenario(const SimConfig& config, int oracle_cases) {
  const Trajectory traj = run(config);
  auto out = verify_trajectory(traj, config.graph, config.params, config.mode,
                               config.mode == SimMode::NoisySelfTriggered);
  out.push_back(check_jump_commutativity());
  out.push_back(check_oracle_equivalence(oracle_cases));
  return out;
}

}  // namespace detcon
