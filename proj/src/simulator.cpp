#include "detcon/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "detcon/rng.hpp"
#include "flow_roots.hpp"

namespace detcon {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// noise draws use streams [0, n), detection delays [kDelayStreamBase, ...)
constexpr std::uint64_t kDelayStreamBase = 1ull << 32;

// Frozen-broadcast flow coefficients for one agent. With xhat constant the
// physical state is affine, e(s) = e0 - z s, and chi is the quadratic
// chi0 + gamma0 s - z^2 s^2 with gamma0 = sigma phi + 2 e0 z.
struct SegCoef {
  double x0 = 0.0;
  double e0 = 0.0;
  double chi0 = 0.0;
  double z = 0.0;
  double phi = 0.0;
  double gamma0 = 0.0;
};

double chi_at(const SegCoef& c, double s) { return c.chi0 + s * (c.gamma0 - c.z * c.z * s); }
double x_at(const SegCoef& c, double s) { return c.x0 - c.z * s; }

struct TriggerPoly {
  double c = 0.0, b = 0.0, a = 0.0;
};

// chi itself for the clock trigger; for the robust trigger the window
// condition h <= delta in the polynomial form
// chi (sigma - delta d) <= delta d e^2, written as a concave quadratic that
// is positive outside the trigger region.
TriggerPoly trigger_poly(const SegCoef& sc, const AgentParams& p, bool robust) {
  // delta = 0 degenerates to the clock trigger; use the identical
  // polynomial so event times match the nominal engine bit for bit
  if (!robust || p.delta == 0.0) return {sc.chi0, sc.gamma0, -sc.z * sc.z};
  const double m = p.sigma - p.delta * p.d;  // > 0 since delta < sigma/d
  const double dd = p.delta * p.d;
  return {m * sc.chi0 - dd * sc.e0 * sc.e0,
          m * sc.gamma0 + 2.0 * dd * sc.e0 * sc.z,
          -p.sigma * sc.z * sc.z};
}

bool uses_robust_trigger(const AgentParams& p, SimMode mode) {
  if (mode == SimMode::Robust) return true;
  // the secondary-deadline mode keeps whichever primary trigger the delay
  // parameter calls for
  return mode == SimMode::MaxTime && p.delta > 0.0;
}

struct Candidate {
  double t = kInf;
  EventKind kind = EventKind::ClockZero;
};

// t_arm nudged so the gap from the previous event never rounds below gate
double arm_time(double base, double gate) {
  double a = base + gate;
  while (a - base < gate) a = std::nextafter(a, kInf);
  return a;
}

Candidate agent_candidate(const SegCoef& sc, const AgentParams& p, SimMode mode,
                          double t0, double last_event, double horizon) {
  Candidate best;
  const double hi = horizon - t0;
  if (hi < 0.0) return best;
  const double t_arm = arm_time(last_event, dwell_gate(p, mode));
  const double lo = std::max(0.0, t_arm - t0);

  // when the crossing is pinned at the window start, report the absolute
  // arm instant so gaps never round below the guaranteed bound
  auto absolute = [&](double s, double lo_s, double pin) {
    return s <= lo_s ? std::max(pin, t0) : t0 + s;
  };

  const flow::ErrorLine e_line{sc.e0, sc.z};
  if (lo <= hi) {
    const bool robust = uses_robust_trigger(p, mode);
    const TriggerPoly tp = trigger_poly(sc, p, robust);
    if (const auto s = flow::gated_crossing(tp.c, tp.b, tp.a, e_line, lo, hi, kErrorTol)) {
      best.t = absolute(*s, lo, t_arm);
      best.kind = robust ? EventKind::RobustWindow : EventKind::ClockZero;
    }
  }
  if (mode == SimMode::MaxTime) {
    const double t_deadline = arm_time(last_event, p.t_max);
    const double lo_mt = std::max(lo, t_deadline - t0);
    if (lo_mt <= hi) {
      if (const auto s = flow::error_band_exit(e_line, lo_mt, hi, kErrorTol)) {
        const double t_cand = absolute(*s, lo_mt, std::max(t_deadline, t_arm));
        if (t_cand < best.t) best = {t_cand, EventKind::MaxTime};
      }
    }
  }
  return best;
}

[[noreturn]] void throw_flow_violation(double t, int agent, double chi) {
  std::ostringstream msg;
  msg << "flow-set violation: chi of agent " << agent + 1 << " reached " << chi
      << " at t = " << t;
  throw SimulationError(msg.str());
}

double clamp_chi(double chi, double t, int agent) {
  if (chi >= 0.0) return chi;
  if (chi < -kChiTol) throw_flow_violation(t, agent, chi);
  return 0.0;
}

class Engine {
 public:
  explicit Engine(const SimConfig& cfg)
      : cfg_(cfg),
        g_(cfg.graph),
        n_(cfg.graph.size()),
        noisy_(cfg.mode == SimMode::NoisySelfTriggered),
        x_(cfg.x0),
        xhat_(cfg.x0),
        chi_(n_, 0.0),
        x_model_(cfg.x0),
        model_x0_(n_, 0.0),
        last_event_(n_, 0.0),
        pending_t_(n_, kInf),
        pending_delay_(n_, 0.0),
        coef_(n_),
        cand_(n_) {
    if (noisy_) {
      noise_rng_.reserve(n_);
      for (int i = 0; i < n_; ++i) noise_rng_.emplace_back(cfg.rng_seed, i);
    }
    if (cfg.mode == SimMode::Robust || cfg.mode == SimMode::MaxTime) {
      delay_rng_.reserve(n_);
      for (int i = 0; i < n_; ++i) {
        delay_rng_.emplace_back(cfg.delay_seed(), kDelayStreamBase + i);
      }
    }
  }

  Trajectory run() {
    traj_.horizon = cfg_.horizon;
    emit_sample(0.0);
    std::size_t event_budget = 10'000'000;
    while (t_ < cfg_.horizon) {
      compute_segment();
      double t_next = cfg_.horizon;
      for (int i = 0; i < n_; ++i) {
        if (pending_t_[i] < kInf) {
          t_next = std::min(t_next, pending_t_[i]);
        } else {
          t_next = std::min(t_next, cand_[i].t);
        }
      }
      advance_to(t_next);
      const bool jumped = process_due(t_next);
      emit_sample(t_next);
      if (jumped && traj_.events.size() > event_budget) {
        throw SimulationError("event budget exhausted; trigger parameters degenerate");
      }
    }
    traj_.terminal.resize(n_);
    for (int i = 0; i < n_; ++i) {
      traj_.terminal[i] = {x_[i], xhat_[i], chi_[i], t_ - last_event_[i]};
    }
    return std::move(traj_);
  }

 private:
  void compute_segment() {
    t_seg_ = t_;
    noise_acc_.assign(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
      double z = 0.0, phi = 0.0;
      for (const auto& [j, w] : g_.out_neighbors(i)) {
        const double diff = xhat_[i] - xhat_[j];
        z += w * diff;
        phi += w * diff * diff;
      }
      // with noise the trigger logic runs on the agent's noise-free model
      // of its own state, resynchronized at each broadcast
      const double base = noisy_ ? x_model_[i] : x_[i];
      const double e0 = base - xhat_[i];
      model_x0_[i] = base;
      coef_[i] = {x_[i], e0, chi_[i], z, phi, cfg_.params[i].sigma * phi + 2.0 * e0 * z};
      cand_[i] = (pending_t_[i] < kInf)
                     ? Candidate{}
                     : agent_candidate(coef_[i], cfg_.params[i], cfg_.mode, t_seg_,
                                       last_event_[i], cfg_.horizon);
    }
  }

  // advance the state and emit cadence samples strictly before t_new;
  // the boundary instant is sampled by the caller after jumps
  void advance_to(double t_new) {
    while (true) {
      const double ts = static_cast<double>(next_sample_) * cfg_.sample_dt;
      if (ts > t_new - kEventTimeTol || ts > cfg_.horizon) break;
      step_state_to(ts);
      emit_sample(ts);  // also advances next_sample_
    }
    step_state_to(t_new);
  }

  void step_state_to(double t_new) {
    if (t_new <= t_) return;
    if (noisy_) {
      // Euler-Maruyama: the drift is exact (affine within the segment), so
      // only the Brownian increments accumulate per chunk
      const NoiseModel& nm = *cfg_.noise;
      const double span = t_new - t_;
      const int chunks = std::max(1, static_cast<int>(std::ceil(span / nm.dt_noise)));
      const double dt = span / chunks;
      const double amp = std::sqrt(nm.variance * dt);
      if (amp > 0.0) {
        for (int k = 0; k < chunks; ++k) {
          for (int i = 0; i < n_; ++i) noise_acc_[i] += amp * noise_rng_[i].normal();
        }
      } else {
        for (int k = 0; k < chunks; ++k) {
          for (int i = 0; i < n_; ++i) noise_rng_[i].normal();
        }
      }
    }
    const double s = t_new - t_seg_;
    for (int i = 0; i < n_; ++i) {
      x_[i] = x_at(coef_[i], s);
      chi_[i] = clamp_chi(chi_at(coef_[i], s), t_new, i);
      if (noisy_) {
        x_[i] += noise_acc_[i];
        x_model_[i] = model_x0_[i] - coef_[i].z * s;
      }
    }
    t_ = t_new;
  }

  // returns true if any broadcast executed at t_due
  bool process_due(double t_due) {
    struct Due {
      int agent;
      EventKind kind;
      double delay;
    };
    std::vector<Due> due;
    for (int i = 0; i < n_; ++i) {
      if (pending_t_[i] < kInf) {
        if (pending_t_[i] <= t_due + kEventTimeTol) {
          due.push_back({i, EventKind::RobustWindow, pending_delay_[i]});
          pending_t_[i] = kInf;
        }
        continue;
      }
      if (cand_[i].t > t_due + kEventTimeTol) continue;
      if (cand_[i].kind == EventKind::RobustWindow && cfg_.params[i].delta > 0.0) {
        const double delay = delay_rng_[i].uniform() * cfg_.params[i].delta;
        if (delay > kEventTimeTol) {
          // detection now, broadcast once the delay elapses
          pending_t_[i] = cand_[i].t + delay;
          pending_delay_[i] = delay;
          continue;
        }
        due.push_back({i, EventKind::RobustWindow, delay});
      } else {
        due.push_back({i, cand_[i].kind, 0.0});
      }
    }
    if (due.empty()) return false;
    std::sort(due.begin(), due.end(),
              [](const Due& a, const Due& b) { return a.agent < b.agent; });
    for (const Due& d : due) {
      const int i = d.agent;
      if (d.kind == EventKind::ClockZero) chi_[i] = 0.0;  // event defined by chi = 0
      if (chi_[i] < -kChiTol) throw_flow_violation(t_due, i, chi_[i]);
      if (chi_[i] < 0.0) chi_[i] = 0.0;
      EventRecord rec;
      rec.t = t_due;
      rec.agent = i;
      rec.kind = d.kind;
      rec.detection_delay = d.delay;
      rec.pre = {x_[i], xhat_[i], chi_[i], t_due - last_event_[i]};
      xhat_[i] = x_[i];
      x_model_[i] = x_[i];  // the broadcast publishes the measured state
      last_event_[i] = t_due;
      rec.post = {x_[i], xhat_[i], chi_[i], 0.0};
      traj_.events.push_back(rec);
    }
    return true;
  }

  void emit_sample(double ts) {
    if (!traj_.samples.empty() &&
        ts - traj_.samples.back().t <= kEventTimeTol) {
      traj_.samples.pop_back();  // boundary supersedes a coincident cadence sample
    }
    Sample s;
    s.t = ts;
    s.x = x_;
    s.xhat = xhat_;
    s.chi = chi_;
    traj_.samples.push_back(std::move(s));
    while (static_cast<double>(next_sample_) * cfg_.sample_dt <= ts + kEventTimeTol) {
      ++next_sample_;
    }
  }

  const SimConfig& cfg_;
  const WeightedDigraph& g_;
  int n_;
  bool noisy_;
  std::vector<double> x_, xhat_, chi_, x_model_, model_x0_, last_event_;
  std::vector<double> noise_acc_;
  std::vector<double> pending_t_, pending_delay_;
  std::vector<SegCoef> coef_;
  std::vector<Candidate> cand_;
  std::vector<CounterRng> noise_rng_, delay_rng_;
  Trajectory traj_;
  double t_ = 0.0;
  double t_seg_ = 0.0;
  std::size_t next_sample_ = 1;
};

}  // namespace

const char* to_string(SimMode mode) {
  switch (mode) {
    case SimMode::Nominal: return "nominal";
    case SimMode::Robust: return "robust";
    case SimMode::MaxTime: return "maxtime";
    case SimMode::NoisySelfTriggered: return "noisy";
  }
  return "unknown";
}

std::optional<SimMode> mode_from_string(const std::string& name) {
  if (name == "nominal") return SimMode::Nominal;
  if (name == "robust") return SimMode::Robust;
  if (name == "maxtime") return SimMode::MaxTime;
  if (name == "noisy") return SimMode::NoisySelfTriggered;
  return std::nullopt;
}

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::ClockZero: return "clock_zero";
    case EventKind::RobustWindow: return "robust_window";
    case EventKind::MaxTime: return "max_time";
  }
  return "unknown";
}

std::optional<EventKind> event_kind_from_string(const std::string& name) {
  if (name == "clock_zero") return EventKind::ClockZero;
  if (name == "robust_window") return EventKind::RobustWindow;
  if (name == "max_time") return EventKind::MaxTime;
  return std::nullopt;
}

void SimConfig::validate() const {
  const int n = graph.size();
  if (static_cast<int>(params.size()) != n) {
    throw ConfigError("config: agent parameter count does not match the graph");
  }
  if (static_cast<int>(x0.size()) != n) {
    throw ConfigError("config: x0 length does not match the graph");
  }
  if (!graph.is_weight_balanced()) {
    throw ConfigError("config: graph is not weight-balanced; refusing to simulate");
  }
  if (!graph.is_strongly_connected()) {
    throw ConfigError("config: graph is not strongly connected; refusing to simulate");
  }
  if (!(horizon > 0.0)) throw ConfigError("config: horizon must be positive");
  if (!(sample_dt > 0.0)) throw ConfigError("config: sample_dt must be positive");
  for (int i = 0; i < n; ++i) {
    if (params[i].d != graph.out_degree(i)) {
      std::ostringstream msg;
      msg << "agent " << i + 1 << ": cached out-degree " << params[i].d
          << " does not match the graph (" << graph.out_degree(i) << ")";
      throw ConfigError(msg.str());
    }
    params[i].validate(i + 1);
    const double bound =
        (mode == SimMode::Robust) ? params[i].robust_miet() : params[i].miet();
    if (params[i].tau - bound > 1e-12) {
      std::ostringstream msg;
      msg << "agent " << i + 1 << ": tau = " << params[i].tau
          << " exceeds the guaranteed minimum inter-event time of the " << to_string(mode)
          << " mode (" << bound << "): infeasible";
      throw ConfigError(msg.str());
    }
  }
  if (mode == SimMode::NoisySelfTriggered) {
    if (!noise) throw ConfigError("config: noisy mode requires a noise model");
    if (noise->variance < 0.0) throw ConfigError("config: noise variance must be >= 0");
    if (!(noise->dt_noise > 0.0)) throw ConfigError("config: dt_noise must be positive");
    if (noise->dt_noise >= sample_dt) {
      std::ostringstream msg;
      msg << "config: dt_noise = " << noise->dt_noise << " must be smaller than sample_dt = "
          << sample_dt;
      throw ConfigError(msg.str());
    }
  } else if (noise) {
    std::ostringstream msg;
    msg << "config: mode " << to_string(mode) << " does not accept a noise model";
    throw ConfigError(msg.str());
  }
}

double dwell_gate(const AgentParams& params, SimMode mode) {
  return mode == SimMode::Robust ? params.robust_miet() : params.miet();
}

Trajectory run(const SimConfig& config) {
  config.validate();
  return Engine(config).run();
}

std::optional<SegmentEvent> flow_segment_exact(std::vector<AgentState>& states,
                                               const WeightedDigraph& graph,
                                               const std::vector<AgentParams>& params,
                                               SimMode mode, double t0, double t_limit) {
  if (mode == SimMode::NoisySelfTriggered) {
    throw std::invalid_argument("flow_segment_exact: noise-free modes only");
  }
  const int n = graph.size();
  if (static_cast<int>(states.size()) != n || static_cast<int>(params.size()) != n) {
    throw std::invalid_argument("flow_segment_exact: state/parameter size mismatch");
  }
  if (!(t_limit > t0)) throw std::invalid_argument("flow_segment_exact: empty interval");

  std::vector<SegCoef> coef(n);
  double t_next = kInf;
  std::vector<double> cand_t(n, kInf);
  for (int i = 0; i < n; ++i) {
    const AgentState& s = states[i];
    if (s.chi < -kChiTol) throw_flow_violation(t0, i, s.chi);
    double z = 0.0, phi = 0.0;
    for (const auto& [j, w] : graph.out_neighbors(i)) {
      const double diff = s.xhat - states[j].xhat;
      z += w * diff;
      phi += w * diff * diff;
    }
    const double e0 = s.error();
    const double chi0 = std::max(s.chi, 0.0);
    coef[i] = {s.x, e0, chi0, z, phi, params[i].sigma * phi + 2.0 * e0 * z};
    const Candidate c = agent_candidate(coef[i], params[i], mode, t0,
                                        t0 - s.timer, t_limit);
    cand_t[i] = c.t;
    t_next = std::min(t_next, c.t);
  }

  const double t_stop = std::min(t_next, t_limit);
  const double s_adv = t_stop - t0;
  for (int i = 0; i < n; ++i) {
    states[i].x = x_at(coef[i], s_adv);
    states[i].chi = clamp_chi(chi_at(coef[i], s_adv), t_stop, i);
    states[i].timer += s_adv;
  }
  if (t_next > t_limit) return std::nullopt;

  SegmentEvent ev;
  ev.t = t_next;
  for (int i = 0; i < n; ++i) {
    if (cand_t[i] <= t_next + kEventTimeTol) ev.agents.push_back(i);
  }
  return ev;
}

void apply_jumps(std::vector<AgentState>& states, std::vector<int> triggered) {
  std::sort(triggered.begin(), triggered.end());
  for (int i : triggered) states[i] = apply_broadcast(states[i]);
}

}  // namespace detcon
