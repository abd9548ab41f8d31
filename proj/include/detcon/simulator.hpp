#ifndef DETCON_SIMULATOR_HPP
#define DETCON_SIMULATOR_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "detcon/agent.hpp"
#include "detcon/errors.hpp"
#include "detcon/graph.hpp"

namespace detcon {

enum class SimMode { Nominal, Robust, MaxTime, NoisySelfTriggered };

const char* to_string(SimMode mode);
std::optional<SimMode> mode_from_string(const std::string& name);

struct NoiseModel {
  double variance = 0.0;   // per-agent white noise variance
  double dt_noise = 1e-3;  // Euler-Maruyama step for the physical state
};

struct SimConfig {
  WeightedDigraph graph;
  std::vector<AgentParams> params;
  std::vector<double> x0;
  double horizon = 20.0;
  SimMode mode = SimMode::Nominal;
  std::optional<NoiseModel> noise;
  double sample_dt = 1e-2;
  std::uint64_t rng_seed = 0;
  // detection delay draws use their own seed so a noise seed change does
  // not reshuffle delays; defaults to rng_seed
  std::optional<std::uint64_t> detection_delay_seed;

  std::uint64_t delay_seed() const { return detection_delay_seed.value_or(rng_seed); }

  // throws ConfigError with an actionable message
  void validate() const;
};

enum class EventKind { ClockZero, RobustWindow, MaxTime };
const char* to_string(EventKind kind);
std::optional<EventKind> event_kind_from_string(const std::string& name);

struct AgentSnapshot {
  double x = 0.0, xhat = 0.0, chi = 0.0, timer = 0.0;
};

struct EventRecord {
  double t = 0.0;  // time the broadcast executes
  int agent = 0;   // 0-based
  EventKind kind = EventKind::ClockZero;
  AgentSnapshot pre, post;
  double detection_delay = 0.0;  // realized delay, robust triggers only
};

struct Sample {
  double t = 0.0;
  std::vector<double> x, xhat, chi;
};

struct Trajectory {
  std::vector<Sample> samples;  // dense cadence plus exact event instants
  std::vector<EventRecord> events;
  std::vector<AgentState> terminal;
  double horizon = 0.0;
};

// Refractory window after an event during which an agent's trigger is not
// evaluated: sigma/d in the nominal and self-triggered modes, sigma/d - delta
// when detection delays shrink the guaranteed gap. Has no effect on exact
// noiseless trajectories but pins the inter-event bound under noise.
double dwell_gate(const AgentParams& params, SimMode mode);

// Runs the hybrid system to the horizon: closed-form flow segments between
// broadcasts, exact quadratic event localization, jumps applied in ascending
// agent index with ties grouped. Deterministic for a fixed seed.
Trajectory run(const SimConfig& config);

struct SegmentEvent {
  double t = 0.0;
  std::vector<int> agents;  // everyone whose trigger crosses at t
};

// One closed-form flow segment with all xhat frozen: advances states to the
// earliest trigger crossing in (t0, t_limit], or to t_limit when nothing
// crosses. Jumps are not applied. Noise-free modes only. Throws
// SimulationError if some chi starts below -kChiTol.
std::optional<SegmentEvent> flow_segment_exact(std::vector<AgentState>& states,
                                               const WeightedDigraph& graph,
                                               const std::vector<AgentParams>& params,
                                               SimMode mode, double t0, double t_limit);

// Broadcasts for all triggered agents at one instant, ascending agent index.
// Order does not matter: each jump touches only that agent's xhat and timer.
void apply_jumps(std::vector<AgentState>& states, std::vector<int> triggered);

}  // namespace detcon

#endif
