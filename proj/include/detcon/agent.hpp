#ifndef DETCON_AGENT_HPP
#define DETCON_AGENT_HPP

#include <utility>
#include <vector>

namespace detcon {

// shared numerical tolerances
inline constexpr double kErrorTol = 1e-12;      // |e| below this counts as zero error
inline constexpr double kChiTol = 1e-10;        // allowed numerical undershoot of chi
inline constexpr double kEventTimeTol = 1e-12;  // simultaneity window for events
inline constexpr double kRootTol = 1e-9;        // event localization slack in gap checks

// Per-agent design constants. sigma trades convergence speed against
// inter-event spacing: the guaranteed minimum inter-event time is sigma/d,
// reduced to sigma/d - delta when event detection can be delayed by up to
// delta. t_max is the secondary trigger deadline that flushes a stale
// nonzero error even while chi stays positive.
struct AgentParams {
  double sigma = 0.5;  // in (0, 1)
  double tau = 0.0;    // hardware minimum period, must not exceed the guaranteed gap
  double delta = 0.0;  // maximum event detection delay
  double t_max = 0.0;  // secondary maximum time between events
  double d = 0.0;      // out-degree, cached from the graph

  double miet() const { return sigma / d; }
  double robust_miet() const { return sigma / d - delta; }

  // agent_label is 1-based, matching scenario files and CSV output
  void validate(int agent_label) const;
};

// Extended state of one agent.
struct AgentState {
  double x = 0.0;      // physical state
  double xhat = 0.0;   // last broadcast state
  double chi = 0.0;    // clock-like variable, nonnegative along flows
  double timer = 0.0;  // time since this agent's last event

  double error() const { return x - xhat; }
};

// Everything agent i can see: its own broadcast value plus the broadcast
// values of its out-neighbors with the edge weights.
struct NeighborView {
  double xhat_self = 0.0;
  std::vector<std::pair<double, double>> neighbors;  // (weight, xhat_j)
};

struct LocalSums {
  double zhat = 0.0;    // sum_j w_ij (xhat_i - xhat_j)
  double phihat = 0.0;  // sum_j w_ij (xhat_i - xhat_j)^2, nonnegative
};

LocalSums local_sums(const NeighborView& view);

// control law u_i = -zhat_i
double control_input(const NeighborView& view);

// clock dynamics: sigma * phihat + 2 e zhat; nonnegative whenever e = 0
double clock_rate(const AgentState& state, const NeighborView& view,
                  const AgentParams& params);

// clock reached zero with a nonzero error
bool trigger_nominal(const AgentState& state, double e_tol = kErrorTol);

// Lower bound on the time until this agent's next clock-zero event, in
// [0, sigma/d]. chi must be >= -kChiTol; small undershoot is clamped.
double time_to_event_bound(const AgentState& state, const AgentParams& params);

// the next event may be less than delta away: trigger now so a detection
// delay of up to delta still lands before the clock reaches zero
bool trigger_robust(const AgentState& state, const AgentParams& params);

bool trigger_maxtime(const AgentState& state, const AgentParams& params,
                     double e_tol = kErrorTol);

// Broadcast jump: publishes x into xhat and restarts the timer; x and chi
// are left unchanged, so the error is zero afterwards.
AgentState apply_broadcast(const AgentState& state);

}  // namespace detcon

#endif
