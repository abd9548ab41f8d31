#ifndef DETCON_ANALYSIS_HPP
#define DETCON_ANALYSIS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "detcon/simulator.hpp"

namespace detcon {

struct InterEventStats {
  int events = 0;
  std::vector<double> gaps;  // sorted ascending
  double min_gap = 0.0;      // NaN when fewer than two events
  double mean_gap = 0.0;     // NaN when fewer than two events
};

struct MietRow {
  double bound = 0.0;    // guaranteed gap for the active mode
  double min_gap = 0.0;  // NaN when not applicable
  double margin = 0.0;   // min_gap - bound, NaN when not applicable
  bool applicable = false;
  bool violated = false;  // min_gap < bound - kRootTol
};

struct Metrics {
  double x_bar = 0.0;  // mean of the initial states, the consensus target
  std::vector<double> t;       // sample times
  std::vector<double> v;       // v = vp + vc pointwise
  std::vector<double> vp;      // squared disagreement ||x - x_bar||^2
  std::vector<double> vc;      // sum of the clock variables
  std::vector<InterEventStats> inter_event;
  double r_com = 0.0;  // all events divided by the horizon
  std::vector<double> r_com_per_agent;
  double cost = 0.0;  // time integral of the squared disagreement
  double conservation_residual = 0.0;
  std::vector<MietRow> miet;
};

// V, V_P, V_C traces over the samples; x_bar is pinned to the first sample
void lyapunov_traces(const Trajectory& traj, Metrics& out);

// trapezoidal integral of sum_i (x_i - x_bar)^2 over the sampled horizon
double h2_cost(const Trajectory& traj);

std::vector<InterEventStats> inter_event_stats(const Trajectory& traj, int n_agents);

// observed minimum gaps against the guaranteed bound of the active mode
std::vector<MietRow> miet_report(const Trajectory& traj,
                                 const std::vector<AgentParams>& params, SimMode mode);

Metrics compute_metrics(const Trajectory& traj, const WeightedDigraph& graph,
                        const std::vector<AgentParams>& params, SimMode mode);

// Drives a single agent from a fresh broadcast with the worst-case constant
// neighbor offsets mu_j = -e_target / (d T) and returns the time at which
// its clock returns to zero with a nonzero error. The result equals
// sigma/d for every nonzero e_target: the guaranteed gap is tight.
double adversarial_miet_run(const AgentParams& params, double e_target);

struct SweepRow {
  double sigma = 0.0;
  double r_com = 0.0;
  double cost = 0.0;
};

// one run per sigma with that value applied to every agent, identical x0
// and seed; t_max is rescaled to its default for each sigma
std::vector<SweepRow> sigma_sweep(const SimConfig& base, std::span<const double> sigmas);

struct WienerCheck {
  int n_seeds = 0;
  double target_variance = 0.0;  // horizon * variance / n
  double sample_variance = 0.0;
  double sample_mean = 0.0;
  double x_bar0 = 0.0;
  double min_gap_margin = 0.0;  // min over agents and runs of (gap - bound)
  bool variance_ok = false;
  bool mean_ok = false;
  bool miet_ok = false;
  bool pass() const { return variance_ok && mean_ok && miet_ok; }
};

// Repeats a noisy run over n_seeds seeds and checks that the final average
// state behaves like a Brownian motion with variance t * variance / n:
// sample variance within a factor 2 of the target, sample mean within three
// standard errors of the initial average, gaps never below the guaranteed
// bound. Requires n_seeds >= 30.
WienerCheck wiener_band_check(const SimConfig& config, int n_seeds);

// nonincreasing / nondecreasing up to `allowed` adjacent-pair inversions
bool trend_holds(std::span<const double> values, bool nonincreasing, int allowed = 1);

}  // namespace detcon

#endif
