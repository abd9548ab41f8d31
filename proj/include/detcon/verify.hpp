#ifndef DETCON_VERIFY_HPP
#define DETCON_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "detcon/simulator.hpp"

namespace detcon {

struct CheckResult {
  std::string name;
  bool pass = false;
  bool skipped = false;  // not applicable to this mode; counts as pass
  std::string detail;
};

// Offline-checkable invariants over a completed trajectory. All of these
// run equally on an in-process Trajectory or on one read back from CSV.
CheckResult check_conservation(const Trajectory& traj, bool noisy, double tol = 1e-9);
CheckResult check_lyapunov_monotone(const Trajectory& traj, bool noisy, double tol = 1e-8);
// flow rate of V against -sum (1 - sigma_i) phihat_i on event-free intervals
CheckResult check_vdot_consistency(const Trajectory& traj, const WeightedDigraph& graph,
                                   const std::vector<AgentParams>& params, bool noisy,
                                   double rel_tol = 1e-4);
CheckResult check_miet(const Trajectory& traj, const std::vector<AgentParams>& params,
                       SimMode mode);
// realized remaining time to each agent's next event is never shorter than
// the local lower bound; meaningful for the nominal trigger only
CheckResult check_time_to_event_lemma(const Trajectory& traj,
                                      const std::vector<AgentParams>& params,
                                      SimMode mode);
// jumps never change V: x and chi are identical across every event record
CheckResult check_jump_invariance(const Trajectory& traj);

// Engine-level checks, independent of any particular scenario.
CheckResult check_jump_commutativity(int cases = 50, std::uint64_t seed = 2024);
// closed-form event times against the fixed-step Euler oracle on random
// 3-agent weight-balanced strongly connected scenarios
CheckResult check_oracle_equivalence(int cases = 10, std::uint64_t seed = 2024,
                                     double dt = 1e-6, double tol = 1e-5);

std::vector<CheckResult> verify_trajectory(const Trajectory& traj,
                                           const WeightedDigraph& graph,
                                           const std::vector<AgentParams>& params,
                                           SimMode mode, bool noisy);

// runs the scenario and the full check set, engine checks included
std::vector<CheckResult> verify_scenario(const SimConfig& config, int oracle_cases = 10);

// deterministic random scenario used by the oracle-equivalence check:
// 3 agents, forward plus reverse ring (weight-balanced, strongly connected)
SimConfig random_three_agent_config(std::uint64_t seed, int index);

}  // namespace detcon

#endif
