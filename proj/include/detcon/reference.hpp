#ifndef DETCON_REFERENCE_HPP
#define DETCON_REFERENCE_HPP

#include <vector>

#include "detcon/agent.hpp"
#include "detcon/graph.hpp"

namespace detcon {

struct OracleEvent {
  double t = 0.0;
  int agent = 0;
};

// Brute-force reference for the nominal mode: explicit Euler at a fixed
// step with bisection inside the bracketing step to localize the clock
// zero crossing. Deliberately independent of the closed-form engine; used
// only to cross-check its event times.
std::vector<OracleEvent> run_euler_oracle(const WeightedDigraph& graph,
                                          const std::vector<AgentParams>& params,
                                          std::vector<double> x0, double horizon,
                                          double dt);

}  // namespace detcon

#endif
