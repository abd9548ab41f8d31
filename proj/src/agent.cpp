#include "detcon/agent.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "detcon/errors.hpp"

namespace detcon {

void AgentParams::validate(int agent_label) const {
  std::ostringstream msg;
  msg << "agent " << agent_label << ": ";
  if (!(d > 0.0) || !std::isfinite(d)) {
    msg << "out-degree d = " << d << " must be positive";
    throw ConfigError(msg.str());
  }
  if (!(sigma > 0.0 && sigma < 1.0)) {
    msg << "sigma = " << sigma << " outside (0, 1)";
    throw ConfigError(msg.str());
  }
  if (tau < 0.0) {
    msg << "tau = " << tau << " must be nonnegative";
    throw ConfigError(msg.str());
  }
  // half-ulp slack: printed periods often equal sigma/d exactly in decimal
  if (tau - miet() > 1e-12) {
    msg << "tau = " << tau << " exceeds the guaranteed minimum inter-event time sigma/d = "
        << miet() << ": infeasible";
    throw ConfigError(msg.str());
  }
  if (delta < 0.0 || delta >= miet()) {
    msg << "delta = " << delta << " outside [0, sigma/d = " << miet() << ")";
    throw ConfigError(msg.str());
  }
  if (!(t_max > 0.0)) {
    msg << "t_max = " << t_max << " must be positive";
    throw ConfigError(msg.str());
  }
  if (t_max < miet()) {
    msg << "t_max = " << t_max << " below the guaranteed minimum inter-event time sigma/d = "
        << miet();
    throw ConfigError(msg.str());
  }
}

LocalSums local_sums(const NeighborView& view) {
  LocalSums s;
  for (const auto& [w, xhat_j] : view.neighbors) {
    const double diff = view.xhat_self - xhat_j;
    s.zhat += w * diff;
    s.phihat += w * diff * diff;
  }
  return s;
}

double control_input(const NeighborView& view) { return -local_sums(view).zhat; }

double clock_rate(const AgentState& state, const NeighborView& view,
                  const AgentParams& params) {
  const LocalSums s = local_sums(view);
  return params.sigma * s.phihat + 2.0 * state.error() * s.zhat;
}

bool trigger_nominal(const AgentState& state, double e_tol) {
  return state.chi <= kChiTol && std::abs(state.error()) > e_tol;
}

double time_to_event_bound(const AgentState& state, const AgentParams& params) {
  double chi = state.chi;
  if (chi < 0.0) {
    if (chi < -kChiTol) {
      throw std::invalid_argument("time_to_event_bound: chi < 0, outside the flow set");
    }
    chi = 0.0;  // numerical undershoot
  }
  const double e2 = state.error() * state.error();
  if (chi == 0.0 && e2 == 0.0) return params.miet();
  return params.miet() * (chi / (chi + e2));
}

bool trigger_robust(const AgentState& state, const AgentParams& params) {
  return time_to_event_bound(state, params) <= params.delta;
}

bool trigger_maxtime(const AgentState& state, const AgentParams& params, double e_tol) {
  return state.timer >= params.t_max && std::abs(state.error()) > e_tol;
}

AgentState apply_broadcast(const AgentState& state) {
  AgentState next = state;
  next.xhat = state.x;
  next.timer = 0.0;
  return next;
}

}  // namespace detcon
