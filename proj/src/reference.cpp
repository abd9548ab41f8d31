#include "detcon/reference.hpp"

#include <algorithm>
#include <cmath>

namespace detcon {

namespace {

struct Derivs {
  std::vector<double> z, gamma;
};

Derivs derivatives(const WeightedDigraph& g, const std::vector<AgentParams>& params,
                   const std::vector<double>& x, const std::vector<double>& xhat) {
  const int n = g.size();
  Derivs d;
  d.z.assign(n, 0.0);
  d.gamma.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double z = 0.0, phi = 0.0;
    for (const auto& [j, w] : g.out_neighbors(i)) {
      const double diff = xhat[i] - xhat[j];
      z += w * diff;
      phi += w * diff * diff;
    }
    d.z[i] = z;
    d.gamma[i] = params[i].sigma * phi + 2.0 * (x[i] - xhat[i]) * z;
  }
  return d;
}

}  // namespace

std::vector<OracleEvent> run_euler_oracle(const WeightedDigraph& g,
                                          const std::vector<AgentParams>& params,
                                          std::vector<double> x0, double horizon,
                                          double dt) {
  const int n = g.size();
  std::vector<double> x = x0;
  std::vector<double> xhat = std::move(x0);
  std::vector<double> chi(n, 0.0);
  std::vector<OracleEvent> events;

  double t = 0.0;
  while (t < horizon) {
    const double step = std::min(dt, horizon - t);
    const Derivs d = derivatives(g, params, x, xhat);

    auto triggered_at = [&](double h, int i) {
      const double chi_h = chi[i] + d.gamma[i] * h;
      const double e_h = (x[i] - d.z[i] * h) - xhat[i];
      return chi_h <= 0.0 && std::abs(e_h) > kErrorTol;
    };
    auto any_triggered = [&](double h) {
      for (int i = 0; i < n; ++i) {
        if (triggered_at(h, i)) return true;
      }
      return false;
    };

    if (!any_triggered(step)) {
      for (int i = 0; i < n; ++i) {
        x[i] -= d.z[i] * step;
        chi[i] += d.gamma[i] * step;
        if (chi[i] < 0.0) chi[i] = 0.0;  // grazing pass with |e| in the dead band
      }
      t += step;
      continue;
    }

    // bisect the first instant inside (0, step] where some trigger holds
    double lo = 0.0, hi = step;
    for (int iter = 0; iter < 80; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (any_triggered(mid)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    const double h = hi;
    for (int i = 0; i < n; ++i) {
      x[i] -= d.z[i] * h;
      chi[i] += d.gamma[i] * h;
      if (chi[i] < 0.0) chi[i] = 0.0;
    }
    t += h;
    for (int i = 0; i < n; ++i) {
      if (chi[i] <= 0.0 && std::abs(x[i] - xhat[i]) > kErrorTol) {
        events.push_back({t, i});
        xhat[i] = x[i];
      }
    }
  }
  return events;
}

}  // namespace detcon
