#ifndef DETCON_TEST_UTIL_HPP
#define DETCON_TEST_UTIL_HPP

#include <cmath>
#include <vector>

#include "detcon/graph.hpp"
#include "detcon/rng.hpp"
#include "detcon/simulator.hpp"

namespace testutil {

// the 5-agent benchmark topology, entered as its printed Laplacian
inline std::vector<std::vector<double>> paper_laplacian() {
  return {{2, -1, 0, 0, -1},
          {0, 2, 0, 0, -2},
          {-2, 0, 2, 0, 0},
          {0, -1, -2, 3, 0},
          {0, 0, 0, -3, 3}};
}

inline detcon::WeightedDigraph paper_graph() {
  return detcon::WeightedDigraph::from_laplacian(paper_laplacian());
}

inline std::vector<double> paper_x0() { return {-1.0, 0.0, 2.0, 1.0, 2.0}; }

inline std::vector<double> paper_sigma() { return {0.9, 0.4, 0.4, 0.3, 0.6}; }

inline std::vector<detcon::AgentParams> paper_params() {
  const detcon::WeightedDigraph g = paper_graph();
  const auto sigma = paper_sigma();
  std::vector<detcon::AgentParams> params(g.size());
  for (int i = 0; i < g.size(); ++i) {
    params[i].sigma = sigma[i];
    params[i].d = g.out_degree(i);
    params[i].tau = 0.0;
    params[i].delta = 0.0;
    params[i].t_max = 10.0 * params[i].miet();
  }
  return params;
}

inline detcon::SimConfig paper_config() {
  detcon::SimConfig cfg{paper_graph(), paper_params(), paper_x0()};
  cfg.horizon = 20.0;
  cfg.mode = detcon::SimMode::Nominal;
  cfg.sample_dt = 1e-3;
  cfg.rng_seed = 42;
  return cfg;
}

inline detcon::WeightedDigraph two_agent_ring() {
  return detcon::WeightedDigraph(2, {{0, 1, 1.0}, {1, 0, 1.0}});
}

inline std::vector<detcon::AgentParams> two_agent_params(double sigma = 0.5) {
  std::vector<detcon::AgentParams> params(2);
  for (auto& p : params) {
    p.sigma = sigma;
    p.d = 1.0;
    p.t_max = 10.0 * p.miet();
  }
  return params;
}

// brute-force all-pairs reachability
inline bool floyd_warshall_strongly_connected(int n, const std::vector<detcon::Edge>& edges) {
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i) reach[i][i] = 1;
  for (const auto& e : edges) reach[e.from][e.to] = 1;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (reach[i][k] && reach[k][j]) reach[i][j] = 1;
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!reach[i][j]) return false;
    }
  }
  return true;
}

// balance via explicit degree sums over the edge list
inline bool degree_sums_balanced(int n, const std::vector<detcon::Edge>& edges,
                                 double tol = 1e-9) {
  std::vector<double> din(n, 0.0), dout(n, 0.0);
  for (const auto& e : edges) {
    dout[e.from] += e.weight;
    din[e.to] += e.weight;
  }
  for (int i = 0; i < n; ++i) {
    if (std::abs(din[i] - dout[i]) > tol) return false;
  }
  return true;
}

// random graph with every out-degree positive; not necessarily balanced
inline detcon::WeightedDigraph random_graph(detcon::CounterRng& rng, int n) {
  while (true) {
    std::vector<detcon::Edge> edges;
    std::vector<std::vector<char>> used(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i) {
      const int j0 = (i + 1 + static_cast<int>(rng.next_u64() % (n - 1))) % n;
      used[i][j0] = 1;
      edges.push_back({i, j0, 0.2 + rng.uniform()});
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j && !used[i][j] && rng.uniform() < 0.25) {
          edges.push_back({i, j, 0.2 + rng.uniform()});
        }
      }
    }
    return detcon::WeightedDigraph(n, std::move(edges));
  }
}

// sum of cycle permutations: weight-balanced by construction
inline detcon::WeightedDigraph random_balanced_graph(detcon::CounterRng& rng, int n) {
  std::vector<detcon::Edge> edges;
  const double w_fwd = 0.3 + rng.uniform();
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, w_fwd});
  if (n > 2 && rng.uniform() < 0.7) {
    const double w_rev = 0.3 + rng.uniform();
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + n - 1) % n, w_rev});
  }
  return detcon::WeightedDigraph(n, std::move(edges));
}

}  // namespace testutil

#endif
