#ifndef DETCON_GRAPH_HPP
#define DETCON_GRAPH_HPP

#include <span>
#include <utility>
#include <vector>

namespace detcon {

struct Edge {
  int from = 0;
  int to = 0;
  double weight = 0.0;
};

// Directed weighted communication topology. Edge (i, j) makes j an
// out-neighbor of i: agent i reads j's broadcast state, and a broadcast by
// j is delivered to every agent that has j as an out-neighbor.
//
// Construction enforces: positive finite weights, no self-loops, no
// duplicate edges, and a positive out-degree for every agent (the
// guaranteed inter-event time sigma_i/d_i is undefined otherwise).
// Instances are immutable and safe to share across threads.
class WeightedDigraph {
 public:
  WeightedDigraph(int n, std::vector<Edge> edges);

  // Builds a graph from a Laplacian matrix: off-diagonal entries must be
  // <= 0 and every row must sum to zero (within tol). An edge (i, j) with
  // weight -L[i][j] is created for each negative off-diagonal entry.
  static WeightedDigraph from_laplacian(const std::vector<std::vector<double>>& lap,
                                        double tol = 1e-9);

  int size() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }

  // (neighbor, weight) pairs sorted by neighbor index
  const std::vector<std::pair<int, double>>& out_neighbors(int i) const { return out_[i]; }
  // agents that receive i's broadcasts (i is one of their out-neighbors)
  const std::vector<int>& in_neighbors(int i) const { return in_[i]; }

  double out_degree(int i) const { return out_degree_[i]; }
  double in_degree(int i) const { return in_degree_[i]; }

  // L = D_out - A; row i has out_degree(i) on the diagonal and -w_ij at
  // each out-neighbor j. Rows sum to zero by construction.
  std::vector<std::vector<double>> laplacian() const;

  // true iff in-degree equals out-degree at every vertex (within tol)
  bool is_weight_balanced(double tol = 1e-9) const;
  bool is_strongly_connected() const;

  // zhat with zhat_i = sum_j w_ij (xhat_i - xhat_j); sums to zero when the
  // graph is weight-balanced
  std::vector<double> apply_laplacian(std::span<const double> xhat) const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<int, double>>> out_;
  std::vector<std::vector<int>> in_;
  std::vector<double> out_degree_;
  std::vector<double> in_degree_;
};

}  // namespace detcon

#endif
