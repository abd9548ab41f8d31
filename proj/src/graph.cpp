#include "detcon/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "detcon/errors.hpp"

namespace detcon {

WeightedDigraph::WeightedDigraph(int n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)) {
  if (n_ <= 0) throw ConfigError("graph: agent count must be positive");
  out_.resize(n_);
  in_.resize(n_);
  out_degree_.assign(n_, 0.0);
  in_degree_.assign(n_, 0.0);

  std::set<std::pair<int, int>> seen;
  for (const Edge& e : edges_) {
    if (e.from < 0 || e.from >= n_ || e.to < 0 || e.to >= n_) {
      std::ostringstream msg;
      msg << "graph: edge (" << e.from + 1 << ", " << e.to + 1
          << ") out of range for " << n_ << " agents";
      throw ConfigError(msg.str());
    }
    if (e.from == e.to) {
      std::ostringstream msg;
      msg << "graph: self-loop on agent " << e.from + 1;
      throw ConfigError(msg.str());
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      std::ostringstream msg;
      msg << "graph: edge (" << e.from + 1 << ", " << e.to + 1
          << ") weight " << e.weight << " must be positive and finite";
      throw ConfigError(msg.str());
    }
    if (!seen.insert({e.from, e.to}).second) {
      std::ostringstream msg;
      msg << "graph: duplicate edge (" << e.from + 1 << ", " << e.to + 1 << ")";
      throw ConfigError(msg.str());
    }
    out_[e.from].emplace_back(e.to, e.weight);
    in_[e.to].push_back(e.from);
    out_degree_[e.from] += e.weight;
    in_degree_[e.to] += e.weight;
  }
  for (int i = 0; i < n_; ++i) {
    if (out_degree_[i] <= 0.0) {
      std::ostringstream msg;
      msg << "graph: agent " << i + 1 << " has zero out-degree";
      throw ConfigError(msg.str());
    }
    std::sort(out_[i].begin(), out_[i].end());
    std::sort(in_[i].begin(), in_[i].end());
  }
}

WeightedDigraph WeightedDigraph::from_laplacian(
    const std::vector<std::vector<double>>& lap, double tol) {
  const int n = static_cast<int>(lap.size());
  if (n == 0) throw ConfigError("graph: empty Laplacian");
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(lap[i].size()) != n) {
      throw ConfigError("graph: Laplacian is not square");
    }
    double row_sum = 0.0;
    for (int j = 0; j < n; ++j) {
      row_sum += lap[i][j];
      if (i == j) continue;
      if (lap[i][j] > tol) {
        std::ostringstream msg;
        msg << "graph: Laplacian entry (" << i + 1 << ", " << j + 1 << ") = "
            << lap[i][j] << " must be nonpositive";
        throw ConfigError(msg.str());
      }
      if (lap[i][j] < -tol) edges.push_back({i, j, -lap[i][j]});
    }
    if (std::abs(row_sum) > tol) {
      std::ostringstream msg;
      msg << "graph: Laplacian row " << i + 1 << " sums to " << row_sum
          << ", expected 0";
      throw ConfigError(msg.str());
    }
  }
  return WeightedDigraph(n, std::move(edges));
}

std::vector<std::vector<double>> WeightedDigraph::laplacian() const {
  std::vector<std::vector<double>> lap(n_, std::vector<double>(n_, 0.0));
  for (int i = 0; i < n_; ++i) {
    lap[i][i] = out_degree_[i];
    for (const auto& [j, w] : out_[i]) lap[i][j] = -w;
  }
  return lap;
}

bool WeightedDigraph::is_weight_balanced(double tol) const {
  for (int i = 0; i < n_; ++i) {
    if (std::abs(in_degree_[i] - out_degree_[i]) > tol) return false;
  }
  return true;
}

bool WeightedDigraph::is_strongly_connected() const {
  // forward and reverse reachability from vertex 0
  auto reach = [this](bool forward) {
    std::vector<char> seen(n_, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      if (forward) {
        for (const auto& [j, w] : out_[v]) {
          (void)w;
          if (!seen[j]) {
            seen[j] = 1;
            ++count;
            stack.push_back(j);
          }
        }
      } else {
        for (int j : in_[v]) {
          if (!seen[j]) {
            seen[j] = 1;
            ++count;
            stack.push_back(j);
          }
        }
      }
    }
    return count == n_;
  };
  return reach(true) && reach(false);
}

std::vector<double> WeightedDigraph::apply_laplacian(std::span<const double> xhat) const {
  if (static_cast<int>(xhat.size()) != n_) {
    throw std::invalid_argument("apply_laplacian: vector length does not match agent count");
  }
  std::vector<double> zhat(n_, 0.0);
  for (int i = 0; i < n_; ++i) {
    double z = 0.0;
    for (const auto& [j, w] : out_[i]) z += w * (xhat[i] - xhat[j]);
    zhat[i] = z;
  }
  return zhat;
}

}  // namespace detcon
