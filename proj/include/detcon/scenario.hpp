#ifndef DETCON_SCENARIO_HPP
#define DETCON_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "detcon/simulator.hpp"

namespace detcon {

struct AgentSpec {
  double sigma = 0.5;
  std::optional<double> tau;     // default 0
  std::optional<double> delta;   // default 0
  std::optional<double> t_max;   // default 10 * sigma / d
};

// Declarative scenario file (JSON). The graph is given either as an
// explicit Laplacian or as an edge list with 1-based agent indices; both
// forms round-trip. Agent indices in every produced file are 1-based.
struct Scenario {
  std::string name = "scenario";
  SimMode mode = SimMode::Nominal;
  std::optional<std::vector<std::vector<double>>> laplacian;
  struct EdgeList {
    int n = 0;
    std::vector<Edge> edges;  // 0-based internally
  };
  std::optional<EdgeList> edge_list;
  std::vector<double> x0;
  std::vector<AgentSpec> agents;
  double horizon = 20.0;
  double sample_dt = 1e-2;
  std::uint64_t rng_seed = 0;
  std::optional<std::uint64_t> detection_delay_seed;
  std::optional<NoiseModel> noise;

  static Scenario load_file(const std::string& path);
  static Scenario from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  // builds the graph, fills parameter defaults, and validates everything;
  // throws ConfigError with an actionable message
  SimConfig to_config() const;

  // FNV-1a over the canonical JSON form; stamped into every output file
  std::uint64_t hash() const;
  std::string hash_hex() const;
};

}  // namespace detcon

#endif
