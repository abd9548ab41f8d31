#include "detcon/scenario.hpp"

#include <fstream>
#include <sstream>

namespace detcon {

using nlohmann::json;

namespace {

[[noreturn]] void bad_field(const std::string& what) {
  throw ConfigError("scenario: " + what);
}

double require_number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    bad_field(std::string("missing or non-numeric field '") + key + "'");
  }
  return j[key].get<double>();
}

}  // namespace

Scenario Scenario::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("scenario file not found: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("scenario file " + path + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

Scenario Scenario::from_json(const json& j) {
  Scenario sc;
  if (j.contains("name")) sc.name = j["name"].get<std::string>();
  if (j.contains("mode")) {
    const auto mode = mode_from_string(j["mode"].get<std::string>());
    if (!mode) bad_field("unknown mode '" + j["mode"].get<std::string>() + "'");
    sc.mode = *mode;
  }

  if (!j.contains("graph") || !j["graph"].is_object()) bad_field("missing 'graph' object");
  const json& jg = j["graph"];
  if (jg.contains("laplacian")) {
    sc.laplacian = jg["laplacian"].get<std::vector<std::vector<double>>>();
  } else if (jg.contains("edges")) {
    Scenario::EdgeList el;
    if (!jg.contains("n")) bad_field("edge-list graph needs the agent count 'n'");
    el.n = jg["n"].get<int>();
    for (const json& je : jg["edges"]) {
      if (!je.is_array() || je.size() != 3) bad_field("edges must be [from, to, weight] triples");
      // file indices are 1-based
      el.edges.push_back({je[0].get<int>() - 1, je[1].get<int>() - 1, je[2].get<double>()});
    }
    sc.edge_list = std::move(el);
  } else {
    bad_field("graph needs either 'laplacian' or 'n' + 'edges'");
  }

  if (!j.contains("x0")) bad_field("missing 'x0'");
  sc.x0 = j["x0"].get<std::vector<double>>();

  if (!j.contains("agents") || !j["agents"].is_array()) bad_field("missing 'agents' array");
  for (const json& ja : j["agents"]) {
    AgentSpec spec;
    spec.sigma = require_number(ja, "sigma");
    if (ja.contains("tau")) spec.tau = ja["tau"].get<double>();
    if (ja.contains("delta")) spec.delta = ja["delta"].get<double>();
    if (ja.contains("t_max")) spec.t_max = ja["t_max"].get<double>();
    sc.agents.push_back(spec);
  }

  sc.horizon = require_number(j, "horizon");
  sc.sample_dt = require_number(j, "sample_dt");
  if (j.contains("rng_seed")) sc.rng_seed = j["rng_seed"].get<std::uint64_t>();
  if (j.contains("detection_delay_seed")) {
    sc.detection_delay_seed = j["detection_delay_seed"].get<std::uint64_t>();
  }
  if (j.contains("noise")) {
    NoiseModel nm;
    nm.variance = require_number(j["noise"], "variance");
    if (j["noise"].contains("dt_noise")) nm.dt_noise = j["noise"]["dt_noise"].get<double>();
    sc.noise = nm;
  }
  return sc;
}

json Scenario::to_json() const {
  json j;
  j["name"] = name;
  j["mode"] = to_string(mode);
  if (laplacian) {
    j["graph"]["laplacian"] = *laplacian;
  } else if (edge_list) {
    j["graph"]["n"] = edge_list->n;
    json edges = json::array();
    for (const Edge& e : edge_list->edges) {
      edges.push_back({e.from + 1, e.to + 1, e.weight});
    }
    j["graph"]["edges"] = std::move(edges);
  }
  j["x0"] = x0;
  json ja = json::array();
  for (const AgentSpec& a : agents) {
    json entry;
    entry["sigma"] = a.sigma;
    if (a.tau) entry["tau"] = *a.tau;
    if (a.delta) entry["delta"] = *a.delta;
    if (a.t_max) entry["t_max"] = *a.t_max;
    ja.push_back(std::move(entry));
  }
  j["agents"] = std::move(ja);
  j["horizon"] = horizon;
  j["sample_dt"] = sample_dt;
  j["rng_seed"] = rng_seed;
  if (detection_delay_seed) j["detection_delay_seed"] = *detection_delay_seed;
  if (noise) {
    j["noise"]["variance"] = noise->variance;
    j["noise"]["dt_noise"] = noise->dt_noise;
  }
  return j;
}

std::uint64_t Scenario::hash() const {
  const std::string dump = to_json().dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string Scenario::hash_hex() const {
  std::ostringstream os;
  os << std::hex << hash();
  return os.str();
}

SimConfig Scenario::to_config() const {
  if (static_cast<bool>(laplacian) == static_cast<bool>(edge_list)) {
    throw ConfigError("scenario: graph must be given as exactly one of laplacian or edges");
  }
  WeightedDigraph graph = laplacian ? WeightedDigraph::from_laplacian(*laplacian)
                                    : WeightedDigraph(edge_list->n, edge_list->edges);
  const int n = graph.size();
  if (static_cast<int>(agents.size()) != n) {
    std::ostringstream msg;
    msg << "scenario: " << agents.size() << " agent entries for a graph of " << n;
    throw ConfigError(msg.str());
  }
  if (static_cast<int>(x0.size()) != n) {
    std::ostringstream msg;
    msg << "scenario: x0 has " << x0.size() << " entries for a graph of " << n;
    throw ConfigError(msg.str());
  }
  std::vector<AgentParams> params(n);
  for (int i = 0; i < n; ++i) {
    AgentParams& p = params[i];
    p.sigma = agents[i].sigma;
    p.d = graph.out_degree(i);
    p.tau = agents[i].tau.value_or(0.0);
    p.delta = agents[i].delta.value_or(0.0);
    p.t_max = agents[i].t_max.value_or(10.0 * p.sigma / p.d);
  }
  SimConfig cfg{std::move(graph), std::move(params), x0};
  cfg.horizon = horizon;
  cfg.mode = mode;
  cfg.noise = noise;
  cfg.sample_dt = sample_dt;
  cfg.rng_seed = rng_seed;
  cfg.detection_delay_seed = detection_delay_seed;
  cfg.validate();
  return cfg;
}

}  // namespace detcon
