#ifndef DETCON_IO_HPP
#define DETCON_IO_HPP

#include <cstdint>
#include <string>

#include "detcon/analysis.hpp"
#include "detcon/simulator.hpp"

namespace detcon::io {

// provenance stamped into every output file header
struct RunHeader {
  std::string scenario_name;
  std::string scenario_hash;
  std::uint64_t seed = 0;
  std::string mode;
};

// 17 significant digits: doubles round-trip exactly and diffs are stable
std::string format_double(double v);

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const RunHeader& header);
void write_events_csv(const std::string& path, const Trajectory& traj,
                      const RunHeader& header);
void write_metrics_json(const std::string& path, const Metrics& metrics,
                        const RunHeader& header);
// self-contained matplotlib script rendering the three standard figures
void write_plot_script(const std::string& path);

// reads trajectory.csv and events.csv back; event snapshots are not part of
// the serialized format and stay empty
Trajectory read_run_dir(const std::string& dir);

}  // namespace detcon::io

#endif
