#include "detcon/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace detcon::io {

namespace {

void write_header(std::ofstream& out, const RunHeader& h) {
  out << "# scenario: " << h.scenario_name << "\n";
  out << "# hash: " << h.scenario_hash << "\n";
  out << "# seed: " << h.seed << "\n";
  out << "# mode: " << h.mode << "\n";
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s, const std::string& file, int line_no) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    std::ostringstream msg;
    msg << file << ":" << line_no << ": bad number '" << s << "'";
    throw ConfigError(msg.str());
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const RunHeader& header) {
  auto out = open_out(path);
  write_header(out, header);
  const int n = traj.samples.empty() ? 0 : static_cast<int>(traj.samples.front().x.size());
  out << "t";
  for (int i = 1; i <= n; ++i) out << ",x" << i;
  for (int i = 1; i <= n; ++i) out << ",xhat" << i;
  for (int i = 1; i <= n; ++i) out << ",chi" << i;
  out << "\n";
  for (const Sample& s : traj.samples) {
    out << format_double(s.t);
    for (double v : s.x) out << "," << format_double(v);
    for (double v : s.xhat) out << "," << format_double(v);
    for (double v : s.chi) out << "," << format_double(v);
    out << "\n";
  }
}

void write_events_csv(const std::string& path, const Trajectory& traj,
                      const RunHeader& header) {
  auto out = open_out(path);
  write_header(out, header);
  out << "t,agent,kind,delay\n";
  for (const EventRecord& ev : traj.events) {
    out << format_double(ev.t) << "," << ev.agent + 1 << "," << to_string(ev.kind) << ","
        << format_double(ev.detection_delay) << "\n";
  }
}

void write_metrics_json(const std::string& path, const Metrics& m,
                        const RunHeader& header) {
  nlohmann::json j;
  j["scenario"] = header.scenario_name;
  j["hash"] = header.scenario_hash;
  j["seed"] = header.seed;
  j["mode"] = header.mode;
  j["x_bar"] = m.x_bar;
  j["r_com"] = m.r_com;
  j["r_com_per_agent"] = m.r_com_per_agent;
  j["cost"] = m.cost;
  j["conservation_residual"] = m.conservation_residual;
  nlohmann::json miet = nlohmann::json::array();
  for (std::size_t i = 0; i < m.miet.size(); ++i) {
    const MietRow& r = m.miet[i];
    nlohmann::json row;
    row["agent"] = i + 1;
    row["bound"] = r.bound;
    row["events"] = m.inter_event[i].events;
    if (r.applicable) {
      row["min_gap"] = r.min_gap;
      row["margin"] = r.margin;
      row["violated"] = r.violated;
    } else {
      row["min_gap"] = nullptr;
      row["margin"] = nullptr;
      row["violated"] = false;
    }
    miet.push_back(std::move(row));
  }
  j["miet"] = std::move(miet);
  j["trace"]["t"] = m.t;
  j["trace"]["v"] = m.v;
  j["trace"]["vp"] = m.vp;
  j["trace"]["vc"] = m.vc;
  auto out = open_out(path);
  out << j.dump(1) << "\n";
}

Trajectory read_run_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  const std::string traj_path = (fs::path(dir) / "trajectory.csv").string();
  const std::string events_path = (fs::path(dir) / "events.csv").string();

  Trajectory traj;
  {
    std::ifstream in(traj_path);
    if (!in) throw ConfigError("cannot read " + traj_path);
    std::string line;
    int line_no = 0;
    int n = -1;
    bool header_seen = false;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line[0] == '#') continue;
      if (!header_seen) {
        const auto fields = split_csv(line);
        if (fields.size() < 4 || (fields.size() - 1) % 3 != 0) {
          std::ostringstream msg;
          msg << traj_path << ":" << line_no << ": malformed column header";
          throw ConfigError(msg.str());
        }
        n = static_cast<int>((fields.size() - 1) / 3);
        header_seen = true;
        continue;
      }
      const auto fields = split_csv(line);
      if (static_cast<int>(fields.size()) != 1 + 3 * n) {
        std::ostringstream msg;
        msg << traj_path << ":" << line_no << ": expected " << 1 + 3 * n << " columns, got "
            << fields.size();
        throw ConfigError(msg.str());
      }
      Sample s;
      s.t = parse_double(fields[0], traj_path, line_no);
      s.x.resize(n);
      s.xhat.resize(n);
      s.chi.resize(n);
      for (int i = 0; i < n; ++i) s.x[i] = parse_double(fields[1 + i], traj_path, line_no);
      for (int i = 0; i < n; ++i) {
        s.xhat[i] = parse_double(fields[1 + n + i], traj_path, line_no);
      }
      for (int i = 0; i < n; ++i) {
        s.chi[i] = parse_double(fields[1 + 2 * n + i], traj_path, line_no);
      }
      traj.samples.push_back(std::move(s));
    }
    if (!header_seen || traj.samples.empty()) {
      throw ConfigError(traj_path + ": no samples found");
    }
    traj.horizon = traj.samples.back().t;
    const int nn = n;
    traj.terminal.resize(nn);
    for (int i = 0; i < nn; ++i) {
      const Sample& last = traj.samples.back();
      traj.terminal[i] = {last.x[i], last.xhat[i], last.chi[i], 0.0};
    }
  }
  {
    std::ifstream in(events_path);
    if (!in) throw ConfigError("cannot read " + events_path);
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line[0] == '#') continue;
      if (!header_seen) {
        header_seen = true;
        continue;
      }
      const auto fields = split_csv(line);
      if (fields.size() != 4) {
        std::ostringstream msg;
        msg << events_path << ":" << line_no << ": expected 4 columns, got " << fields.size();
        throw ConfigError(msg.str());
      }
      EventRecord ev;
      ev.t = parse_double(fields[0], events_path, line_no);
      ev.agent = static_cast<int>(parse_double(fields[1], events_path, line_no)) - 1;
      const auto kind = event_kind_from_string(fields[2]);
      if (!kind) {
        std::ostringstream msg;
        msg << events_path << ":" << line_no << ": unknown event kind '" << fields[2] << "'";
        throw ConfigError(msg.str());
      }
      ev.kind = *kind;
      ev.detection_delay = parse_double(fields[3], events_path, line_no);
      traj.events.push_back(ev);
    }
  }
  return traj;
}

void write_plot_script(const std::string& path) {
  static const char* kScript = R"PY(#!/usr/bin/env python3
"""Render the standard figures for a simulation run.

Reads trajectory.csv, events.csv and metrics.json from the directory this
script lives in and writes three PNG files next to them.
"""
import csv
import json
import os
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))


def read_csv(name):
    rows = []
    with open(os.path.join(here, name)) as f:
        for line in f:
            if line.startswith("#") or not line.strip():
                continue
            rows.append(line.strip().split(","))
    header, data = rows[0], rows[1:]
    return header, data


def main():
    header, data = read_csv("trajectory.csv")
    n = (len(header) - 1) // 3
    t = [float(r[0]) for r in data]
    x = [[float(r[1 + i]) for r in data] for i in range(n)]
    chi = [[float(r[1 + 2 * n + i]) for r in data] for i in range(n)]

    _, ev_rows = read_csv("events.csv")
    ev_t = [float(r[0]) for r in ev_rows]
    ev_agent = [int(r[1]) for r in ev_rows]

    with open(os.path.join(here, "metrics.json")) as f:
        metrics = json.load(f)
    x_bar = metrics["x_bar"]
    trace = metrics["trace"]
    bounds = [row["bound"] for row in metrics["miet"]]

    # trajectories and the Lyapunov decay
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 7), sharex=True)
    for i in range(n):
        ax1.plot(t, x[i], lw=1, label=f"x{i + 1}")
    ax1.axhline(x_bar, ls="--", c="k", lw=0.8, label="initial average")
    ax1.set_ylabel("x")
    ax1.legend(fontsize=8, ncol=2)
    ax2.plot(trace["t"], trace["v"], label="V")
    ax2.plot(trace["t"], trace["vp"], label="V_P")
    ax2.plot(trace["t"], trace["vc"], label="V_C")
    ax2.set_xlabel("t")
    ax2.set_ylabel("V")
    ax2.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(os.path.join(here, "fig_trajectories.png"), dpi=150)

    # clock variables and the event raster
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 7), sharex=True)
    for i in range(n):
        ax1.plot(t, chi[i], lw=1, label=f"chi{i + 1}")
    ax1.set_ylabel("chi")
    ax1.legend(fontsize=8, ncol=2)
    ax2.scatter(ev_t, ev_agent, marker="*", s=14)
    ax2.set_yticks(range(1, n + 1))
    ax2.set_xlabel("t")
    ax2.set_ylabel("events")
    fig.tight_layout()
    fig.savefig(os.path.join(here, "fig_events.png"), dpi=150)

    # inter-event times against the guaranteed bounds
    fig, ax = plt.subplots(figsize=(7, 4.5))
    last = {}
    pts_t, pts_gap, pts_agent = [], [], []
    for tt, a in zip(ev_t, ev_agent):
        if a in last:
            pts_t.append(tt)
            pts_gap.append(tt - last[a])
            pts_agent.append(a)
        last[a] = tt
    colors = plt.cm.tab10.colors
    for a in range(1, n + 1):
        sel_t = [tt for tt, aa in zip(pts_t, pts_agent) if aa == a]
        sel_g = [g for g, aa in zip(pts_gap, pts_agent) if aa == a]
        c = colors[(a - 1) % len(colors)]
        ax.scatter(sel_t, sel_g, s=12, color=c, label=f"agent {a}")
        ax.axhline(bounds[a - 1], color=c, lw=0.8, ls=":")
    ax.set_xlabel("t")
    ax.set_ylabel("inter-event time")
    ax.legend(fontsize=8, ncol=2)
    fig.tight_layout()
    fig.savefig(os.path.join(here, "fig_intervals.png"), dpi=150)
    print("wrote fig_trajectories.png, fig_events.png, fig_intervals.png")


if __name__ == "__main__":
    sys.exit(main())
)PY";
  auto out = open_out(path);
  out << kScript;
}

}  // namespace detcon::io
