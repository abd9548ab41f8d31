#ifndef DETCON_CLI_HPP
#define DETCON_CLI_HPP

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace detcon::cli {

// exit codes shared by every subcommand
inline constexpr int kOk = 0;
inline constexpr int kInvariantFailure = 1;
inline constexpr int kUsageError = 2;

struct RunOptions {
  std::string scenario_path;
  std::string out_dir;
  bool force = false;
  std::optional<std::uint64_t> seed;
  std::optional<double> horizon;
};

struct VerifyOptions {
  std::string scenario_path;
  std::optional<std::string> from_dir;  // check serialized outputs instead of re-running
  int oracle_cases = 10;
  std::optional<std::uint64_t> seed;
};

struct SweepOptions {
  std::string scenario_path;
  std::string out_dir;
  bool force = false;
  std::vector<double> sigma_grid;
  int seeds = 100;  // noise statistics sample size
  std::optional<std::uint64_t> seed;
  std::optional<double> horizon;
};

int cmd_run(const RunOptions& opts, std::ostream& out = std::cout,
            std::ostream& err = std::cerr);
int cmd_verify(const VerifyOptions& opts, std::ostream& out = std::cout,
               std::ostream& err = std::cerr);
int cmd_sweep(const SweepOptions& opts, std::ostream& out = std::cout,
              std::ostream& err = std::cerr);

// "0.1:0.1:0.9" (start:step:stop, inclusive) or a comma list "0.2,0.5,0.8"
std::vector<double> parse_sigma_grid(const std::string& spec);

}  // namespace detcon::cli

#endif
