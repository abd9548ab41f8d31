#ifndef DETCON_ERRORS_HPP
#define DETCON_ERRORS_HPP

#include <stdexcept>

namespace detcon {

// scenario or parameter validation failure; maps to CLI exit code 2
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// runtime invariant violation (flow-set escape, failed theorem check, ...);
// maps to CLI exit code 1
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace detcon

#endif
