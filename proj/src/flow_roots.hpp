#ifndef DETCON_FLOW_ROOTS_HPP
#define DETCON_FLOW_ROOTS_HPP

// Internal: crossing extraction for frozen-broadcast flows. Between
// broadcasts every trigger polynomial is a concave quadratic in elapsed
// time and the error is affine, so events reduce to stable root finding.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace detcon::flow {

struct ErrorLine {
  double e0 = 0.0;
  double z = 0.0;
  double at(double s) const { return e0 - z * s; }
};

// Smallest s in [lo, hi] at which the concave quadratic c + b s + a s^2
// (a <= 0) comes down to zero. Assumes the value at lo is positive, so the
// sought crossing is the larger root.
inline std::optional<double> first_downward_crossing(double c, double b, double a,
                                                     double lo, double hi) {
  if (a == 0.0) {
    if (b >= 0.0) return std::nullopt;
    const double r = -c / b;
    if (r > hi) return std::nullopt;
    return std::max(r, lo);
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  // larger root, cancellation-free in both sign cases of b
  const double r = (b >= 0.0) ? (b + sq) / (-2.0 * a) : (2.0 * c) / (sq - b);
  if (r > hi) return std::nullopt;
  return std::max(r, lo);
}

// first s >= lo with |e(s)| > e_tol, or nullopt if the error stays inside
// the dead band over [lo, hi]
inline std::optional<double> error_band_exit(const ErrorLine& e, double lo, double hi,
                                             double e_tol) {
  if (std::abs(e.at(lo)) > e_tol) return lo;
  if (e.z == 0.0) return std::nullopt;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  double s = std::max({(e.e0 - e_tol) / e.z, (e.e0 + e_tol) / e.z, lo});
  for (int guard = 0; guard < 128 && std::abs(e.at(s)) <= e_tol; ++guard) {
    s = std::nextafter(s, kInf);
  }
  if (s > hi || std::abs(e.at(s)) <= e_tol) return std::nullopt;
  return s;
}

// First s in [lo, hi] where the trigger polynomial is <= 0 and the error
// magnitude exceeds e_tol. A grazing root with |e| inside the dead band is
// not an event; flow resumes and the error band exit is checked instead.
inline std::optional<double> gated_crossing(double c, double b, double a,
                                            const ErrorLine& e, double lo, double hi,
                                            double e_tol) {
  auto value = [&](double s) { return c + s * (b + s * a); };
  double s = lo;
  if (value(s) > 0.0) {
    const auto r = first_downward_crossing(c, b, a, s, hi);
    if (!r) return std::nullopt;
    s = *r;
  }
  if (std::abs(e.at(s)) > e_tol) return s;
  const auto exit = error_band_exit(e, s, hi, e_tol);
  if (!exit) return std::nullopt;
  if (value(*exit) <= 0.0) return exit;
  const auto r2 = first_downward_crossing(c, b, a, *exit, hi);
  if (r2 && std::abs(e.at(*r2)) > e_tol) return r2;
  return std::nullopt;
}

}  // namespace detcon::flow

#endif
