#ifndef RD2D_UNITS_HPP
#define RD2D_UNITS_HPP

#include <algorithm>
#include <cmath>
#include <limits>

namespace rd2d {

inline constexpr double speed_of_light_mps = 3.0e8;
inline constexpr double inf = std::numeric_limits<double>::infinity();

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

// relative-slack comparison a <= b
inline bool leq_rel(double a, double b, double rel = 1e-9)
{
  return a <= b + rel * std::max(std::abs(a), std::abs(b));
}

} // namespace rd2d

#endif
