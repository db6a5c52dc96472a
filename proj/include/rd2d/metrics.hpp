#ifndef RD2D_METRICS_HPP
#define RD2D_METRICS_HPP

#include "params.hpp"
#include "units.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rd2d {

inline double avg_rate_bps(const std::vector<double>& rates)
{
  if (rates.empty())
    throw std::invalid_argument("avg_rate_bps: no UEs");
  return std::accumulate(rates.begin(), rates.end(), 0.0) / static_cast<double>(rates.size());
}

// nullopt when the reference rate is zero
inline std::optional<double> rate_gain_pct(double r_prop, double r_ref)
{
  if (!(r_ref > 0))
    return std::nullopt;
  return (r_prop - r_ref) / r_ref * 100.0;
}

inline double delivery_ms(double bits, double rate_bps, double dist_m)
{
  if (!(rate_bps > 0))
    return inf;
  return (bits / rate_bps + dist_m / speed_of_light_mps) * 1e3;
}

inline double delay_two_hop_ms(double rate1_bps, double rate2_bps, double dist1_m, double dist2_m,
                               const sim_params& params)
{
  return params.schedule_time_ms + delivery_ms(params.packet_bits(), rate1_bps, dist1_m) + params.decode_time_ms +
         delivery_ms(params.packet_bits(), rate2_bps, dist2_m);
}

inline double delay_one_hop_ms(double rate_bps, double dist_m, const sim_params& params)
{
  return params.schedule_time_ms + delivery_ms(params.packet_bits(), rate_bps, dist_m);
}

// fraction of samples strictly above each grid point
inline std::vector<std::pair<double, double>> ccdf(const std::vector<double>& samples, const std::vector<double>& t_grid)
{
  if (samples.empty())
    throw std::invalid_argument("ccdf: no samples");
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<double, double>> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t);
    out.emplace_back(t, static_cast<double>(above) / static_cast<double>(sorted.size()));
  }
  return out;
}

// infinities sort last and count as samples
inline double median(std::vector<double> v)
{
  if (v.empty())
    throw std::invalid_argument("median: no samples");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  if (v.size() % 2)
    return v[m];
  if (std::isinf(v[m]) || std::isinf(v[m - 1]))
    return std::isinf(v[m - 1]) ? v[m - 1] : v[m];
  return 0.5 * (v[m - 1] + v[m]);
}

inline double mean(const std::vector<double>& v)
{
  if (v.empty())
    return std::nan("");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

} // namespace rd2d

#endif
