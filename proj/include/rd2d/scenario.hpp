#ifndef RD2D_SCENARIO_HPP
#define RD2D_SCENARIO_HPP

#include "params.hpp"
#include "rng.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rd2d {

struct point {
  double x = 0;
  double y = 0;
  bool operator==(const point&) const = default;
};

inline double distance(point a, point b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct scenario_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A CUE uses tx only; a D2D pair has both ends.
struct ue_node {
  ue_kind kind = ue_kind::cue;
  point tx;
  point rx;
  int relay = 0;
  bool operator==(const ue_node&) const = default;
};

struct network_scenario {
  point enb;
  std::vector<point> relays;
  std::vector<ue_node> ues;
  double cell_side_m = 0;

  std::size_t n_relays() const { return relays.size(); }
  std::size_t n_ues() const { return ues.size(); }
  bool is_d2d(std::size_t u) const { return ues[u].kind == ue_kind::d2d; }

  std::vector<std::size_t> members(int relay) const
  {
    std::vector<std::size_t> out;
    for (std::size_t u = 0; u < ues.size(); ++u)
      if (ues[u].relay == relay)
        out.push_back(u);
    return out;
  }

  std::vector<std::size_t> of_kind(ue_kind k) const
  {
    std::vector<std::size_t> out;
    for (std::size_t u = 0; u < ues.size(); ++u)
      if (ues[u].kind == k)
        out.push_back(u);
    return out;
  }

  bool operator==(const network_scenario&) const = default;
};

namespace detail {

inline constexpr int placement_budget = 10000;

inline bool inside_square(point q, point centre, double side)
{
  const double h = side / 2.0;
  return std::abs(q.x - centre.x) <= h && std::abs(q.y - centre.y) <= h;
}

inline point uniform_in_disk(rng_engine& rng, point c, double radius)
{
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double r = radius * std::sqrt(uni(rng));
  const double a = 2.0 * std::numbers::pi * uni(rng);
  return {c.x + r * std::cos(a), c.y + r * std::sin(a)};
}

} // namespace detail

inline network_scenario generate_scenario(const sim_params& params, std::size_t n_cues, std::size_t n_d2d_pairs,
                                          std::uint64_t seed)
{
  params.validate();
  const auto n_relays = static_cast<std::size_t>(params.n_relays);
  if (n_cues % n_relays != 0 || n_d2d_pairs % n_relays != 0)
    throw scenario_error("UE counts must be divisible by the number of relays (" + std::to_string(n_relays) + ")");
  if (n_d2d_pairs > 0 && params.d_dd_m > 2.0 * params.d_rd_m + params.relay_cell_radius_m)
    throw scenario_error("d_dd_m exceeds 2*d_rd_m + relay_cell_radius_m; D2D pairs cannot be placed");

  auto rng = make_rng(seed, rng_stream::scenario);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  network_scenario s;
  s.enb = {0.0, 0.0};
  s.cell_side_m = params.cell_side_m;
  for (std::size_t l = 0; l < n_relays; ++l) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(l) / static_cast<double>(n_relays);
    s.relays.push_back({params.enb_relay_distance_m * std::cos(a), params.enb_relay_distance_m * std::sin(a)});
  }

  const double dmin = params.min_ue_relay_distance_m;
  auto ok_around = [&](point q, point relay, double radius) {
    const double d = distance(q, relay);
    return d >= dmin && d <= radius && detail::inside_square(q, s.enb, params.cell_side_m);
  };

  for (std::size_t l = 0; l < n_relays; ++l) {
    const point relay = s.relays[l];
    for (std::size_t c = 0; c < n_cues / n_relays; ++c) {
      std::optional<point> q;
      for (int k = 0; k < detail::placement_budget && !q; ++k) {
        auto cand = detail::uniform_in_disk(rng, relay, params.relay_cell_radius_m);
        if (ok_around(cand, relay, params.relay_cell_radius_m))
          q = cand;
      }
      if (!q)
        throw scenario_error("CUE placement budget exhausted at relay " + std::to_string(l));
      s.ues.push_back({ue_kind::cue, *q, *q, static_cast<int>(l)});
    }
    for (std::size_t d = 0; d < n_d2d_pairs / n_relays; ++d) {
      std::optional<std::pair<point, point>> pair;
      for (int k = 0; k < detail::placement_budget && !pair; ++k) {
        auto tx = detail::uniform_in_disk(rng, relay, params.d_rd_m);
        const double a = 2.0 * std::numbers::pi * uni(rng);
        point rx{tx.x + params.d_dd_m * std::cos(a), tx.y + params.d_dd_m * std::sin(a)};
        if (ok_around(tx, relay, params.d_rd_m) && ok_around(rx, relay, params.d_rd_m))
          pair = std::make_pair(tx, rx);
      }
      if (!pair)
        throw scenario_error("D2D placement budget exhausted at relay " + std::to_string(l) +
                             " (d_dd_m=" + std::to_string(params.d_dd_m) + ", d_rd_m=" + std::to_string(params.d_rd_m) + ")");
      s.ues.push_back({ue_kind::d2d, pair->first, pair->second, static_cast<int>(l)});
    }
  }
  return s;
}

struct scenario_violation {
  std::size_t ue = 0;
  std::string what;
};

inline std::vector<scenario_violation> validate_scenario(const network_scenario& s, const sim_params& params)
{
  std::vector<scenario_violation> out;
  const double slack = 1e-9;
  for (std::size_t u = 0; u < s.ues.size(); ++u) {
    const auto& ue = s.ues[u];
    if (ue.relay < 0 || static_cast<std::size_t>(ue.relay) >= s.relays.size()) {
      out.push_back({u, "UE not associated with an existing relay"});
      continue;
    }
    const point relay = s.relays[static_cast<std::size_t>(ue.relay)];
    if (distance(ue.tx, relay) < params.min_ue_relay_distance_m - slack)
      out.push_back({u, "UE closer than min_ue_relay_distance_m to its relay"});
    if (ue.kind == ue_kind::d2d) {
      if (distance(ue.rx, relay) < params.min_ue_relay_distance_m - slack)
        out.push_back({u, "D2D receiver closer than min_ue_relay_distance_m to its relay"});
      const double sep = distance(ue.tx, ue.rx);
      if (std::abs(sep - params.d_dd_m) > 1e-6 * std::max(params.d_dd_m, 1e-12) && std::abs(sep - params.d_dd_m) > 1e-12)
        out.push_back({u, "D2D separation differs from d_dd_m"});
      if (distance(ue.tx, relay) > params.d_rd_m + slack)
        out.push_back({u, "D2D transmitter outside d_rd_m of its relay"});
      if (distance(ue.rx, relay) > params.d_rd_m + slack)
        out.push_back({u, "D2D receiver outside d_rd_m of its relay"});
    }
  }
  return out;
}

} // namespace rd2d

#endif
