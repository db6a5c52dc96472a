#ifndef RD2D_CHANNEL_HPP
#define RD2D_CHANNEL_HPP

#include "grid.hpp"
#include "params.hpp"
#include "rng.hpp"
#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace rd2d {

struct channel_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// UE-relay, UE-UE and relay-UE links
inline double path_loss_access_db(double distance_km, double shadow_db, double fading_power)
{
  if (!(distance_km > 0))
    throw channel_error("path loss: distance must be positive");
  if (!(fading_power > 0))
    throw channel_error("path loss: fading power must be positive");
  return 103.8 + 20.9 * std::log10(distance_km) + shadow_db + 10.0 * std::log10(fading_power);
}

// relay-eNB link
inline double path_loss_backhaul_db(double distance_km, double shadow_db, double fading_power)
{
  if (!(distance_km > 0))
    throw channel_error("path loss: distance must be positive");
  if (!(fading_power > 0))
    throw channel_error("path loss: fading power must be positive");
  return 100.7 + 23.5 * std::log10(distance_km) + shadow_db + 10.0 * std::log10(fading_power);
}

inline double gain_from_path_loss(double pl_db) { return std::pow(10.0, -pl_db / 10.0); }

inline constexpr double min_link_distance_m = 1.0;

inline double draw_fading_power(rng_engine& rng)
{
  std::exponential_distribution<double> exp1(1.0);
  double g = exp1(rng);
  // keep log finite; probability of hitting this is ~1e-300
  return g > 0 ? g : std::numeric_limits<double>::min();
}

inline double draw_shadow_db(rng_engine& rng, double sigma_db)
{
  if (sigma_db <= 0)
    return 0.0;
  std::normal_distribution<double> norm(0.0, sigma_db);
  return norm(rng);
}

struct channel_realization {
  std::size_t n_rbs = 0;
  double noise_power_w = 0;
  bool caps_active = true;

  std::vector<int> relay_of;          // [u]
  std::vector<int> d2d_slot;          // [u] -> slot or -1
  std::vector<std::size_t> d2d_ues;   // [slot] -> u

  grid3<double> ue_relay;             // [u][l][n], every UE to every relay
  grid2<double> mean_ue_relay;        // [u][l], path loss and shadowing only
  grid2<double> relay_enb;            // [l][n]
  grid3<double> relay_d2drx;          // [l][slot][n]
  grid3<double> ue_d2drx;             // [u][slot][n], own slot is the direct link
  grid2<double> g_ref_hop1;           // [u][n]
  grid2<double> g_ref_hop2;           // [u][n]

  std::size_t n_ues() const { return relay_of.size(); }
  std::size_t n_relays() const { return relay_enb.rows(); }

  double h_ue_relay(std::size_t u, std::size_t n) const
  {
    return ue_relay(u, static_cast<std::size_t>(relay_of[u]), n);
  }
  double h_relay_d2drx(std::size_t l, std::size_t u, std::size_t n) const
  {
    return relay_d2drx(l, slot(u), n);
  }
  double h_direct(std::size_t u, std::size_t n) const { return ue_d2drx(u, slot(u), n); }
  double g_ue_to_d2drx(std::size_t tx_ue, std::size_t rx_ue, std::size_t n) const
  {
    return ue_d2drx(tx_ue, slot(rx_ue), n);
  }

  std::size_t slot(std::size_t u) const
  {
    if (d2d_slot.at(u) < 0)
      throw channel_error("UE " + std::to_string(u) + " is not a D2D pair");
    return static_cast<std::size_t>(d2d_slot[u]);
  }
};

namespace detail {

enum class link_model { access, backhaul };

struct link_draw {
  std::vector<double> per_rb;
  double mean = 0;
};

inline link_draw draw_link(rng_engine& rng, point a, point b, double sigma_db, link_model model, std::size_t n_rbs)
{
  const double d_km = std::max(distance(a, b), min_link_distance_m) / 1000.0;
  const double shadow = draw_shadow_db(rng, sigma_db);
  auto pl = [&](double fading) {
    return model == link_model::access ? path_loss_access_db(d_km, shadow, fading)
                                       : path_loss_backhaul_db(d_km, shadow, fading);
  };
  link_draw out;
  out.mean = gain_from_path_loss(pl(1.0));
  out.per_rb.resize(n_rbs);
  for (auto& g : out.per_rb)
    g = gain_from_path_loss(pl(draw_fading_power(rng)));
  return out;
}

} // namespace detail

// recompute reference-node gains from the stored cross gains
inline void fill_reference_gains(channel_realization& ch)
{
  const std::size_t U = ch.n_ues(), L = ch.n_relays(), N = ch.n_rbs;
  ch.g_ref_hop1 = grid2<double>(U, N, 0.0);
  ch.g_ref_hop2 = grid2<double>(U, N, 0.0);
  ch.caps_active = L > 1;
  for (std::size_t u = 0; u < U; ++u) {
    const auto l = static_cast<std::size_t>(ch.relay_of[u]);
    for (std::size_t n = 0; n < N; ++n) {
      double g1 = 0, g2 = 0;
      for (std::size_t j = 0; j < L; ++j)
        if (j != l)
          g1 = std::max(g1, ch.ue_relay(u, j, n));
      for (std::size_t v : ch.d2d_ues)
        if (static_cast<std::size_t>(ch.relay_of[v]) != l)
          g2 = std::max(g2, ch.h_relay_d2drx(l, v, n));
      ch.g_ref_hop1(u, n) = g1;
      ch.g_ref_hop2(u, n) = g2;
    }
  }
}

inline channel_realization draw_channel(const network_scenario& s, const sim_params& params, std::uint64_t seed)
{
  const std::size_t U = s.n_ues(), L = s.n_relays(), N = static_cast<std::size_t>(params.n_rbs);
  auto rng = make_rng(seed, rng_stream::channel);

  channel_realization ch;
  ch.n_rbs = N;
  ch.noise_power_w = params.noise_power_w();
  ch.relay_of.resize(U);
  ch.d2d_slot.assign(U, -1);
  for (std::size_t u = 0; u < U; ++u) {
    ch.relay_of[u] = s.ues[u].relay;
    if (s.is_d2d(u)) {
      ch.d2d_slot[u] = static_cast<int>(ch.d2d_ues.size());
      ch.d2d_ues.push_back(u);
    }
  }
  const std::size_t D = ch.d2d_ues.size();

  auto store = [&](std::span<double> dst, const detail::link_draw& d) {
    std::copy(d.per_rb.begin(), d.per_rb.end(), dst.begin());
  };

  ch.ue_relay = grid3<double>(U, L, N);
  ch.mean_ue_relay = grid2<double>(U, L);
  for (std::size_t u = 0; u < U; ++u)
    for (std::size_t l = 0; l < L; ++l) {
      auto d = detail::draw_link(rng, s.ues[u].tx, s.relays[l], params.shadow_sigma_ue_relay_db,
                                 detail::link_model::access, N);
      store(ch.ue_relay.row(u, l), d);
      ch.mean_ue_relay(u, l) = d.mean;
    }

  ch.relay_enb = grid2<double>(L, N);
  for (std::size_t l = 0; l < L; ++l) {
    auto d = detail::draw_link(rng, s.relays[l], s.enb, params.shadow_sigma_relay_enb_db,
                               detail::link_model::backhaul, N);
    store(ch.relay_enb.row(l), d);
  }

  ch.relay_d2drx = grid3<double>(L, D, N);
  ch.ue_d2drx = grid3<double>(U, D, N);
  for (std::size_t k = 0; k < D; ++k) {
    const point rx = s.ues[ch.d2d_ues[k]].rx;
    for (std::size_t l = 0; l < L; ++l) {
      auto d = detail::draw_link(rng, s.relays[l], rx, params.shadow_sigma_ue_relay_db, detail::link_model::access, N);
      store(ch.relay_d2drx.row(l, k), d);
    }
    for (std::size_t u = 0; u < U; ++u) {
      auto d = detail::draw_link(rng, s.ues[u].tx, rx, params.shadow_sigma_ue_relay_db, detail::link_model::access, N);
      store(ch.ue_d2drx.row(u, k), d);
    }
  }

  fill_reference_gains(ch);
  return ch;
}

} // namespace rd2d

#endif
