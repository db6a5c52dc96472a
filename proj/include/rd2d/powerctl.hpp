#ifndef RD2D_POWERCTL_HPP
#define RD2D_POWERCTL_HPP

#include "channel.hpp"
#include "grid.hpp"
#include "params.hpp"
#include "ratemodel.hpp"
#include "units.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace rd2d {

struct power_caps {
  std::vector<double> p_ue_rb_max;        // [i] P^max / #assigned RBs
  std::vector<double> assigned_band_hz;   // [i] #assigned RBs * B_RB
  grid2<double> varpi;                    // [i][n] interference-safe power
  grid2<double> relay_rb_cap;             // [i][n] UE power keeping the relay at P_relay^max / N
  double p_tilde_w = 0;
  double p_initial_w = 0;                 // P^max / N
};

inline double interference_safe_power(double gamma1, double gamma2, double g_ref1, double g_ref2, double i_th1,
                                      double i_th2)
{
  const double a = g_ref1 > 0 ? i_th1 / g_ref1 : inf;
  const double b = g_ref2 > 0 && gamma1 > 0 ? (gamma2 / gamma1) * i_th2 / g_ref2 : inf;
  return std::min(a, b);
}

inline power_caps compute_caps(const allocation_state& a, const unit_sinr_table& t, const channel_realization& ch,
                               const sim_params& params)
{
  const std::size_t M = a.n_members(), N = a.n_rbs();
  power_caps c;
  c.p_tilde_w = params.p_tilde_w();
  c.p_initial_w = params.ue_power_w() / static_cast<double>(N);
  c.p_ue_rb_max.resize(M);
  c.assigned_band_hz.resize(M);
  c.varpi = grid2<double>(M, N);
  c.relay_rb_cap = grid2<double>(M, N);
  const double relay_rb = params.relay_power_w() / static_cast<double>(N);
  for (std::size_t i = 0; i < M; ++i) {
    const std::size_t k = a.assigned_rbs(i);
    c.p_ue_rb_max[i] = k > 0 ? params.ue_power_w() / static_cast<double>(k) : c.p_initial_w;
    c.assigned_band_hz[i] = static_cast<double>(k) * params.rb_bandwidth_hz;
    const std::size_t u = a.members[i];
    for (std::size_t n = 0; n < N; ++n) {
      const double g1 = t.gamma1(i, n), g2 = t.gamma2(i, n);
      c.varpi(i, n) = interference_safe_power(g1, g2, ch.g_ref_hop1(u, n), ch.g_ref_hop2(u, n), params.i_th1_w(),
                                              params.i_th2_w());
      c.relay_rb_cap(i, n) = g1 > 0 ? relay_rb * g2 / g1 : inf;
    }
  }
  return c;
}

// Rate-tracking step with interference-aware clamp. Rates are taken as
// spectral efficiency over the UE's assigned band.
inline double power_update(double p_now, double rate_now_bps, double q_bps, double band_hz, double p_rb_max,
                           double varpi, double p_tilde, double p_initial)
{
  if (rate_now_bps <= 0 && p_now <= 0)
    return p_initial;
  const double clamp = std::min(p_tilde, std::min(p_rb_max, varpi));
  if (rate_now_bps <= 0 || band_hz <= 0)
    return clamp;
  const double q_se = q_bps / band_hz;
  const double r_se = rate_now_bps / band_hz;
  const double den = std::max(std::exp2(r_se) - 1.0, 1e-12);
  const double candidate = (std::exp2(q_se) - 1.0) / den * p_now;
  return candidate <= p_rb_max ? candidate : clamp;
}

inline double power_update(std::size_t i, std::size_t n, double p_now, double rate_now_bps, double q_bps,
                           const power_caps& caps)
{
  return power_update(p_now, rate_now_bps, q_bps, caps.assigned_band_hz[i], caps.p_ue_rb_max[i], caps.varpi(i, n),
                      caps.p_tilde_w, caps.p_initial_w);
}

// keep the interference caps and the per-RB relay budget
inline double project_power(double p, const power_caps& caps, std::size_t i, std::size_t n)
{
  return std::max(0.0, std::min({p, caps.varpi(i, n), caps.relay_rb_cap(i, n)}));
}

} // namespace rd2d

#endif
