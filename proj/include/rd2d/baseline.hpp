#ifndef RD2D_BASELINE_HPP
#define RD2D_BASELINE_HPP

#include "channel.hpp"
#include "network.hpp"
#include "params.hpp"
#include "ratemodel.hpp"
#include "scenario.hpp"

#include <vector>

namespace rd2d {

enum class reference_power {
  budget,     // CUE and D2D tx both at P_ue^max split over the shared RBs
  allocated,  // CUE keeps the power from its own solve
};

struct reference_result {
  std::vector<double> d2d_rate_bps;   // [u], 0 for CUEs and refraining pairs
  std::vector<int> partner;           // [u] -> CUE index or -1
  std::vector<double> cue_rate_bps;   // [u], CUE rate with sharing applied
  std::size_t admitted() const
  {
    std::size_t k = 0;
    for (int p : partner)
      k += p >= 0;
    return k;
  }
};

struct sharing_rates {
  double cue_bps = 0;
  double d2d_bps = 0;
};

// Rates when D2D pair `d` reuses every RB of CUE row `i` of relay `l`.
// The D2D link sees the CUE in the uplink half-slot and the relay in the
// forwarding half-slot; other relays' CUE traffic interferes in both.
inline sharing_rates evaluate_sharing(const channel_realization& ch, const sim_params& params,
                                      const network_solution& cues, std::size_t l, std::size_t i, std::size_t d,
                                      reference_power mode)
{
  const auto& a = cues.relays[l].alloc;
  const auto& t = cues.sinr[l];
  const std::size_t c = a.members[i], N = ch.n_rbs;
  const double B = params.rb_bandwidth_hz, s2 = ch.noise_power_w;
  const std::size_t k = a.assigned_rbs(i);
  sharing_rates r;
  if (k == 0)
    return r;
  const double p_d = params.ue_power_w() / static_cast<double>(k);
  const double relay_rb = params.relay_power_w() / static_cast<double>(N);
  for (std::size_t n = 0; n < N; ++n) {
    if (!a.x(i, n))
      continue;
    const double p_c = mode == reference_power::budget ? p_d : a.p_ue(i, n);
    const double p_r = std::min(coupled_relay_power(p_c, t.gamma1(i, n), t.gamma2(i, n)), relay_rb);

    const double g1 = t.h1(i, n) / (t.interference1(i, n) + s2 + p_d * ch.ue_relay(d, l, n));
    r.cue_bps += e2e_rate_bps(shannon_rate_bps(p_c, g1, B), shannon_rate_bps(p_r, t.gamma2(i, n), B));

    double oth1 = 0, oth2 = 0;
    for (const auto& o : cues.allocation) {
      if (static_cast<std::size_t>(o.relay) == l)
        continue;
      for (std::size_t k2 = 0; k2 < o.n_members(); ++k2)
        if (o.x(k2, n)) {
          oth1 += o.p_ue(k2, n) * ch.g_ue_to_d2drx(o.members[k2], d, n);
          oth2 += o.p_relay(k2, n) * ch.h_relay_d2drx(static_cast<std::size_t>(o.relay), d, n);
        }
    }
    const double h = ch.h_direct(d, n);
    const double sa = p_d * h / (p_c * ch.g_ue_to_d2drx(c, d, n) + oth1 + s2);
    const double sb = p_d * h / (p_r * ch.h_relay_d2drx(l, d, n) + oth2 + s2);
    r.d2d_bps += 0.5 * B * std::log2(1.0 + sa) + 0.5 * B * std::log2(1.0 + sb);
  }
  return r;
}

inline reference_result solve_reference(const network_scenario& s, const channel_realization& ch,
                                        const sim_params& params, const network_solution& cues,
                                        reference_power mode = reference_power::budget)
{
  const std::size_t U = s.n_ues();
  reference_result res;
  res.d2d_rate_bps.assign(U, 0.0);
  res.partner.assign(U, -1);
  res.cue_rate_bps = cues.ue_rates(U);
  const double qc = params.cue_rate_req_bps, qd = params.d2d_rate_req_bps;

  for (std::size_t l = 0; l < s.n_relays(); ++l) {
    const auto& a = cues.relays[l].alloc;
    std::vector<bool> used(a.n_members(), false);
    for (std::size_t d : s.members(static_cast<int>(l))) {
      if (!s.is_d2d(d))
        continue;
      for (std::size_t i = 0; i < a.n_members(); ++i) {
        if (used[i] || a.assigned_rbs(i) == 0)
          continue;
        const auto r = evaluate_sharing(ch, params, cues, l, i, d, mode);
        if (leq_rel(qc, r.cue_bps) && leq_rel(qd, r.d2d_bps) && r.d2d_bps > 0) {
          used[i] = true;
          res.partner[d] = static_cast<int>(a.members[i]);
          res.d2d_rate_bps[d] = r.d2d_bps;
          res.cue_rate_bps[a.members[i]] = r.cue_bps;
          break;
        }
      }
    }
  }
  return res;
}

} // namespace rd2d

#endif
