#ifndef RD2D_NETWORK_HPP
#define RD2D_NETWORK_HPP

#include "channel.hpp"
#include "mpsolver.hpp"
#include "params.hpp"
#include "ratemodel.hpp"
#include "scenario.hpp"

#include <functional>
#include <vector>

namespace rd2d {

struct network_options {
  solver_options solver;
  int rounds = 2;
  std::size_t kappa_draws = 10000;
  std::uint64_t kappa_seed = 0;
};

struct network_solution {
  std::vector<std::vector<std::size_t>> members;  // [l]
  std::vector<unit_sinr_table> sinr;              // [l], final round
  std::vector<relay_solution> relays;             // [l], final round
  network_allocation allocation;                  // [l], final round

  bool all_converged() const
  {
    for (const auto& r : relays)
      if (!r.msg.converged)
        return false;
    return true;
  }

  // achieved rate per global UE index (0 for UEs outside the solve)
  std::vector<double> ue_rates(std::size_t n_ues) const
  {
    std::vector<double> out(n_ues, 0.0);
    for (const auto& r : relays)
      for (std::size_t i = 0; i < r.alloc.n_members(); ++i)
        out[r.alloc.members[i]] = r.alloc.rate_bps[i];
    return out;
  }
};

inline std::vector<int> compute_kappa(const channel_realization& ch, const sim_params& params, int relay,
                                      const std::vector<std::size_t>& members, const monte_carlo_min_rate& est)
{
  const auto l = static_cast<std::size_t>(relay);
  std::vector<double> snr(members.size());
  for (std::size_t i = 0; i < members.size(); ++i)
    snr[i] = ch.mean_ue_relay(members[i], l) / ch.noise_power_w;
  const auto under = est.estimate(snr, params.ue_power_w() / static_cast<double>(ch.n_rbs), params.rb_bandwidth_hz,
                                  static_cast<std::uint64_t>(relay));
  std::vector<int> kappa(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto kind = ch.d2d_slot[members[i]] >= 0 ? ue_kind::d2d : ue_kind::cue;
    kappa[i] = required_rb_count(params.rate_req_bps(kind), under[i], params.n_rbs);
  }
  return kappa;
}

// Every relay solves against the others' previous-round allocation.
inline network_solution solve_network(const network_scenario& s, const channel_realization& ch,
                                      const sim_params& params, const network_options& opt = {},
                                      const std::function<bool(std::size_t)>& include = {})
{
  network_solution out;
  const std::size_t L = s.n_relays();
  out.members.resize(L);
  for (std::size_t l = 0; l < L; ++l)
    for (std::size_t u : s.members(static_cast<int>(l)))
      if (!include || include(u))
        out.members[l].push_back(u);

  const monte_carlo_min_rate est(opt.kappa_draws, opt.kappa_seed);
  std::vector<std::vector<int>> kappa(L);
  for (std::size_t l = 0; l < L; ++l)
    kappa[l] = compute_kappa(ch, params, static_cast<int>(l), out.members[l], est);

  network_allocation others = initial_network_allocation(ch, params, out.members);
  for (int round = 0; round < std::max(opt.rounds, 1); ++round) {
    out.sinr.clear();
    out.relays.clear();
    network_allocation next;
    for (std::size_t l = 0; l < L; ++l) {
      out.sinr.push_back(unit_sinrs(ch, static_cast<int>(l), out.members[l], others));
      out.relays.push_back(solve_relay(ch, params, out.sinr.back(), kappa[l], opt.solver));
      next.push_back(out.relays.back().alloc);
    }
    others = std::move(next);
  }
  out.allocation = std::move(others);
  return out;
}

} // namespace rd2d

#endif
