#ifndef RD2D_ORACLE_HPP
#define RD2D_ORACLE_HPP

#include "channel.hpp"
#include "params.hpp"
#include "ratemodel.hpp"

#include <stdexcept>
#include <vector>

namespace rd2d {

struct oracle_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct oracle_result {
  allocation_state alloc;          // QoS-feasible maximizer, or best-effort one if none
  double objective = 0;
  bool qos_feasible = false;       // false: no point met every rate requirement
  allocation_state best_effort;    // maximizer with QoS relaxed
  double best_effort_objective = 0;
  std::size_t evaluated = 0;
};

inline std::vector<double> default_power_grid(const sim_params& params)
{
  const double c = params.ue_power_w() / static_cast<double>(params.n_rbs);
  return {0.0, 0.25 * c, 0.5 * c, c};
}

// largest grid point not above p
inline double snap_down(double p, const std::vector<double>& grid)
{
  double best = 0.0;
  bool any = false;
  for (double g : grid)
    if (g <= p * (1.0 + 1e-12) && (!any || g > best)) {
      best = g;
      any = true;
    }
  return best;
}

// Exhaustive search over RB assignments and grid powers. Ties keep the
// first maximizer in enumeration order.
inline oracle_result exhaustive_solve(const channel_realization& ch, const unit_sinr_table& t, const sim_params& params,
                                      const std::vector<double>& power_grid, std::size_t max_dim = 12,
                                      std::size_t max_grid = 4)
{
  const std::size_t M = t.members.size(), N = ch.n_rbs;
  if (M * N > max_dim)
    throw oracle_error("oracle: |U|*N = " + std::to_string(M * N) + " exceeds guard " + std::to_string(max_dim));
  if (power_grid.empty() || power_grid.size() > max_grid)
    throw oracle_error("oracle: power grid size must be in [1, " + std::to_string(max_grid) + "]");

  const double B = params.rb_bandwidth_hz;
  const double p_ue = params.ue_power_w(), p_relay = params.relay_power_w();
  const double i1 = params.i_th1_w(), i2 = params.i_th2_w();
  std::vector<double> q(M);
  for (std::size_t i = 0; i < M; ++i)
    q[i] = params.rate_req_bps(ch.d2d_slot[t.members[i]] >= 0 ? ue_kind::d2d : ue_kind::cue);

  std::vector<int> owner(N, -1);
  std::vector<std::size_t> level(N, 0);
  std::vector<double> ue_power(M, 0.0), ue_rate(M, 0.0);
  double relay_power = 0, obj = 0;

  oracle_result res;
  bool have_q = false, have_b = false;
  auto snapshot = [&]() {
    allocation_state a(t.relay, t.members, N);
    for (std::size_t n = 0; n < N; ++n)
      if (owner[n] >= 0) {
        const auto i = static_cast<std::size_t>(owner[n]);
        a.x(i, n) = 1;
        a.p_ue(i, n) = power_grid[level[n]];
        a.p_relay(i, n) = coupled_relay_power(a.p_ue(i, n), t.gamma1(i, n), t.gamma2(i, n));
      }
    a.rate_bps = ue_rate;
    return a;
  };

  auto leaf = [&]() {
    ++res.evaluated;
    bool qos = true;
    for (std::size_t i = 0; i < M; ++i)
      qos = qos && leq_rel(q[i], ue_rate[i]);
    if (!have_b || obj > res.best_effort_objective) {
      have_b = true;
      res.best_effort_objective = obj;
      res.best_effort = snapshot();
    }
    if (qos && (!have_q || obj > res.objective)) {
      have_q = true;
      res.objective = obj;
      res.alloc = snapshot();
    }
  };

  auto rec = [&](auto&& self, std::size_t n) -> void {
    if (n == N) {
      leaf();
      return;
    }
    owner[n] = -1;
    level[n] = 0;
    self(self, n + 1);
    for (std::size_t i = 0; i < M; ++i) {
      const auto u = t.members[i];
      for (std::size_t g = 0; g < power_grid.size(); ++g) {
        const double p = power_grid[g];
        const double pr = coupled_relay_power(p, t.gamma1(i, n), t.gamma2(i, n));
        if (!leq_rel(ue_power[i] + p, p_ue) || !leq_rel(relay_power + pr, p_relay))
          continue;
        if (!leq_rel(p * ch.g_ref_hop1(u, n), i1) || !leq_rel(pr * ch.g_ref_hop2(u, n), i2))
          continue;
        const double r = rb_rate_bps(p, t.gamma1(i, n), B);
        owner[n] = static_cast<int>(i);
        level[n] = g;
        ue_power[i] += p;
        relay_power += pr;
        ue_rate[i] += r;
        obj += r;
        self(self, n + 1);
        ue_power[i] -= p;
        relay_power -= pr;
        ue_rate[i] -= r;
        obj -= r;
      }
    }
    owner[n] = -1;
    level[n] = 0;
  };
  rec(rec, 0);

  res.qos_feasible = have_q;
  if (!have_q) {
    res.alloc = res.best_effort;
    res.objective = res.best_effort_objective;
  }
  return res;
}

} // namespace rd2d

#endif
