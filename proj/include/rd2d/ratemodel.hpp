#ifndef RD2D_RATEMODEL_HPP
#define RD2D_RATEMODEL_HPP

#include "channel.hpp"
#include "grid.hpp"
#include "params.hpp"
#include "units.hpp"

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace rd2d {

// Per-relay allocation. Rows follow `members` (global UE indices).
struct allocation_state {
  int relay = 0;
  std::vector<std::size_t> members;
  grid2<std::uint8_t> x;
  grid2<double> p_ue;
  grid2<double> p_relay;
  std::vector<double> rate_bps;

  allocation_state() = default;
  allocation_state(int relay_, std::vector<std::size_t> members_, std::size_t n_rbs)
    : relay(relay_), members(std::move(members_)), x(members.size(), n_rbs, 0),
      p_ue(members.size(), n_rbs, 0.0), p_relay(members.size(), n_rbs, 0.0), rate_bps(members.size(), 0.0) {}

  std::size_t n_members() const { return members.size(); }
  std::size_t n_rbs() const { return x.cols(); }

  std::size_t assigned_rbs(std::size_t i) const
  {
    std::size_t k = 0;
    for (auto v : x.row(i))
      k += v;
    return k;
  }
};

using network_allocation = std::vector<allocation_state>;

struct unit_sinr_table {
  int relay = 0;
  std::vector<std::size_t> members;
  grid2<double> gamma1;
  grid2<double> gamma2;
  grid2<double> interference1;
  grid2<double> interference2;
  grid2<double> h1;  // hop-1 direct gain
  grid2<double> h2;  // hop-2 direct gain
  double noise_power_w = 0;
};

inline double rb_rate_bps(double p_ue_w, double gamma1, double rb_bandwidth_hz)
{
  return 0.5 * rb_bandwidth_hz * std::log2(1.0 + p_ue_w * gamma1);
}

// one-hop Shannon rate
inline double shannon_rate_bps(double p_w, double gamma, double bandwidth_hz)
{
  return bandwidth_hz * std::log2(1.0 + p_w * gamma);
}

inline double e2e_rate_bps(double r1, double r2) { return 0.5 * std::min(r1, r2); }

// relay power that equalizes both hops' SNR
inline double coupled_relay_power(double p_ue_w, double gamma1, double gamma2)
{
  if (p_ue_w == 0)
    return 0.0;
  return gamma2 > 0 ? p_ue_w * gamma1 / gamma2 : inf;
}

// Every member of every relay active on the RBs it would get under
// round-robin assignment, at the per-RB budget.
inline network_allocation initial_network_allocation(const channel_realization& ch, const sim_params& params,
                                                     const std::vector<std::vector<std::size_t>>& members)
{
  network_allocation out;
  const std::size_t N = ch.n_rbs;
  for (std::size_t l = 0; l < members.size(); ++l) {
    allocation_state a(static_cast<int>(l), members[l], N);
    if (!a.members.empty())
      for (std::size_t n = 0; n < N; ++n) {
        const std::size_t i = n % a.members.size();
        a.x(i, n) = 1;
        a.p_ue(i, n) = params.ue_power_w() / static_cast<double>(N);
        a.p_relay(i, n) = params.relay_power_w() / static_cast<double>(N);
      }
    out.push_back(std::move(a));
  }
  return out;
}

inline unit_sinr_table unit_sinrs(const channel_realization& ch, int relay, const std::vector<std::size_t>& members,
                                  const network_allocation& others)
{
  const std::size_t N = ch.n_rbs, M = members.size();
  const auto l = static_cast<std::size_t>(relay);
  unit_sinr_table t;
  t.relay = relay;
  t.members = members;
  t.noise_power_w = ch.noise_power_w;
  t.gamma1 = grid2<double>(M, N);
  t.gamma2 = grid2<double>(M, N);
  t.interference1 = grid2<double>(M, N);
  t.interference2 = grid2<double>(M, N);
  t.h1 = grid2<double>(M, N);
  t.h2 = grid2<double>(M, N);

  for (std::size_t i = 0; i < M; ++i) {
    const std::size_t u = members[i];
    const bool d2d = ch.d2d_slot[u] >= 0;
    for (std::size_t n = 0; n < N; ++n) {
      double i1 = 0, i2 = 0;
      for (const auto& other : others) {
        if (other.relay == relay)
          continue;
        const auto j = static_cast<std::size_t>(other.relay);
        for (std::size_t k = 0; k < other.n_members(); ++k) {
          if (!other.x(k, n))
            continue;
          const std::size_t v = other.members[k];
          i1 += other.p_ue(k, n) * ch.ue_relay(v, l, n);
          if (d2d)
            i2 += other.p_relay(k, n) * ch.h_relay_d2drx(j, u, n);
          else if (ch.d2d_slot[v] >= 0)
            i2 += other.p_relay(k, n) * ch.relay_enb(j, n);
        }
      }
      const double h1 = ch.ue_relay(u, l, n);
      const double h2 = d2d ? ch.h_relay_d2drx(l, u, n) : ch.relay_enb(l, n);
      t.h1(i, n) = h1;
      t.h2(i, n) = h2;
      t.interference1(i, n) = i1;
      t.interference2(i, n) = i2;
      t.gamma1(i, n) = h1 / (i1 + ch.noise_power_w);
      t.gamma2(i, n) = h2 / (i2 + ch.noise_power_w);
    }
  }
  return t;
}

// per-UE achieved rate from x and hop-1 power
inline double ue_rate_bps(const allocation_state& a, const unit_sinr_table& t, std::size_t i, double rb_bandwidth_hz)
{
  double r = 0;
  for (std::size_t n = 0; n < a.n_rbs(); ++n)
    if (a.x(i, n))
      r += rb_rate_bps(a.p_ue(i, n), t.gamma1(i, n), rb_bandwidth_hz);
  return r;
}

inline void refresh_rates(allocation_state& a, const unit_sinr_table& t, double rb_bandwidth_hz)
{
  for (std::size_t i = 0; i < a.n_members(); ++i)
    a.rate_bps[i] = ue_rate_bps(a, t, i, rb_bandwidth_hz);
}

inline double sum_rate_bps(const allocation_state& a) { return std::accumulate(a.rate_bps.begin(), a.rate_bps.end(), 0.0); }

enum class violation_kind {
  binary,
  negative_power,
  exclusivity,
  ue_power,
  relay_power,
  interference_hop1,
  interference_hop2,
  qos,
};

inline const char* to_string(violation_kind k)
{
  switch (k) {
    case violation_kind::binary: return "binary";
    case violation_kind::negative_power: return "negative_power";
    case violation_kind::exclusivity: return "exclusivity";
    case violation_kind::ue_power: return "ue_power";
    case violation_kind::relay_power: return "relay_power";
    case violation_kind::interference_hop1: return "interference_hop1";
    case violation_kind::interference_hop2: return "interference_hop2";
    case violation_kind::qos: return "qos";
  }
  return "?";
}

struct feasibility_violation {
  violation_kind kind;
  int ue = -1;  // member row, -1 if not UE-specific
  int rb = -1;
  double value = 0;
  double limit = 0;
};

struct feasibility_report {
  std::vector<feasibility_violation> violations;

  bool empty() const { return violations.empty(); }
  bool hard_ok() const
  {
    return std::none_of(violations.begin(), violations.end(),
                        [](const auto& v) { return v.kind != violation_kind::qos; });
  }
  bool qos_ok() const
  {
    return std::none_of(violations.begin(), violations.end(),
                        [](const auto& v) { return v.kind == violation_kind::qos; });
  }
  std::size_t count(violation_kind k) const
  {
    return static_cast<std::size_t>(
      std::count_if(violations.begin(), violations.end(), [k](const auto& v) { return v.kind == k; }));
  }
};

// Checks every P2 constraint; never throws.
inline feasibility_report check_feasibility(const allocation_state& a, const unit_sinr_table& t,
                                            const channel_realization& ch, const sim_params& params)
{
  feasibility_report rep;
  const std::size_t M = a.n_members(), N = a.n_rbs();
  const double B = params.rb_bandwidth_hz;
  auto add = [&](violation_kind k, int u, int n, double v, double lim) { rep.violations.push_back({k, u, n, v, lim}); };

  double relay_total = 0;
  for (std::size_t i = 0; i < M; ++i) {
    const std::size_t u = a.members[i];
    double ue_total = 0, rate = 0;
    for (std::size_t n = 0; n < N; ++n) {
      const auto xv = a.x(i, n);
      if (xv > 1)
        add(violation_kind::binary, static_cast<int>(i), static_cast<int>(n), xv, 1);
      if (a.p_ue(i, n) < 0 || a.p_relay(i, n) < 0)
        add(violation_kind::negative_power, static_cast<int>(i), static_cast<int>(n), std::min(a.p_ue(i, n), a.p_relay(i, n)), 0);
      if (!xv)
        continue;
      const double p = a.p_ue(i, n);
      ue_total += p;
      relay_total += coupled_relay_power(p, t.gamma1(i, n), t.gamma2(i, n));
      rate += rb_rate_bps(p, t.gamma1(i, n), B);
    }
    if (!leq_rel(ue_total, params.ue_power_w()))
      add(violation_kind::ue_power, static_cast<int>(i), -1, ue_total, params.ue_power_w());
    const double q = params.rate_req_bps(ch.d2d_slot[u] >= 0 ? ue_kind::d2d : ue_kind::cue);
    if (!leq_rel(q, rate))
      add(violation_kind::qos, static_cast<int>(i), -1, rate, q);
  }
  if (!leq_rel(relay_total, params.relay_power_w()))
    add(violation_kind::relay_power, -1, -1, relay_total, params.relay_power_w());

  for (std::size_t n = 0; n < N; ++n) {
    int users = 0;
    double i1 = 0, i2 = 0;
    for (std::size_t i = 0; i < M; ++i) {
      if (!a.x(i, n))
        continue;
      ++users;
      const std::size_t u = a.members[i];
      const double p = a.p_ue(i, n);
      i1 += p * ch.g_ref_hop1(u, n);
      i2 += coupled_relay_power(p, t.gamma1(i, n), t.gamma2(i, n)) * ch.g_ref_hop2(u, n);
    }
    if (users > 1)
      add(violation_kind::exclusivity, -1, static_cast<int>(n), users, 1);
    if (!leq_rel(i1, params.i_th1_w()))
      add(violation_kind::interference_hop1, -1, static_cast<int>(n), i1, params.i_th1_w());
    if (!leq_rel(i2, params.i_th2_w()))
      add(violation_kind::interference_hop2, -1, static_cast<int>(n), i2, params.i_th2_w());
  }
  return rep;
}

} // namespace rd2d

#endif
