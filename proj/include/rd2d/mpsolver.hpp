#ifndef RD2D_MPSOLVER_HPP
#define RD2D_MPSOLVER_HPP

#include "channel.hpp"
#include "grid.hpp"
#include "params.hpp"
#include "powerctl.hpp"
#include "ratemodel.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace rd2d {

struct solver_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operation counters for one iteration of one relay.
struct iteration_counters {
  std::size_t ue_to_rb_messages = 0;
  std::size_t rb_to_ue_messages = 0;
  std::size_t sorts = 0;
  std::size_t max_sorts_per_ue = 0;
  std::size_t max_sort_length = 0;
};

struct message_state {
  grid2<double> psi;
  grid2<double> psi_tilde;
  grid2<double> tau;
  int iteration = 0;
  bool converged = false;
  std::vector<double> rate_trace;               // R_l(t), t = 1..iteration
  std::vector<iteration_counters> counters;     // per iteration
};

// ---- kappa ----

inline int required_rb_count(double q_bps, double underline_r_bps, int n_rbs)
{
  if (q_bps < 0)
    throw solver_error("required_rb_count: negative rate requirement");
  if (q_bps == 0)
    return 0;
  if (!(underline_r_bps > 0))
    throw solver_error("required_rb_count: minimum expected per-RB rate is zero");
  const double k = std::ceil(q_bps / underline_r_bps);
  return static_cast<int>(std::clamp(k, 0.0, static_cast<double>(n_rbs)));
}

// Expected per-RB rate of each contender when the RB goes to the UE with
// the largest normalized fading draw.
class monte_carlo_min_rate {
public:
  explicit monte_carlo_min_rate(std::size_t draws = 10000, std::uint64_t seed = 0) : draws_(draws), seed_(seed) {}

  // mean_snr_per_watt[i] = long-term gain / noise
  std::vector<double> estimate(std::span<const double> mean_snr_per_watt, double p_rb_w, double rb_bandwidth_hz,
                               std::uint64_t sub = 0) const
  {
    const std::size_t M = mean_snr_per_watt.size();
    std::vector<double> acc(M, 0.0);
    if (M == 0)
      return acc;
    auto rng = make_rng(seed_, rng_stream::kappa, sub);
    std::exponential_distribution<double> exp1(1.0);
    std::vector<double> g(M);
    for (std::size_t d = 0; d < draws_; ++d) {
      for (auto& v : g)
        v = exp1(rng);
      const auto best = static_cast<std::size_t>(std::max_element(g.begin(), g.end()) - g.begin());
      acc[best] += rb_rate_bps(p_rb_w, g[best] * mean_snr_per_watt[best], rb_bandwidth_hz);
    }
    for (auto& v : acc)
      v /= static_cast<double>(draws_);
    return acc;
  }

  std::size_t draws() const { return draws_; }

private:
  std::size_t draws_;
  std::uint64_t seed_;
};

// ---- messages ----

// kappa-th largest of chi over j != n; kappa clamped to [1, N-1]
inline double kth_largest_excluding(std::span<const double> chi, std::size_t n, int kappa, std::vector<double>& scratch)
{
  scratch.clear();
  for (std::size_t j = 0; j < chi.size(); ++j)
    if (j != n)
      scratch.push_back(chi[j]);
  if (scratch.empty())
    return 0.0;
  std::sort(scratch.begin(), scratch.end(), std::greater<>());
  const auto k = static_cast<std::size_t>(std::clamp<long>(kappa, 1, static_cast<long>(scratch.size())));
  return scratch[k - 1];
}

inline std::vector<double> ue_to_rb_messages(std::span<const double> rates, std::span<const double> psi_tilde_row,
                                             int kappa, double omega, iteration_counters* cnt = nullptr)
{
  const std::size_t N = rates.size();
  std::vector<double> chi(N), out(N), scratch;
  scratch.reserve(N);
  for (std::size_t j = 0; j < N; ++j)
    chi[j] = rates[j] + psi_tilde_row[j];
  const int k = std::max(kappa, 1);
  for (std::size_t n = 0; n < N; ++n) {
    const double sel = kth_largest_excluding(chi, n, k, scratch);
    out[n] = rates[n] - omega * sel + (1.0 - omega) * (rates[n] + psi_tilde_row[n]);
  }
  if (cnt) {
    cnt->ue_to_rb_messages += N;
    const std::size_t sorts = N > 1 ? N : 0;
    cnt->sorts += sorts;
    cnt->max_sorts_per_ue = std::max(cnt->max_sorts_per_ue, sorts);
    cnt->max_sort_length = std::max(cnt->max_sort_length, N > 1 ? N - 1 : 0);
  }
  return out;
}

inline std::vector<double> rb_to_ue_messages(std::span<const double> psi_column, double omega,
                                             iteration_counters* cnt = nullptr)
{
  const std::size_t M = psi_column.size();
  std::vector<double> out(M);
  for (std::size_t u = 0; u < M; ++u) {
    bool any = false;
    double best = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
      if (i == u)
        continue;
      best = any ? std::max(best, psi_column[i]) : psi_column[i];
      any = true;
    }
    out[u] = -omega * best - (1.0 - omega) * psi_column[u];
  }
  if (cnt)
    cnt->rb_to_ue_messages += M;
  return out;
}

// Undamped forms, kept separate for the damping identity check.
inline std::vector<double> ue_to_rb_messages_undamped(std::span<const double> rates,
                                                      std::span<const double> psi_tilde_row, int kappa)
{
  const std::size_t N = rates.size();
  std::vector<double> chi(N), out(N), scratch;
  for (std::size_t j = 0; j < N; ++j)
    chi[j] = rates[j] + psi_tilde_row[j];
  for (std::size_t n = 0; n < N; ++n)
    out[n] = rates[n] - kth_largest_excluding(chi, n, std::max(kappa, 1), scratch);
  return out;
}

inline std::vector<double> rb_to_ue_messages_undamped(std::span<const double> psi_column)
{
  const std::size_t M = psi_column.size();
  std::vector<double> out(M);
  for (std::size_t u = 0; u < M; ++u) {
    bool any = false;
    double best = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
      if (i == u)
        continue;
      best = any ? std::max(best, psi_column[i]) : psi_column[i];
      any = true;
    }
    out[u] = -best;
  }
  return out;
}

struct decision {
  grid2<double> tau;
  grid2<std::uint8_t> x;
};

inline decision decide_allocation(const grid2<double>& psi, const grid2<double>& psi_tilde)
{
  const std::size_t M = psi.rows(), N = psi.cols();
  decision d{grid2<double>(M, N), grid2<std::uint8_t>(M, N, 0)};
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t n = 0; n < N; ++n) {
      d.tau(i, n) = psi(i, n) + psi_tilde(i, n);
      d.x(i, n) = d.tau(i, n) >= 0 ? 1 : 0;
    }
  for (std::size_t n = 0; n < N; ++n) {
    int keep = -1;
    for (std::size_t i = 0; i < M; ++i)
      if (d.x(i, n) && (keep < 0 || d.tau(i, n) > d.tau(static_cast<std::size_t>(keep), n)))
        keep = static_cast<int>(i);
    for (std::size_t i = 0; i < M; ++i)
      d.x(i, n) = static_cast<int>(i) == keep ? 1 : 0;
  }
  return d;
}

inline decision decide_allocation(const message_state& msg) { return decide_allocation(msg.psi, msg.psi_tilde); }

// ---- Algorithm 1 ----

enum class power_mode {
  tracking,  // rate-tracking update with clamp, then projection
  fixed,     // initial per-RB power projected onto the caps; no tracking
};

struct solver_options {
  power_mode mode = power_mode::tracking;
};

struct relay_solution {
  allocation_state alloc;
  message_state msg;
  std::vector<int> kappa;
};

inline relay_solution solve_relay(const channel_realization& ch, const sim_params& params, const unit_sinr_table& sinr,
                                  const std::vector<int>& kappa, const solver_options& opt = {})
{
  const std::size_t M = sinr.members.size(), N = ch.n_rbs;
  if (kappa.size() != M)
    throw solver_error("solve_relay: kappa size does not match relay members");
  const double B = params.rb_bandwidth_hz;
  const double omega = params.omega;

  relay_solution sol;
  sol.kappa = kappa;
  auto& a = sol.alloc;
  a = allocation_state(sinr.relay, sinr.members, N);
  auto& msg = sol.msg;
  msg.psi = grid2<double>(M, N, 0.0);
  msg.psi_tilde = grid2<double>(M, N, 0.0);
  msg.tau = grid2<double>(M, N, 0.0);

  std::vector<double> q(M);
  for (std::size_t i = 0; i < M; ++i)
    q[i] = params.rate_req_bps(ch.d2d_slot[sinr.members[i]] >= 0 ? ue_kind::d2d : ue_kind::cue);

  const double p0 = params.ue_power_w() / static_cast<double>(N);
  a.p_ue.fill(p0);
  grid2<double> rates(M, N);

  for (int t = 1; t <= params.t_max; ++t) {
    iteration_counters cnt;
    for (std::size_t i = 0; i < M; ++i)
      for (std::size_t n = 0; n < N; ++n)
        rates(i, n) = rb_rate_bps(a.p_ue(i, n), sinr.gamma1(i, n), B);

    for (std::size_t i = 0; i < M; ++i) {
      auto row = ue_to_rb_messages(rates.row(i), msg.psi_tilde.row(i), kappa[i], omega, &cnt);
      std::copy(row.begin(), row.end(), msg.psi.row(i).begin());
    }
    for (std::size_t n = 0; n < N; ++n) {
      auto col = rb_to_ue_messages(msg.psi.column(n), omega, &cnt);
      for (std::size_t i = 0; i < M; ++i)
        msg.psi_tilde(i, n) = col[i];
    }

    auto d = decide_allocation(msg.psi, msg.psi_tilde);
    msg.tau = std::move(d.tau);
    a.x = std::move(d.x);

    const auto caps = compute_caps(a, sinr, ch, params);
    for (std::size_t i = 0; i < M; ++i) {
      if (a.assigned_rbs(i) == 0)
        continue;
      double r_now = 0;
      for (std::size_t n = 0; n < N; ++n)
        if (a.x(i, n))
          r_now += rates(i, n);
      for (std::size_t n = 0; n < N; ++n) {
        if (!a.x(i, n))
          continue;
        double p = opt.mode == power_mode::tracking ? power_update(i, n, a.p_ue(i, n), r_now, q[i], caps) : p0;
        a.p_ue(i, n) = project_power(p, caps, i, n);
      }
    }

    refresh_rates(a, sinr, B);
    const double r_l = sum_rate_bps(a);
    msg.rate_trace.push_back(r_l);
    msg.counters.push_back(cnt);
    msg.iteration = t;
    if (t >= 2 && std::abs(r_l - msg.rate_trace[msg.rate_trace.size() - 2]) < params.epsilon) {
      msg.converged = true;
      break;
    }
  }

  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t n = 0; n < N; ++n)
      a.p_relay(i, n) = coupled_relay_power(a.p_ue(i, n), sinr.gamma1(i, n), sinr.gamma2(i, n));
  return sol;
}

} // namespace rd2d

#endif
