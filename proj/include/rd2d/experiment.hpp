#ifndef RD2D_EXPERIMENT_HPP
#define RD2D_EXPERIMENT_HPP

#include "baseline.hpp"
#include "channel.hpp"
#include "metrics.hpp"
#include "mpsolver.hpp"
#include "network.hpp"
#include "oracle.hpp"
#include "params.hpp"
#include "scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

namespace rd2d {

enum class sweep_mode { paired, product };

struct experiment_config {
  sim_params params;
  int seeds = 50;
  std::uint64_t seed_base = 1;
  std::size_t n_cues = 15;
  std::size_t n_d2d_pairs = 9;
  std::vector<double> convergence_ue_per_relay = {6, 8};
  double convergence_cue_fraction = 0.625;
  double sweep_start_m = 60;
  double sweep_stop_m = 140;
  double sweep_step_m = 5;
  sweep_mode sweep = sweep_mode::paired;
  reference_power ref_power = reference_power::budget;
  power_mode power = power_mode::tracking;
  int rounds = 2;
  std::size_t kappa_draws = 10000;
  int oracle_instances = 200;
  int oracle_max_ues = 3;
  int oracle_max_rbs = 4;
  int ccdf_points = 200;
  bool run_convergence = true;
  bool run_distance = true;
  bool run_sweep = true;
  int threads = 1;

  network_options net_options() const
  {
    network_options o;
    o.solver.mode = power;
    o.rounds = rounds;
    o.kappa_draws = kappa_draws;
    return o;
  }
};

inline experiment_config experiment_from_config(const kv_config& cfg)
{
  experiment_config e;
  e.params = params_from_config(cfg);
  auto nonneg = [](long long v, const char* key) {
    if (v < 0)
      throw config_error(std::string("key '") + key + "' must be >= 0");
    return v;
  };
  e.seeds = static_cast<int>(nonneg(cfg.get_int("seeds", e.seeds), "seeds"));
  e.seed_base = static_cast<std::uint64_t>(nonneg(cfg.get_int("seed_base", 1), "seed_base"));
  e.n_cues = static_cast<std::size_t>(nonneg(cfg.get_int("n_cues", 15), "n_cues"));
  e.n_d2d_pairs = static_cast<std::size_t>(nonneg(cfg.get_int("n_d2d_pairs", 9), "n_d2d_pairs"));
  e.convergence_ue_per_relay = cfg.get_list("convergence_ue_per_relay", e.convergence_ue_per_relay);
  e.convergence_cue_fraction = cfg.get_double("convergence_cue_fraction", e.convergence_cue_fraction);
  e.sweep_start_m = cfg.get_double("sweep_start_m", e.sweep_start_m);
  e.sweep_stop_m = cfg.get_double("sweep_stop_m", e.sweep_stop_m);
  e.sweep_step_m = cfg.get_double("sweep_step_m", e.sweep_step_m);
  const auto sm = cfg.get_string("sweep_mode", "paired");
  if (sm == "paired")
    e.sweep = sweep_mode::paired;
  else if (sm == "product")
    e.sweep = sweep_mode::product;
  else
    throw config_error("key 'sweep_mode': expected paired or product, got '" + sm + "'");
  const auto rp = cfg.get_string("reference_power", "budget");
  if (rp == "budget")
    e.ref_power = reference_power::budget;
  else if (rp == "allocated")
    e.ref_power = reference_power::allocated;
  else
    throw config_error("key 'reference_power': expected budget or allocated, got '" + rp + "'");
  const auto pm = cfg.get_string("power_mode", "tracking");
  if (pm == "tracking")
    e.power = power_mode::tracking;
  else if (pm == "fixed")
    e.power = power_mode::fixed;
  else
    throw config_error("key 'power_mode': expected tracking or fixed, got '" + pm + "'");
  e.rounds = static_cast<int>(cfg.get_int("rounds", e.rounds));
  e.kappa_draws = static_cast<std::size_t>(nonneg(cfg.get_int("kappa_draws", 10000), "kappa_draws"));
  e.oracle_instances = static_cast<int>(nonneg(cfg.get_int("oracle_instances", e.oracle_instances), "oracle_instances"));
  e.oracle_max_ues = static_cast<int>(cfg.get_int("oracle_max_ues", e.oracle_max_ues));
  e.oracle_max_rbs = static_cast<int>(cfg.get_int("oracle_max_rbs", e.oracle_max_rbs));
  e.ccdf_points = static_cast<int>(cfg.get_int("ccdf_points", e.ccdf_points));
  e.run_convergence = cfg.get_int("run_convergence", 1) != 0;
  e.run_distance = cfg.get_int("run_distance", 1) != 0;
  e.run_sweep = cfg.get_int("run_sweep", 1) != 0;
  e.threads = static_cast<int>(cfg.get_int("threads", 1));

  if (e.seeds < 1)
    throw config_error("seeds must be >= 1");
  if (e.sweep_step_m <= 0 || e.sweep_stop_m < e.sweep_start_m)
    throw config_error("sweep range must satisfy step > 0 and stop >= start");
  if (e.rounds < 1)
    throw config_error("rounds must be >= 1");
  if (e.kappa_draws < 1)
    throw config_error("kappa_draws must be >= 1");
  if (e.oracle_max_ues < 1 || e.oracle_max_rbs < 1 || e.oracle_max_ues * e.oracle_max_rbs > 12)
    throw config_error("oracle_max_ues * oracle_max_rbs must lie in [1, 12]");
  if (e.ccdf_points < 2)
    throw config_error("ccdf_points must be >= 2");
  if (e.convergence_cue_fraction < 0 || e.convergence_cue_fraction > 1)
    throw config_error("convergence_cue_fraction must lie in [0, 1]");
  for (double k : e.convergence_ue_per_relay)
    if (k < 1 || k != std::floor(k))
      throw config_error("convergence_ue_per_relay entries must be positive integers");
  if (auto unused = cfg.unused_keys(); !unused.empty())
    throw config_error("unknown config key '" + unused.front() + "'");
  return e;
}

inline std::vector<double> sweep_axis(double start, double stop, double step)
{
  std::vector<double> out;
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
  for (long i = 0; i <= n; ++i)
    out.push_back(start + static_cast<double>(i) * step);
  return out;
}

inline std::vector<std::pair<double, double>> sweep_points(const experiment_config& e)
{
  const auto axis = sweep_axis(e.sweep_start_m, e.sweep_stop_m, e.sweep_step_m);
  std::vector<std::pair<double, double>> out;
  if (e.sweep == sweep_mode::paired)
    for (double d : axis)
      out.emplace_back(d, d);
  else
    for (double rd : axis)
      for (double dd : axis)
        out.emplace_back(rd, dd);
  return out;
}

// Runs fn(i) for i in [0, n) on up to `threads` workers; rethrows the first error.
template<typename F>
void parallel_for(std::size_t n, int threads, F&& fn)
{
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < std::min(workers, n); ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lk(err_mu);
          if (!err)
            err = std::current_exception();
        }
      }
    });
  pool.clear();
  if (err)
    std::rethrow_exception(err);
}

// ---- one snapshot ----

struct snapshot_outcome {
  std::uint64_t seed = 0;
  double d_rd_m = 0;
  double d_dd_m = 0;
  bool placed = true;
  bool converged = false;
  std::vector<int> iterations;                 // per relay
  std::vector<double> prop_rates;              // per UE, proposed scheme
  std::vector<double> ref_rates;               // per UE, reference scheme
  std::vector<double> prop_d2d;                // per D2D pair
  std::vector<double> ref_d2d;                 // per D2D pair
  std::vector<double> delay_two_hop_ms;        // per D2D pair, proposed
  std::vector<double> delay_one_hop_ms;        // per D2D pair, reference
  std::size_t admitted = 0;

  double prop_d2d_mean() const { return mean(prop_d2d); }
  double ref_d2d_mean() const { return mean(ref_d2d); }
};

inline snapshot_outcome run_snapshot(const sim_params& params, std::size_t n_cues, std::size_t n_d2d, std::uint64_t seed,
                                     const network_options& opt, reference_power ref_mode, bool with_reference = true)
{
  snapshot_outcome out;
  out.seed = seed;
  out.d_rd_m = params.d_rd_m;
  out.d_dd_m = params.d_dd_m;
  const auto s = generate_scenario(params, n_cues, n_d2d, seed);
  const auto ch = draw_channel(s, params, seed);
  const auto prop = solve_network(s, ch, params, opt);
  out.converged = prop.all_converged();
  for (const auto& r : prop.relays)
    out.iterations.push_back(r.msg.iteration);
  out.prop_rates = prop.ue_rates(s.n_ues());

  if (!with_reference)
    return out;

  const auto cues = solve_network(s, ch, params, opt, [&](std::size_t u) { return !s.is_d2d(u); });
  const auto ref = solve_reference(s, ch, params, cues, ref_mode);
  out.ref_rates = ref.cue_rate_bps;
  out.admitted = ref.admitted();
  const double B = params.rb_bandwidth_hz;

  for (std::size_t l = 0; l < prop.relays.size(); ++l) {
    const auto& a = prop.relays[l].alloc;
    const auto& t = prop.sinr[l];
    for (std::size_t i = 0; i < a.n_members(); ++i) {
      const std::size_t u = a.members[i];
      if (!s.is_d2d(u))
        continue;
      double r1 = 0, r2 = 0;
      for (std::size_t n = 0; n < a.n_rbs(); ++n)
        if (a.x(i, n)) {
          r1 += shannon_rate_bps(a.p_ue(i, n), t.gamma1(i, n), B);
          r2 += shannon_rate_bps(a.p_relay(i, n), t.gamma2(i, n), B);
        }
      const point relay = s.relays[l];
      out.prop_d2d.push_back(a.rate_bps[i]);
      out.ref_d2d.push_back(ref.d2d_rate_bps[u]);
      out.ref_rates[u] = ref.d2d_rate_bps[u];
      out.delay_two_hop_ms.push_back(
        delay_two_hop_ms(r1, r2, distance(s.ues[u].tx, relay), distance(relay, s.ues[u].rx), params));
      out.delay_one_hop_ms.push_back(
        delay_one_hop_ms(ref.d2d_rate_bps[u], distance(s.ues[u].tx, s.ues[u].rx), params));
    }
  }
  return out;
}

// ---- convergence study ----

struct convergence_record {
  int ue_per_relay = 0;
  std::uint64_t seed = 0;
  bool converged = false;
  double avg_rate_bps = 0;
  std::vector<int> iterations;
  std::vector<std::vector<double>> traces;  // per relay, final round
};

struct convergence_summary {
  int ue_per_relay = 0;
  int cues_per_relay = 0;
  int d2d_per_relay = 0;
  int seeds = 0;
  double converged_fraction = 0;
  double mean_avg_rate_bps = 0;  // over converged seeds
  double mean_iterations = 0;
};

inline std::pair<int, int> split_composition(int ue_per_relay, double cue_fraction)
{
  const int c = static_cast<int>(std::lround(cue_fraction * ue_per_relay));
  return {c, ue_per_relay - c};
}

inline std::vector<convergence_record> convergence_study(const experiment_config& e, int ue_per_relay)
{
  const auto [c, d] = split_composition(ue_per_relay, e.convergence_cue_fraction);
  const auto L = static_cast<std::size_t>(e.params.n_relays);
  std::vector<convergence_record> out(static_cast<std::size_t>(e.seeds));
  const auto opt = e.net_options();
  parallel_for(out.size(), e.threads, [&](std::size_t k) {
    const std::uint64_t seed = e.seed_base + k;
    const auto s = generate_scenario(e.params, L * static_cast<std::size_t>(c), L * static_cast<std::size_t>(d), seed);
    const auto ch = draw_channel(s, e.params, seed);
    const auto sol = solve_network(s, ch, e.params, opt);
    convergence_record r;
    r.ue_per_relay = ue_per_relay;
    r.seed = seed;
    r.converged = sol.all_converged();
    r.avg_rate_bps = avg_rate_bps(sol.ue_rates(s.n_ues()));
    for (const auto& rel : sol.relays) {
      r.iterations.push_back(rel.msg.iteration);
      r.traces.push_back(rel.msg.rate_trace);
    }
    out[k] = std::move(r);
  });
  return out;
}

inline convergence_summary summarize(const std::vector<convergence_record>& recs, double cue_fraction)
{
  convergence_summary s;
  if (recs.empty())
    return s;
  s.ue_per_relay = recs.front().ue_per_relay;
  std::tie(s.cues_per_relay, s.d2d_per_relay) = split_composition(s.ue_per_relay, cue_fraction);
  s.seeds = static_cast<int>(recs.size());
  std::vector<double> rates, iters;
  int conv = 0;
  for (const auto& r : recs) {
    if (r.converged) {
      ++conv;
      rates.push_back(r.avg_rate_bps);
    }
    for (int it : r.iterations)
      iters.push_back(it);
  }
  s.converged_fraction = static_cast<double>(conv) / static_cast<double>(recs.size());
  s.mean_avg_rate_bps = mean(rates);
  s.mean_iterations = mean(iters);
  return s;
}

// ---- distance studies ----

struct distance_point {
  double d_rd_m = 0;
  double d_dd_m = 0;
  bool placed = true;
  std::vector<snapshot_outcome> snapshots;

  double prop_d2d_mean() const
  {
    std::vector<double> v;
    for (const auto& s : snapshots)
      v.insert(v.end(), s.prop_d2d.begin(), s.prop_d2d.end());
    return mean(v);
  }
  double ref_d2d_mean() const
  {
    std::vector<double> v;
    for (const auto& s : snapshots)
      v.insert(v.end(), s.ref_d2d.begin(), s.ref_d2d.end());
    return mean(v);
  }
  double converged_fraction() const
  {
    if (snapshots.empty())
      return std::nan("");
    double c = 0;
    for (const auto& s : snapshots)
      c += s.converged;
    return c / static_cast<double>(snapshots.size());
  }
  std::vector<double> delays_two_hop() const
  {
    std::vector<double> v;
    for (const auto& s : snapshots)
      v.insert(v.end(), s.delay_two_hop_ms.begin(), s.delay_two_hop_ms.end());
    return v;
  }
  std::vector<double> delays_one_hop() const
  {
    std::vector<double> v;
    for (const auto& s : snapshots)
      v.insert(v.end(), s.delay_one_hop_ms.begin(), s.delay_one_hop_ms.end());
    return v;
  }
};

inline std::vector<distance_point> distance_study(const experiment_config& e,
                                                  const std::vector<std::pair<double, double>>& points)
{
  std::vector<distance_point> out(points.size());
  const std::size_t S = static_cast<std::size_t>(e.seeds);
  std::vector<snapshot_outcome> flat(points.size() * S);
  std::vector<char> placed(points.size() * S, 1);
  const auto opt = e.net_options();
  parallel_for(flat.size(), e.threads, [&](std::size_t idx) {
    const std::size_t p = idx / S, k = idx % S;
    sim_params params = e.params;
    params.d_rd_m = points[p].first;
    params.d_dd_m = points[p].second;
    try {
      flat[idx] = run_snapshot(params, e.n_cues, e.n_d2d_pairs, e.seed_base + k, opt, e.ref_power);
    } catch (const scenario_error&) {
      placed[idx] = 0;
    }
  });
  for (std::size_t p = 0; p < points.size(); ++p) {
    out[p].d_rd_m = points[p].first;
    out[p].d_dd_m = points[p].second;
    for (std::size_t k = 0; k < S; ++k) {
      if (!placed[p * S + k]) {
        out[p].placed = false;
        continue;
      }
      out[p].snapshots.push_back(std::move(flat[p * S + k]));
    }
    if (!out[p].placed)
      out[p].snapshots.clear();
  }
  return out;
}

// ---- oracle study ----

struct oracle_record {
  int instance = 0;
  int n_ues = 0;
  int n_rbs = 0;
  bool converged = false;
  int iterations = 0;
  double mp_objective = 0;       // grid-snapped
  bool mp_qos_ok = false;
  bool mp_hard_ok = false;
  double oracle_objective = 0;   // QoS-constrained optimum (best effort if none)
  bool oracle_qos_feasible = false;
  double best_effort_objective = 0;
  bool dominance_ok = false;
  bool exact = false;
};

inline oracle_record oracle_instance(const experiment_config& e, int k)
{
  auto rng = make_rng(e.seed_base + static_cast<std::uint64_t>(k), rng_stream::instance);
  std::uniform_int_distribution<int> pick_m(1, e.oracle_max_ues);
  const int m = pick_m(rng);
  std::uniform_int_distribution<int> pick_n(1, std::min(e.oracle_max_rbs, 12 / m));
  const int n = pick_n(rng);

  sim_params params = e.params;
  params.n_rbs = n;
  const auto L = static_cast<std::size_t>(params.n_relays);
  const std::uint64_t seed = e.seed_base + static_cast<std::uint64_t>(k);
  const auto s = generate_scenario(params, e.n_cues, e.n_d2d_pairs, seed);
  const auto ch = draw_channel(s, params, seed);

  std::vector<std::vector<std::size_t>> all(L);
  for (std::size_t l = 0; l < L; ++l)
    all[l] = s.members(static_cast<int>(l));
  auto pool = all[0];
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(std::min(pool.size(), static_cast<std::size_t>(m)));
  std::sort(pool.begin(), pool.end());

  const auto others = initial_network_allocation(ch, params, all);
  const auto sinr = unit_sinrs(ch, 0, pool, others);
  const auto kappa = compute_kappa(ch, params, 0, pool, monte_carlo_min_rate(e.kappa_draws, 0));
  solver_options so;
  so.mode = power_mode::fixed;
  const auto sol = solve_relay(ch, params, sinr, kappa, so);

  const auto grid = default_power_grid(params);
  allocation_state snapped = sol.alloc;
  for (std::size_t i = 0; i < snapped.n_members(); ++i)
    for (std::size_t r = 0; r < snapped.n_rbs(); ++r) {
      snapped.p_ue(i, r) = snapped.x(i, r) ? snap_down(snapped.p_ue(i, r), grid) : 0.0;
      snapped.p_relay(i, r) = coupled_relay_power(snapped.p_ue(i, r), sinr.gamma1(i, r), sinr.gamma2(i, r));
    }
  refresh_rates(snapped, sinr, params.rb_bandwidth_hz);
  const auto rep = check_feasibility(snapped, sinr, ch, params);
  const auto orc = exhaustive_solve(ch, sinr, params, grid);

  oracle_record r;
  r.instance = k;
  r.n_ues = static_cast<int>(pool.size());
  r.n_rbs = n;
  r.converged = sol.msg.converged;
  r.iterations = sol.msg.iteration;
  r.mp_objective = sum_rate_bps(snapped);
  r.mp_qos_ok = rep.qos_ok();
  r.mp_hard_ok = rep.hard_ok();
  r.oracle_objective = orc.objective;
  r.oracle_qos_feasible = orc.qos_feasible;
  r.best_effort_objective = orc.best_effort_objective;
  const double bound = (r.mp_qos_ok && orc.qos_feasible) ? orc.objective : orc.best_effort_objective;
  r.dominance_ok = r.mp_hard_ok && leq_rel(r.mp_objective, bound);
  r.exact = std::abs(r.mp_objective - orc.objective) <= 1e-9 * std::max(std::abs(orc.objective), 1e-300);
  return r;
}

struct oracle_summary {
  int instances = 0;
  int converged = 0;
  int exact_converged = 0;
  int dominance_ok = 0;
  double exact_fraction() const { return converged ? static_cast<double>(exact_converged) / converged : 0.0; }
  double dominance_fraction() const { return instances ? static_cast<double>(dominance_ok) / instances : 0.0; }
};

inline std::vector<oracle_record> oracle_study(const experiment_config& e)
{
  std::vector<oracle_record> out(static_cast<std::size_t>(e.oracle_instances));
  parallel_for(out.size(), e.threads, [&](std::size_t k) { out[k] = oracle_instance(e, static_cast<int>(k)); });
  return out;
}

inline oracle_summary summarize(const std::vector<oracle_record>& recs)
{
  oracle_summary s;
  s.instances = static_cast<int>(recs.size());
  for (const auto& r : recs) {
    s.dominance_ok += r.dominance_ok;
    if (r.converged) {
      ++s.converged;
      s.exact_converged += r.exact;
    }
  }
  return s;
}

} // namespace rd2d

#endif
