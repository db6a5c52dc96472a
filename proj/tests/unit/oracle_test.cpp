#include <rd2d/experiment.hpp>
#include <rd2d/oracle.hpp>

#include <gtest/gtest.h>

using namespace rd2d;

namespace {

struct small {
  sim_params p;
  network_scenario s;
  channel_realization ch;
  unit_sinr_table t;

  small(int n_rbs, std::size_t n_ues, std::uint64_t seed, sim_params base = {})
    : p(base)
  {
    p.n_rbs = n_rbs;
    s = generate_scenario(p, 15, 9, seed);
    ch = draw_channel(s, p, seed);
    std::vector<std::vector<std::size_t>> all{s.members(0), s.members(1), s.members(2)};
    auto m = all[0];
    m.resize(n_ues);
    t = unit_sinrs(ch, 0, m, initial_network_allocation(ch, p, all));
  }
};

} // namespace

TEST(oracle, single_variable_two_point_grid)
{
  sim_params base;
  base.cue_rate_req_bps = 0;
  base.n_relays = 1;
  sim_params p = base;
  p.n_rbs = 1;
  auto s = generate_scenario(p, 1, 0, 2);
  auto ch = draw_channel(s, p, 2);
  auto t = unit_sinrs(ch, 0, s.members(0), {});
  const double p1 = 0.01;
  auto r = exhaustive_solve(ch, t, p, {0.0, p1});
  EXPECT_TRUE(r.qos_feasible);
  EXPECT_EQ(r.alloc.x(0, 0), 1);
  EXPECT_EQ(r.alloc.p_ue(0, 0), p1);
  EXPECT_DOUBLE_EQ(r.objective, rb_rate_bps(p1, t.gamma1(0, 0), p.rb_bandwidth_hz));
}

TEST(oracle, infeasible_caps_give_zero_and_flag)
{
  sim_params base;
  base.interference_threshold_hop1_dbm = -250;
  base.interference_threshold_hop2_dbm = -250;
  small f(2, 2, 3, base);
  auto r = exhaustive_solve(f.ch, f.t, f.p, default_power_grid(f.p));
  EXPECT_FALSE(r.qos_feasible);
  EXPECT_EQ(r.objective, 0.0);
  for (auto v : r.alloc.x.data())
    EXPECT_EQ(v, 0);
}

TEST(oracle, result_passes_feasibility)
{
  sim_params base;
  base.cue_rate_req_bps = 1e3;
  base.d2d_rate_req_bps = 1e3;
  int feasible = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    small f(3, 2, seed, base);
    auto r = exhaustive_solve(f.ch, f.t, f.p, default_power_grid(f.p));
    const auto rep = check_feasibility(r.alloc, f.t, f.ch, f.p);
    EXPECT_TRUE(rep.hard_ok());
    EXPECT_TRUE(check_feasibility(r.best_effort, f.t, f.ch, f.p).hard_ok());
    EXPECT_LE(r.objective, r.best_effort_objective * (1 + 1e-12));
    if (r.qos_feasible) {
      ++feasible;
      EXPECT_TRUE(rep.empty());
      EXPECT_NEAR(sum_rate_bps(r.alloc), r.objective, 1e-9 * r.objective);
    }
  }
  EXPECT_GT(feasible, 0);
}

TEST(oracle, dominates_message_passing)
{
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    small f(2, 2, seed);
    auto kappa = compute_kappa(f.ch, f.p, 0, f.t.members, monte_carlo_min_rate(5000, 0));
    solver_options o;
    o.mode = power_mode::fixed;
    auto sol = solve_relay(f.ch, f.p, f.t, kappa, o);
    auto grid = default_power_grid(f.p);
    auto a = sol.alloc;
    for (std::size_t i = 0; i < a.n_members(); ++i)
      for (std::size_t n = 0; n < a.n_rbs(); ++n)
        a.p_ue(i, n) = a.x(i, n) ? snap_down(a.p_ue(i, n), grid) : 0.0;
    refresh_rates(a, f.t, f.p.rb_bandwidth_hz);
    auto rep = check_feasibility(a, f.t, f.ch, f.p);
    ASSERT_TRUE(rep.hard_ok());
    auto r = exhaustive_solve(f.ch, f.t, f.p, grid);
    const double bound = rep.qos_ok() ? r.objective : r.best_effort_objective;
    EXPECT_LE(sum_rate_bps(a), bound * (1 + 1e-9));
  }
}

TEST(oracle, guards)
{
  small f(4, 3, 1);
  EXPECT_THROW(exhaustive_solve(f.ch, f.t, f.p, default_power_grid(f.p), 11), oracle_error);
  EXPECT_THROW(exhaustive_solve(f.ch, f.t, f.p, {0, 1, 2, 3, 4}), oracle_error);
  EXPECT_THROW(exhaustive_solve(f.ch, f.t, f.p, {}), oracle_error);
}

TEST(oracle, snap_down_examples)
{
  std::vector<double> g{0, 1, 2, 4};
  EXPECT_EQ(snap_down(3.9, g), 2.0);
  EXPECT_EQ(snap_down(4.0, g), 4.0);
  EXPECT_EQ(snap_down(9.0, g), 4.0);
  EXPECT_EQ(snap_down(0.5, g), 0.0);
}

TEST(oracle, ties_keep_first_in_enumeration_order)
{
  // zero-rate grid: every point scores 0, so the empty allocation wins
  sim_params p;
  p.cue_rate_req_bps = 0;
  p.d2d_rate_req_bps = 0;
  small f(2, 2, 5, p);
  auto r = exhaustive_solve(f.ch, f.t, f.p, {0.0});
  EXPECT_EQ(r.objective, 0.0);
  for (auto v : r.alloc.x.data())
    EXPECT_EQ(v, 0);
}
