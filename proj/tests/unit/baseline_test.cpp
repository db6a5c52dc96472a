#include <rd2d/baseline.hpp>

#include <gtest/gtest.h>

#include <set>

using namespace rd2d;

namespace {

// one relay, hand-placed nodes, no shadowing
struct hand_built {
  sim_params p;
  network_scenario s;
  channel_realization ch;
  network_solution cues;

  explicit hand_built(std::vector<ue_node> ues, double d_dd)
  {
    p.n_relays = 1;
    p.shadow_sigma_ue_relay_db = 0;
    p.shadow_sigma_relay_enb_db = 0;
    p.d_dd_m = d_dd;
    s.enb = {0, 0};
    s.cell_side_m = p.cell_side_m;
    s.relays = {{125, 0}};
    s.ues = std::move(ues);
    ch = draw_channel(s, p, 17);
    cues = solve_network(s, ch, p, {}, [&](std::size_t u) { return !s.is_d2d(u); });
  }
};

} // namespace

TEST(reference, near_zero_separation_admitted)
{
  hand_built f({{ue_kind::cue, {145, 0}, {145, 0}, 0}, {ue_kind::d2d, {125, 70}, {125, 71}, 0}}, 1.0);
  auto ref = solve_reference(f.s, f.ch, f.p, f.cues);
  EXPECT_EQ(ref.partner[1], 0);
  EXPECT_GE(ref.d2d_rate_bps[1], f.p.d2d_rate_req_bps);
  EXPECT_GE(ref.cue_rate_bps[0], f.p.cue_rate_req_bps);
}

TEST(reference, zero_direct_gain_refrains)
{
  hand_built f({{ue_kind::cue, {145, 0}, {145, 0}, 0}, {ue_kind::d2d, {125, 70}, {125, 71}, 0}}, 1.0);
  auto ch = f.ch;
  for (std::size_t n = 0; n < ch.n_rbs; ++n)
    ch.ue_d2drx(1, ch.slot(1), n) = 0.0;
  auto ref = solve_reference(f.s, ch, f.p, f.cues);
  EXPECT_EQ(ref.partner[1], -1);
  EXPECT_EQ(ref.d2d_rate_bps[1], 0.0);
}

TEST(reference, at_most_one_pair_per_cue)
{
  hand_built f({{ue_kind::cue, {145, 0}, {145, 0}, 0},
                {ue_kind::d2d, {125, 70}, {125, 71}, 0},
                {ue_kind::d2d, {125, -70}, {125, -71}, 0}},
               1.0);
  // both pairs are individually admissible
  EXPECT_GE(evaluate_sharing(f.ch, f.p, f.cues, 0, 0, 1, reference_power::budget).d2d_bps, f.p.d2d_rate_req_bps);
  EXPECT_GE(evaluate_sharing(f.ch, f.p, f.cues, 0, 0, 2, reference_power::budget).d2d_bps, f.p.d2d_rate_req_bps);
  auto ref = solve_reference(f.s, f.ch, f.p, f.cues);
  EXPECT_EQ(ref.admitted(), 1u);
  EXPECT_EQ(ref.partner[1], 0);
  EXPECT_EQ(ref.partner[2], -1);
}

TEST(reference, admission_sound_and_one_to_one)
{
  sim_params p;
  p.d_dd_m = 40;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto s = generate_scenario(p, 15, 9, seed);
    auto ch = draw_channel(s, p, seed);
    auto cues = solve_network(s, ch, p, {}, [&](std::size_t u) { return !s.is_d2d(u); });
    for (auto mode : {reference_power::budget, reference_power::allocated}) {
      auto ref = solve_reference(s, ch, p, cues, mode);
      std::set<int> used;
      for (std::size_t d = 0; d < s.n_ues(); ++d) {
        if (ref.partner[d] < 0)
          continue;
        EXPECT_TRUE(s.is_d2d(d));
        EXPECT_TRUE(used.insert(ref.partner[d]).second);
        const auto l = static_cast<std::size_t>(s.ues[d].relay);
        const auto& m = cues.relays[l].alloc.members;
        const auto i = static_cast<std::size_t>(std::find(m.begin(), m.end(), ref.partner[d]) - m.begin());
        ASSERT_LT(i, m.size());
        auto r = evaluate_sharing(ch, p, cues, l, i, d, mode);
        EXPECT_GE(r.cue_bps, p.cue_rate_req_bps * (1 - 1e-9));
        EXPECT_GE(r.d2d_bps, p.d2d_rate_req_bps * (1 - 1e-9));
        EXPECT_EQ(r.d2d_bps, ref.d2d_rate_bps[d]);
      }
    }
  }
}
