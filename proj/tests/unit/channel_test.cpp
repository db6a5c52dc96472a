#include <rd2d/channel.hpp>
#include <rd2d/io.hpp>

#include <gtest/gtest.h>

using namespace rd2d;

TEST(path_loss, access_examples)
{
  EXPECT_NEAR(path_loss_access_db(1.0, 0, 1), 103.8, 1e-12);
  EXPECT_NEAR(path_loss_access_db(0.1, 0, 1), 82.9, 1e-12);
  EXPECT_NEAR(path_loss_access_db(0.1, 10, 1), 92.9, 1e-12);
}

TEST(path_loss, backhaul_examples)
{
  EXPECT_NEAR(path_loss_backhaul_db(1.0, 0, 1), 100.7, 1e-12);
  EXPECT_NEAR(path_loss_backhaul_db(0.125, 0, 1), 79.4775, 1e-3);
  EXPECT_NEAR(path_loss_backhaul_db(0.125, 6, 1), 85.4775, 1e-3);
}

TEST(path_loss, fading_term_and_errors)
{
  EXPECT_NEAR(path_loss_access_db(1.0, 0, 10.0), 113.8, 1e-12);
  EXPECT_THROW(path_loss_access_db(0.0, 0, 1), channel_error);
  EXPECT_THROW(path_loss_access_db(-1.0, 0, 1), channel_error);
  EXPECT_THROW(path_loss_access_db(1.0, 0, 0), channel_error);
  EXPECT_THROW(path_loss_backhaul_db(0.0, 0, 1), channel_error);
  EXPECT_THROW(path_loss_backhaul_db(1.0, 0, -2), channel_error);
}

TEST(path_loss, gain_examples)
{
  EXPECT_DOUBLE_EQ(gain_from_path_loss(0), 1.0);
  EXPECT_NEAR(gain_from_path_loss(82.9) / 5.13e-9, 1.0, 2e-3);
  EXPECT_NEAR(gain_from_path_loss(100) / 1e-10, 1.0, 1e-12);
}

TEST(fading, unit_mean_exponential)
{
  auto rng = make_rng(7, rng_stream::channel);
  double s = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i)
    s += draw_fading_power(rng);
  const double m = s / n;
  EXPECT_GE(m, 0.99);
  EXPECT_LE(m, 1.01);
}

TEST(shadowing, zero_mean_and_sigma)
{
  for (double sigma : {6.0, 10.0}) {
    auto rng = make_rng(11, rng_stream::channel);
    const int n = 100000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
      const double v = draw_shadow_db(rng, sigma);
      s += v;
      s2 += v * v;
    }
    const double m = s / n;
    const double sd = std::sqrt(s2 / n - m * m);
    EXPECT_NEAR(m, 0.0, 0.05 * sigma);
    EXPECT_NEAR(sd, sigma, 0.05 * sigma);
  }
}

namespace {

struct fixture {
  sim_params p;
  network_scenario s = generate_scenario(p, 15, 9, 4);
  channel_realization ch = draw_channel(s, p, 4);
};

} // namespace

TEST(channel, gains_positive_and_finite)
{
  fixture f;
  auto check = [](const std::vector<double>& v) {
    for (double g : v) {
      EXPECT_GT(g, 0.0);
      EXPECT_TRUE(std::isfinite(g));
    }
  };
  check(f.ch.ue_relay.data());
  check(f.ch.mean_ue_relay.data());
  check(f.ch.relay_enb.data());
  check(f.ch.relay_d2drx.data());
  check(f.ch.ue_d2drx.data());
  EXPECT_GT(f.ch.noise_power_w, 0.0);
  EXPECT_TRUE(f.ch.caps_active);
}

TEST(channel, reference_gains_recompute_exactly)
{
  fixture f;
  for (std::size_t u = 0; u < f.s.n_ues(); ++u) {
    const auto l = static_cast<std::size_t>(f.s.ues[u].relay);
    for (std::size_t n = 0; n < f.ch.n_rbs; ++n) {
      double g1 = 0;
      for (std::size_t j = 0; j < 3; ++j)
        if (j != l)
          g1 = std::max(g1, f.ch.ue_relay(u, j, n));
      EXPECT_EQ(f.ch.g_ref_hop1(u, n), g1);
      double g2 = 0;
      for (std::size_t v : f.ch.d2d_ues)
        if (static_cast<std::size_t>(f.s.ues[v].relay) != l)
          g2 = std::max(g2, f.ch.h_relay_d2drx(l, v, n));
      EXPECT_EQ(f.ch.g_ref_hop2(u, n), g2);
      EXPECT_GT(f.ch.g_ref_hop1(u, n), 0.0);
      EXPECT_GT(f.ch.g_ref_hop2(u, n), 0.0);
    }
  }
}

TEST(channel, single_relay_disables_caps)
{
  sim_params p;
  p.n_relays = 1;
  auto s = generate_scenario(p, 3, 2, 1);
  auto ch = draw_channel(s, p, 1);
  EXPECT_FALSE(ch.caps_active);
  for (double g : ch.g_ref_hop1.data())
    EXPECT_EQ(g, 0.0);
  for (double g : ch.g_ref_hop2.data())
    EXPECT_EQ(g, 0.0);
}

TEST(channel, deterministic_under_seed)
{
  fixture a, b;
  EXPECT_EQ(a.ch.ue_relay, b.ch.ue_relay);
  EXPECT_EQ(a.ch.ue_d2drx, b.ch.ue_d2drx);
  EXPECT_EQ(channel_to_json(a.ch).dump(), channel_to_json(b.ch).dump());
  auto c = draw_channel(a.s, a.p, 5);
  EXPECT_NE(a.ch.ue_relay, c.ue_relay);
}

TEST(channel, shadowing_is_shared_across_rbs)
{
  // with fading removed, the per-RB spread is zero and equals the mean gain
  fixture f;
  for (std::size_t u = 0; u < f.s.n_ues(); ++u) {
    const auto l = static_cast<std::size_t>(f.s.ues[u].relay);
    double lsum = 0;
    for (std::size_t n = 0; n < f.ch.n_rbs; ++n)
      lsum += std::log(f.ch.ue_relay(u, l, n) / f.ch.mean_ue_relay(u, l));
    // log of Exp(1) has mean -0.5772; 13 draws keep the average within a few units
    EXPECT_LT(std::abs(lsum / static_cast<double>(f.ch.n_rbs)), 3.0);
  }
}

TEST(channel, non_d2d_slot_lookup_throws)
{
  fixture f;
  EXPECT_THROW(f.ch.h_direct(0, 0), channel_error);
}
