// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "irsdm/baselines.hpp"
#include "irsdm/complexity.hpp"
#include "irsdm/max_rp_zfc.hpp"
#include "oracles.hpp"

using namespace irsdm;

TEST(NoIrs, SymmetricEavesdropperHasZeroRate) {
  PhiloxStream rng(1, 0);
  ChannelSet ch = oracle::random_channels(rng, 3, 2);
  ch.h_ae = ch.h_ab;
  ch.g_ae = ch.g_ab;
  const BeamformingSolution s = no_irs_solution(ch, oracle::toy_config(3, 2));
  EXPECT_NEAR(s.sr, 0.0, 1e-12);
  EXPECT_EQ(s.theta.size(), 0);
}

TEST(NoIrs, SilentEveGivesDirectLinkCapacity) {
  SystemConfig c;
  c.d_ae = 1e9;
  const ChannelSet ch = build_channels(c);
  const BeamformingSolution s = no_irs_solution(ch, c);
  const double cap = std::log2(1.0 + c.pa_cm * c.tx_power * ch.g_ab * ch.h_ab.squaredNorm() /
                                         c.noise_bob);
  EXPECT_NEAR(s.sr, cap, 1e-6);
}

TEST(NoIrs, IndependentOfIrsSize) {
  SystemConfig c;
  double first = -1.0;
  for (int nr : {0, 16, 128}) {
    c.n_irs_elements = nr;
    const double sr = no_irs_solution(build_channels(c), c).sr;
    if (first < 0.0) first = sr;
    EXPECT_EQ(sr, first);
  }
}

TEST(RandomPhase, EmptyIrsEqualsNoIrs) {
  SystemConfig c;
  c.n_irs_elements = 0;
  c.random_phase_draws = 3;
  const ChannelSet ch = build_channels(c);
  const RandomPhaseResult r = random_phase_solution(ch, c, 4);
  EXPECT_EQ(r.mean_sr, no_irs_solution(ch, c).sr);
  EXPECT_EQ(r.stderr_sr, 0.0);
}

TEST(RandomPhase, DeterministicAndStatistics) {
  PhiloxStream rng(2, 0);
  const ChannelSet ch = oracle::random_channels(rng, 3, 4);
  SystemConfig c = oracle::toy_config(3, 4);
  c.random_phase_draws = 20;
  const RandomPhaseResult a = random_phase_solution(ch, c, 7);
  const RandomPhaseResult b = random_phase_solution(ch, c, 7);
  EXPECT_EQ(a.draw_sr, b.draw_sr);
  EXPECT_EQ(a.mean_sr, b.mean_sr);
  ASSERT_EQ(a.draw_sr.size(), 20u);
  double mean = 0.0;
  for (double v : a.draw_sr) mean += v / 20.0;
  EXPECT_NEAR(a.mean_sr, mean, 1e-12);
  double ss = 0.0;
  for (double v : a.draw_sr) ss += (v - mean) * (v - mean);
  EXPECT_NEAR(a.stderr_sr, std::sqrt(ss / 19.0 / 20.0), 1e-12);
  for (const auto& d : a.draws) {
    for (Eigen::Index k = 0; k < d.theta.size(); ++k) EXPECT_NEAR(std::abs(d.theta(k)), 1.0, 1e-12);
  }
  const RandomPhaseResult other = random_phase_solution(ch, c, 8);
  EXPECT_NE(a.draw_sr, other.draw_sr);
}

TEST(RandomPhase, StandardErrorShrinksWithDraws) {
  PhiloxStream rng(3, 0);
  const ChannelSet ch = oracle::random_channels(rng, 2, 6);
  SystemConfig c = oracle::toy_config(2, 6);
  c.random_phase_draws = 10;
  const double few = random_phase_solution(ch, c, 1).stderr_sr;
  c.random_phase_draws = 160;
  const double many = random_phase_solution(ch, c, 1).stderr_sr;
  EXPECT_GT(few, 0.0);
  EXPECT_LT(many, few);
}

TEST(Baselines, GpiNotBelowNoIrsOnStrongIrsToys) {
  for (std::uint64_t s = 0; s < 3; ++s) {
    PhiloxStream rng(40 + s, 0);
    ChannelSet ch = oracle::random_channels(rng, 4, 8);
    ch.g_aib *= 4.0;
    SystemConfig c = oracle::toy_config(4, 8);
    const double none = no_irs_solution(ch, c).sr;
    const double gpi = max_sr_gpi(ch, c, s).sr;
    EXPECT_GE(gpi, none - 1e-9);
  }
}

// Complexity formulas, re-derived term by term.
namespace {

double gpi_reference(double na, double nr, double l1, double l2, double l3) {
  const double n1 = nr + 1.0;
  const double theta_part = l2 * (3.0 * std::pow(n1, 3) + 7.0 * std::pow(n1, 2));
  const double an_part = l3 * (3.0 * std::pow(na, 3) + 7.0 * std::pow(na, 2));
  return l1 * (theta_part + an_part + 2.0 * std::pow(na, 3) + 4.0 * std::pow(na, 2));
}

double zfc_reference(double na, double nr, double l4) {
  double inner = 0.0;
  inner += std::pow(nr, 3);
  inner += 7.0 * std::pow(nr, 2);
  inner += 2.0 * std::pow(nr, 2) * na;
  inner += 14.0 * std::pow(na, 2);
  inner += 6.0 * std::pow(na, 2) * nr;
  inner -= 4.0 * nr * na;
  inner -= 6.0 * na;
  inner -= 2.0 * nr;
  return l4 * inner + 2.0 * std::pow(na, 2) + na;
}

}  // namespace

TEST(Complexity, HandValues) {
  EXPECT_EQ(flops_max_sr_gpi(1, 0, {1, 1, 1, 1}), 26.0);
  EXPECT_EQ(flops_max_rp_zfc(1, 1, {1, 1, 1, 1}), 21.0);
}

TEST(Complexity, CountsMustBePositive) {
  EXPECT_THROW(flops_max_sr_gpi(16, 32, {0, 1, 1, 1}), Error);
  EXPECT_THROW(flops_max_sr_gpi(16, 32, {1, 0.5, 1, 1}), Error);
  EXPECT_THROW(flops_max_rp_zfc(16, 32, {1, 1, 1, 0}), Error);
  EXPECT_THROW(flops_max_rp_zfc(0, 32, {1, 1, 1, 1}), Error);
}

TEST(Complexity, MatchesIndependentEvaluation) {
  for (int na : {1, 2, 16, 64}) {
    for (int nr : {0, 1, 32, 1024, 4096}) {
      for (double l : {1.0, 3.0, 5.0, 7.5}) {
        EXPECT_EQ(flops_max_sr_gpi(na, nr, {l, l + 1, l + 2, 1}),
                  gpi_reference(na, nr, l, l + 1, l + 2));
        EXPECT_EQ(flops_max_rp_zfc(na, nr, {1, 1, 1, l}), zfc_reference(na, nr, l));
      }
    }
  }
  EXPECT_EQ(flops_max_sr_gpi(16, 1024, {5, 5, 5, 1}), gpi_reference(16, 1024, 5, 5, 5));
}

TEST(Complexity, LinearInL4) {
  const double tail = 2.0 * 16 * 16 + 16;
  EXPECT_EQ(flops_max_rp_zfc(16, 256, {1, 1, 1, 2}) - tail,
            2.0 * (flops_max_rp_zfc(16, 256, {1, 1, 1, 1}) - tail));
}

TEST(Complexity, GpiDominatesAtScale) {
  EXPECT_GT(flops_max_sr_gpi(16, 1024, {5, 5, 5, 5}), flops_max_rp_zfc(16, 1024, {5, 5, 5, 5}));
  const IterationCounts k{3, 4, 2, 2};
  const double ratio = flops_max_sr_gpi(16, 1 << 16, k) / flops_max_rp_zfc(16, 1 << 16, k);
  EXPECT_NEAR(ratio, 3.0 * k.l1 * k.l2 / k.l4, 0.01 * ratio);
}
