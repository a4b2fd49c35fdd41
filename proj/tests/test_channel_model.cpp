// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "irsdm/channel_model.hpp"
#include "oracles.hpp"

using namespace irsdm;

TEST(Steering, SingleElementIsOne) {
  const CVec h = steering_vector(0.3, 1, 0.5);
  ASSERT_EQ(h.size(), 1);
  EXPECT_NEAR(std::abs(h(0) - cplx(1.0)), 0.0, 1e-15);
}

TEST(Steering, BroadsideIsFlat) {
  const CVec h = steering_vector(kPi / 2.0, 4, 0.5);
  for (Eigen::Index k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(h(k) - cplx(0.5)), 0.0, 1e-15);
}

TEST(Steering, EndfireTwoElements) {
  const CVec h = steering_vector(0.0, 2, 0.5);
  const double s = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(h(0) - s * std::polar(1.0, -kPi / 2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(h(1) - s * std::polar(1.0, kPi / 2.0)), 0.0, 1e-15);
}

TEST(Steering, UnitNormAndMirrorSymmetry) {
  PhiloxStream rng(11, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const double theta = 2.0 * kPi * rng.uniform() - kPi;
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.uniform() * 64);
    const double r = 0.1 + rng.uniform();
    const CVec h = steering_vector(theta, n, r);
    EXPECT_NEAR(h.norm(), 1.0, 1e-12);
    const CVec m = steering_vector(kPi - theta, n, r);
    for (Eigen::Index k = 0; k < n; ++k) {
      EXPECT_NEAR(std::abs(m(k) - std::conj(h(k))), 0.0, 1e-12);
      EXPECT_NEAR(std::abs(m(k) - h(n - 1 - k)), 0.0, 1e-12);
    }
  }
}

TEST(Steering, RejectsNonFiniteAngle) {
  EXPECT_THROW(steering_vector(std::nan(""), 4, 0.5), Error);
}

TEST(PathLoss, Values) {
  EXPECT_DOUBLE_EQ(path_loss(1.0, 1e-4, 2.0), 1e-4);
  EXPECT_DOUBLE_EQ(path_loss(2.0, 1e-4, 2.0), 2.5e-5);
  EXPECT_NEAR(path_loss(40.0, 1e-4, 2.0), 6.25e-8, 1e-22);
  EXPECT_THROW(path_loss(0.0, 1e-4, 2.0), Error);
  EXPECT_THROW(path_loss(-1.0, 1e-4, 2.0), Error);
  double prev = path_loss(0.5, 1e-4, 2.7);
  for (double d = 0.6; d < 100.0; d *= 1.3) {
    const double g = path_loss(d, 1e-4, 2.7);
    EXPECT_LT(g, prev);
    prev = g;
  }
}

TEST(Geometry, LawOfCosines) {
  SystemConfig c;
  const NodeGeometry g = node_geometry(c);
  auto cosine_law = [](double r1, double t1, double r2, double t2) {
    return std::sqrt(r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * std::cos(t2 - t1));
  };
  EXPECT_NEAR(g.d_ib, cosine_law(c.d_ai, c.theta_ai, c.d_ab, c.theta_ab), 1e-12);
  EXPECT_NEAR(g.d_ie, cosine_law(c.d_ai, c.theta_ai, c.d_ae, c.theta_ae), 1e-12);
  EXPECT_NEAR(g.d_ib, 20.0547, 1e-4);
  EXPECT_NEAR(g.d_ie, 33.6765, 1e-4);
}

TEST(Geometry, IrsAnglesPointAtNodes) {
  SystemConfig c;
  const NodeGeometry g = node_geometry(c);
  const double xi = c.d_ai * std::cos(c.theta_ai), yi = c.d_ai * std::sin(c.theta_ai);
  const double xb = c.d_ab * std::cos(c.theta_ab), yb = c.d_ab * std::sin(c.theta_ab);
  EXPECT_NEAR(xi + g.d_ib * std::cos(g.theta_irs_to_bob), xb, 1e-10);
  EXPECT_NEAR(yi + g.d_ib * std::sin(g.theta_irs_to_bob), yb, 1e-10);
  EXPECT_NEAR(xi + c.d_ai * std::cos(g.theta_irs_to_alice), 0.0, 1e-10);
  EXPECT_NEAR(yi + c.d_ai * std::sin(g.theta_irs_to_alice), 0.0, 1e-10);
}

TEST(Geometry, CoincidentBobIsRejected) {
  SystemConfig c;
  c.theta_ab = c.theta_ai;
  c.d_ab = c.d_ai;
  try {
    node_geometry(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateGeometry);
  }
}

TEST(BuildChannels, ReferenceScenarioShapes) {
  SystemConfig c;
  c.n_irs_elements = 64;
  const ChannelSet ch = build_channels(c);
  EXPECT_EQ(ch.n_tx(), 16);
  EXPECT_EQ(ch.n_irs(), 64);
  EXPECT_NEAR(ch.h_ab.norm(), 1.0, 1e-12);
  EXPECT_NEAR(ch.h_ae.norm(), 1.0, 1e-12);
  EXPECT_NEAR(ch.h_ib.norm(), 1.0, 1e-12);
  EXPECT_NEAR(ch.h_ie.norm(), 1.0, 1e-12);
  Eigen::JacobiSVD<CMat> svd(ch.H_ai);
  EXPECT_LE(svd.singularValues()(1), 1e-10 * svd.singularValues()(0));
  EXPECT_NEAR(svd.singularValues()(0), 1.0, 1e-12);
  EXPECT_EQ(ch.g_aib, ch.g_ai * ch.g_ib);
  EXPECT_EQ(ch.g_aie, ch.g_ai * ch.g_ie);
  EXPECT_NEAR(ch.g_ab, 6.25e-8, 1e-22);
  EXPECT_GT(ch.g_ae, 0.0);
}

TEST(BuildChannels, Deterministic) {
  SystemConfig c;
  const ChannelSet a = build_channels(c), b = build_channels(c);
  EXPECT_TRUE(a.h_ab == b.h_ab);
  EXPECT_TRUE(a.H_ai == b.H_ai);
  EXPECT_TRUE(a.h_ie == b.h_ie);
  EXPECT_EQ(a.g_aie, b.g_aie);
}

TEST(BuildChannels, EmptyIrs) {
  SystemConfig c;
  c.n_irs_elements = 0;
  const ChannelSet ch = build_channels(c);
  EXPECT_EQ(ch.h_ib.size(), 0);
  EXPECT_EQ(ch.H_ai.rows(), 0);
  EXPECT_EQ(ch.H_ai.cols(), 16);
  EXPECT_NO_THROW(check_dimensions(ch));
  const ChannelSet w = without_irs(build_channels(SystemConfig{}));
  EXPECT_EQ(w.n_irs(), 0);
  EXPECT_EQ(w.g_aib, 0.0);
}

TEST(BuildChannels, CheckDimensionsCatchesMismatch) {
  SystemConfig c;
  ChannelSet ch = build_channels(c);
  ch.h_ie = CVec::Zero(3);
  EXPECT_THROW(check_dimensions(ch), Error);
}
