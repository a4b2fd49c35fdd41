// SPDX-License-Identifier: Apache-2.0
//
// Deterministic line-of-sight channels for the Alice / IRS / Bob / Eve
// layout. Alice sits at the origin with her ULA along the x axis; every
// other node is placed in polar coordinates (distance, departure angle)
// relative to Alice. The IRS array axis is parallel to Alice's.

#ifndef IRSDM_CHANNEL_MODEL_HPP_
#define IRSDM_CHANNEL_MODEL_HPP_

#include <algorithm>
#include <cmath>

#include "irsdm/config.hpp"
#include "irsdm/types.hpp"

namespace irsdm {

struct ChannelSet {
  CVec h_ab;  // Alice -> Bob, length Na
  CVec h_ae;  // Alice -> Eve, length Na
  CVec h_ib;  // IRS -> Bob, length Nr
  CVec h_ie;  // IRS -> Eve, length Nr
  CMat H_ai;  // Alice -> IRS, Nr x Na
  double g_ab = 0.0;
  double g_ae = 0.0;
  double g_ai = 0.0;
  double g_ib = 0.0;
  double g_ie = 0.0;
  double g_aib = 0.0;  // g_ai * g_ib
  double g_aie = 0.0;  // g_ai * g_ie

  Eigen::Index n_tx() const { return h_ab.size(); }
  Eigen::Index n_irs() const { return h_ib.size(); }
};

/// Normalized ULA response: entry k (1-based) is
/// exp(j 2 pi r (k - (n+1)/2) cos(theta)) / sqrt(n), r = d / lambda.
inline CVec steering_vector(double theta, Eigen::Index n, double spacing_ratio) {
  detail::require(std::isfinite(theta), ErrorCode::kInvalidInput, "steering angle must be finite");
  detail::require(n >= 1, ErrorCode::kInvalidInput, "steering vector needs n >= 1");
  detail::require(std::isfinite(spacing_ratio) && spacing_ratio > 0.0, ErrorCode::kInvalidInput,
                  "spacing ratio must be positive");
  const double center = 0.5 * static_cast<double>(n + 1);
  const double step = 2.0 * kPi * spacing_ratio * std::cos(theta);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  CVec h(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    h(k) = std::polar(scale, step * (static_cast<double>(k + 1) - center));
  }
  return h;
}

/// g0 * distance^-alpha.
inline double path_loss(double distance, double g0, double alpha) {
  detail::require(std::isfinite(distance) && distance > 0.0, ErrorCode::kInvalidInput,
                  "path-loss distance must be positive");
  return g0 * std::pow(distance, -alpha);
}

struct NodeGeometry {
  double d_ib = 0.0;
  double d_ie = 0.0;
  double theta_irs_to_alice = 0.0;  // IRS-side arrival angle of the Alice link
  double theta_irs_to_bob = 0.0;
  double theta_irs_to_eve = 0.0;
};

inline NodeGeometry node_geometry(const SystemConfig& c) {
  const double xi = c.d_ai * std::cos(c.theta_ai), yi = c.d_ai * std::sin(c.theta_ai);
  const double xb = c.d_ab * std::cos(c.theta_ab), yb = c.d_ab * std::sin(c.theta_ab);
  const double xe = c.d_ae * std::cos(c.theta_ae), ye = c.d_ae * std::sin(c.theta_ae);

  NodeGeometry g;
  g.d_ib = std::hypot(xb - xi, yb - yi);
  g.d_ie = std::hypot(xe - xi, ye - yi);
  const double scale = std::max({c.d_ai, c.d_ab, c.d_ae});
  detail::require(g.d_ib > 1e-9 * scale, ErrorCode::kDegenerateGeometry,
                  "Bob coincides with the IRS");
  detail::require(g.d_ie > 1e-9 * scale, ErrorCode::kDegenerateGeometry,
                  "Eve coincides with the IRS");
  g.theta_irs_to_alice = std::atan2(-yi, -xi);
  g.theta_irs_to_bob = std::atan2(yb - yi, xb - xi);
  g.theta_irs_to_eve = std::atan2(ye - yi, xe - xi);
  return g;
}

inline ChannelSet build_channels(const SystemConfig& c) {
  validate(c);
  const NodeGeometry geo = node_geometry(c);
  const Eigen::Index na = c.n_tx_antennas;
  const Eigen::Index nr = c.n_irs_elements;

  ChannelSet ch;
  ch.h_ab = steering_vector(c.theta_ab, na, c.spacing_ratio);
  ch.h_ae = steering_vector(c.theta_ae, na, c.spacing_ratio);
  if (nr > 0) {
    ch.h_ib = steering_vector(geo.theta_irs_to_bob, nr, c.spacing_ratio);
    ch.h_ie = steering_vector(geo.theta_irs_to_eve, nr, c.spacing_ratio);
    ch.H_ai = steering_vector(geo.theta_irs_to_alice, nr, c.spacing_ratio) *
              steering_vector(c.theta_ai, na, c.spacing_ratio).adjoint();
  } else {
    ch.h_ib = CVec(0);
    ch.h_ie = CVec(0);
    ch.H_ai = CMat(0, na);
  }
  const double g0 = c.path_loss_g0, alpha = c.path_loss_exponent;
  ch.g_ab = path_loss(c.d_ab, g0, alpha);
  ch.g_ae = path_loss(c.d_ae, g0, alpha);
  ch.g_ai = path_loss(c.d_ai, g0, alpha);
  ch.g_ib = path_loss(geo.d_ib, g0, alpha);
  ch.g_ie = path_loss(geo.d_ie, g0, alpha);
  ch.g_aib = ch.g_ai * ch.g_ib;
  ch.g_aie = ch.g_ai * ch.g_ie;
  return ch;
}

/// Same direct links with the IRS removed (Nr = 0, cascaded gains zero).
inline ChannelSet without_irs(const ChannelSet& ch) {
  ChannelSet out = ch;
  out.h_ib = CVec(0);
  out.h_ie = CVec(0);
  out.H_ai = CMat(0, ch.n_tx());
  out.g_aib = 0.0;
  out.g_aie = 0.0;
  return out;
}

inline void check_dimensions(const ChannelSet& ch) {
  const auto na = ch.n_tx(), nr = ch.n_irs();
  detail::require(na >= 1 && ch.h_ae.size() == na && ch.h_ie.size() == nr &&
                      ch.H_ai.rows() == nr && ch.H_ai.cols() == na,
                  ErrorCode::kInvalidInput, "inconsistent channel dimensions");
}

}  // namespace irsdm

#endif  // IRSDM_CHANNEL_MODEL_HPP_
