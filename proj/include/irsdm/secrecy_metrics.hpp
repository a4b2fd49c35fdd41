// SPDX-License-Identifier: Apache-2.0
//
// SINRs, rates and secrecy rate of the IRS-aided DM link, plus the
// effective channel rows shared by both optimizers.

#ifndef IRSDM_SECRECY_METRICS_HPP_
#define IRSDM_SECRECY_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "irsdm/channel_model.hpp"
#include "irsdm/complexity.hpp"
#include "irsdm/config.hpp"
#include "irsdm/types.hpp"

namespace irsdm {

enum class Method { kMaxSrGpi, kMaxRpZfc, kNoIrs, kRandomPhase };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::kMaxSrGpi: return "max-sr-gpi";
    case Method::kMaxRpZfc: return "max-rp-zfc";
    case Method::kNoIrs: return "no-irs";
    case Method::kRandomPhase: return "random-phase";
  }
  return "unknown";
}

inline Method parse_method(std::string_view name) {
  for (Method m : {Method::kMaxSrGpi, Method::kMaxRpZfc, Method::kNoIrs, Method::kRandomPhase}) {
    if (name == to_string(m)) return m;
  }
  throw Error(ErrorCode::kInvalidInput, "unknown method '" + std::string(name) + "'");
}

/// Worst constraint residuals seen during a solve.
struct SolveDiagnostics {
  double quartic_residual = 0.0;     // scaled polynomial residual of accepted roots
  double theta_norm_residual = 0.0;  // |theta^H theta - Nr| / Nr of accepted candidates
  double zf_an_residual = 0.0;       // ||G v_AN||
  double zf_va_residual = 0.0;       // |h_ae^H v_a|
  int theta_fallbacks = 0;
  bool gpi_hit_max_iter = false;
};

struct BeamformingSolution {
  Method method = Method::kMaxSrGpi;
  CVec v_a;
  CVec v_an;
  CVec theta;          // realized reflection coefficients (unit modulus)
  CVec theta_relaxed;  // before unit-modulus projection
  double sr = 0.0;          // clamped, evaluated on theta
  double sr_relaxed = 0.0;  // clamped, evaluated on theta_relaxed
  std::vector<double> sr_trace;  // unclamped log2((1+gb)/(1+ge)) per outer iteration
  int outer_iterations = 0;
  bool converged = false;
  IterationCounts counts;
  SolveDiagnostics diagnostics;
};

struct EffectiveChannels {
  CRow h_b1;
  CRow h_b2;
  CRow h_e1;
  CRow h_e2;
};

/// h_irs^H diag(theta) H_ai as a row of length Na.
inline CRow cascaded_row(const CVec& h_irs, const CVec& theta, const CMat& H_ai) {
  return h_irs.conjugate().cwiseProduct(theta).transpose() * H_ai;
}

namespace detail {

inline void check_theta(const ChannelSet& ch, const CVec& theta) {
  check_dimensions(ch);
  require(theta.size() == ch.n_irs(), ErrorCode::kInvalidInput,
          "theta length must equal the IRS element count");
}

inline void check_beams(const ChannelSet& ch, const CVec& v_a, const CVec& v_an,
                        const CVec& theta) {
  check_theta(ch, theta);
  require(v_a.size() == ch.n_tx() && v_an.size() == ch.n_tx(), ErrorCode::kInvalidInput,
          "beamformer length must equal the antenna count");
}

}  // namespace detail

inline EffectiveChannels effective_channels(const ChannelSet& ch, const CVec& theta,
                                            const SystemConfig& cfg) {
  detail::check_theta(ch, theta);
  const CRow bob = std::sqrt(ch.g_ab) * ch.h_ab.adjoint() +
                   std::sqrt(ch.g_aib) * cascaded_row(ch.h_ib, theta, ch.H_ai);
  const CRow eve = std::sqrt(ch.g_ae) * ch.h_ae.adjoint() +
                   std::sqrt(ch.g_aie) * cascaded_row(ch.h_ie, theta, ch.H_ai);
  const double s1 = std::sqrt(cfg.pa_cm * cfg.tx_power);
  const double s2 = std::sqrt(cfg.pa_an * cfg.tx_power);
  return {s1 * bob, s2 * bob, s1 * eve, s2 * eve};
}

struct Sinr {
  double bob = 0.0;
  double eve = 0.0;
};

/// SINRs evaluated directly from the received-signal model.
inline Sinr sinrs(const ChannelSet& ch, const CVec& v_a, const CVec& v_an, const CVec& theta,
                  const SystemConfig& cfg) {
  detail::check_beams(ch, v_a, v_an, theta);
  const CRow bob = std::sqrt(ch.g_ab) * ch.h_ab.adjoint() +
                   std::sqrt(ch.g_aib) * cascaded_row(ch.h_ib, theta, ch.H_ai);
  const CRow eve = std::sqrt(ch.g_ae) * ch.h_ae.adjoint() +
                   std::sqrt(ch.g_aie) * cascaded_row(ch.h_ie, theta, ch.H_ai);
  const double p1 = cfg.pa_cm * cfg.tx_power, p2 = cfg.pa_an * cfg.tx_power;
  Sinr s;
  s.bob = p1 * std::norm((bob * v_a).value()) /
          (p2 * std::norm((bob * v_an).value()) + cfg.noise_bob);
  s.eve = p1 * std::norm((eve * v_a).value()) /
          (p2 * std::norm((eve * v_an).value()) + cfg.noise_eve);
  return s;
}

inline double sinr_bob(const ChannelSet& ch, const BeamformingSolution& s, const SystemConfig& cfg) {
  return sinrs(ch, s.v_a, s.v_an, s.theta, cfg).bob;
}

inline double sinr_eve(const ChannelSet& ch, const BeamformingSolution& s, const SystemConfig& cfg) {
  return sinrs(ch, s.v_a, s.v_an, s.theta, cfg).eve;
}

/// log2((1 + gamma_b) / (1 + gamma_e)), not clamped.
inline double secrecy_rate_unclamped(const Sinr& s) {
  return (std::log1p(s.bob) - std::log1p(s.eve)) / std::log(2.0);
}

inline double secrecy_rate(const Sinr& s) { return std::max(0.0, secrecy_rate_unclamped(s)); }

inline double secrecy_rate_unclamped(const ChannelSet& ch, const CVec& v_a, const CVec& v_an,
                                     const CVec& theta, const SystemConfig& cfg) {
  return secrecy_rate_unclamped(sinrs(ch, v_a, v_an, theta, cfg));
}

inline double secrecy_rate(const ChannelSet& ch, const CVec& v_a, const CVec& v_an,
                           const CVec& theta, const SystemConfig& cfg) {
  return std::max(0.0, secrecy_rate_unclamped(ch, v_a, v_an, theta, cfg));
}

inline double secrecy_rate(const ChannelSet& ch, const BeamformingSolution& s,
                           const SystemConfig& cfg) {
  return secrecy_rate(ch, s.v_a, s.v_an, s.theta, cfg);
}

}  // namespace irsdm

#endif  // IRSDM_SECRECY_METRICS_HPP_
