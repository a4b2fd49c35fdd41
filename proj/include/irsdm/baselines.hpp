// SPDX-License-Identifier: Apache-2.0
//
// Reference solutions: no IRS, and IRS with uniformly random phases. Both
// reuse the Max-SR-GPI beamformer sub-steps with theta frozen.

#ifndef IRSDM_BASELINES_HPP_
#define IRSDM_BASELINES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "irsdm/channel_model.hpp"
#include "irsdm/config.hpp"
#include "irsdm/max_sr_gpi.hpp"
#include "irsdm/rng.hpp"
#include "irsdm/secrecy_metrics.hpp"

namespace irsdm {

/// v_a / v_an alternation for a fixed theta, started from MRT and the
/// projected Eve direction.
inline BeamformingSolution optimize_beamformers(const ChannelSet& ch, const CVec& theta,
                                                const SystemConfig& cfg, Method method) {
  detail::check_theta(ch, theta);
  BeamformingSolution sol;
  sol.method = method;
  sol.theta = theta;
  sol.theta_relaxed = theta;

  BeamformerState st;
  st.v_a = mrt_direction(effective_channels(ch, theta, cfg).h_b1);
  st.v_an = initial_an_direction(ch);
  st.sr = secrecy_rate_unclamped(ch, st.v_a, st.v_an, theta, cfg);
  sol.sr_trace.push_back(st.sr);
  for (int p = 1; p <= cfg.max_outer_iterations; ++p) {
    const double previous = st.sr;
    update_beamformers(ch, theta, st, cfg);
    sol.sr_trace.push_back(st.sr);
    sol.outer_iterations = p;
    if (st.sr - previous <= cfg.epsilon) {
      sol.converged = true;
      break;
    }
  }
  sol.v_a = st.v_a;
  sol.v_an = st.v_an;
  sol.diagnostics.gpi_hit_max_iter = st.gpi_hit_max_iter;
  sol.counts.l1 = std::max(1, sol.outer_iterations);
  sol.counts.l3 = detail::mean_per_outer(st.an_gpi_iterations, sol.outer_iterations);
  detail::finalize(sol, ch, cfg);
  return sol;
}

/// Cascaded gains zeroed and the IRS removed; theta is empty.
inline BeamformingSolution no_irs_solution(const ChannelSet& ch, const SystemConfig& cfg) {
  check_dimensions(ch);
  const ChannelSet direct = without_irs(ch);
  return optimize_beamformers(direct, CVec(0), cfg, Method::kNoIrs);
}

struct RandomPhaseResult {
  std::vector<BeamformingSolution> draws;
  std::vector<double> draw_sr;  // clamped SR of every draw
  double mean_sr = 0.0;
  double stderr_sr = 0.0;  // sample standard deviation / sqrt(draws); 0 for one draw
};

/// cfg.random_phase_draws independent draws; draw k uses Philox stream
/// (stream << 16) + k under `seed`.
inline RandomPhaseResult random_phase_solution(const ChannelSet& ch, const SystemConfig& cfg,
                                               std::uint64_t seed, std::uint64_t stream = 0) {
  check_dimensions(ch);
  detail::require(cfg.random_phase_draws >= 1, ErrorCode::kInvalidConfig,
                  "random_phase_draws must be >= 1");
  RandomPhaseResult out;
  for (int k = 0; k < cfg.random_phase_draws; ++k) {
    PhiloxStream rng(seed, (stream << 16) + static_cast<std::uint64_t>(k));
    BeamformingSolution sol =
        optimize_beamformers(ch, random_phases(rng, ch.n_irs()), cfg, Method::kRandomPhase);
    out.draw_sr.push_back(sol.sr);
    out.draws.push_back(std::move(sol));
  }
  const double n = static_cast<double>(out.draw_sr.size());
  double sum = 0.0;
  for (double s : out.draw_sr) sum += s;
  out.mean_sr = sum / n;
  if (out.draw_sr.size() > 1) {
    double ss = 0.0;
    for (double s : out.draw_sr) ss += (s - out.mean_sr) * (s - out.mean_sr);
    out.stderr_sr = std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

}  // namespace irsdm

#endif  // IRSDM_BASELINES_HPP_
