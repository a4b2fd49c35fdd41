// SPDX-License-Identifier: Apache-2.0
//
// Max-SR-GPI: alternating secrecy-rate maximization over the CM beamformer
// (closed-form generalized Rayleigh quotient), the AN beamformer (GPI) and
// the IRS phases (GPI on the lifted vector [1; theta]).

#ifndef IRSDM_MAX_SR_GPI_HPP_
#define IRSDM_MAX_SR_GPI_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "irsdm/channel_model.hpp"
#include "irsdm/config.hpp"
#include "irsdm/kernels.hpp"
#include "irsdm/rng.hpp"
#include "irsdm/secrecy_metrics.hpp"
#include "irsdm/types.hpp"

namespace irsdm {

inline GpiOptions gpi_options(const SystemConfig& cfg) { return {cfg.gpi_tol, cfg.gpi_max_iter}; }

inline CMat gram(const CRow& h) { return h.adjoint() * h; }

/// Unit-norm MRT along the conjugate of `row`; e_1 if the row vanishes.
inline CVec mrt_direction(const CRow& row) {
  CVec v = row.adjoint();
  const double n = v.norm();
  if (n == 0.0) {
    v.setZero();
    v(0) = 1.0;
    return v;
  }
  v /= n;
  detail::fix_phase(v);
  return v;
}

/// Normalized projection of h_ae onto the orthogonal complement of h_ab.
/// Falls back to the first standard basis vector with a nonzero projection.
inline CVec initial_an_direction(const ChannelSet& ch) {
  const Eigen::Index na = ch.n_tx();
  const double hab2 = ch.h_ab.squaredNorm();
  auto project = [&](const CVec& x) -> CVec {
    return hab2 > 0.0 ? CVec(x - ch.h_ab * (ch.h_ab.dot(x) / hab2)) : x;
  };
  CVec v = project(ch.h_ae);
  for (Eigen::Index k = 0; v.norm() <= 1e-9 * std::max(1.0, ch.h_ae.norm()) && k < na; ++k) {
    v = project(CVec::Unit(na, k));
  }
  if (v.norm() == 0.0) v = CVec::Unit(na, 0);
  v /= v.norm();
  detail::fix_phase(v);
  return v;
}

/// CM beamformer maximizing the secrecy rate for fixed theta and v_an.
inline CVec solve_va(const ChannelSet& ch, const CVec& theta, const CVec& v_an,
                     const SystemConfig& cfg) {
  const EffectiveChannels eff = effective_channels(ch, theta, cfg);
  const double a = std::norm((eff.h_b2 * v_an).value());
  const double b = std::norm((eff.h_e2 * v_an).value());
  CMat num = gram(eff.h_b1);
  num.diagonal().array() += a + cfg.noise_bob;
  CMat den = gram(eff.h_e1);
  den.diagonal().array() += b + cfg.noise_eve;
  return max_generalized_rayleigh(num, den);
}

/// GPI operands whose product objective equals (1 + gamma_b) / (1 + gamma_e)
/// as a function of v_an.
inline GpiOperands<DenseHermitian> an_operands(const ChannelSet& ch, const CVec& theta,
                                               const CVec& v_a, const SystemConfig& cfg) {
  const EffectiveChannels eff = effective_channels(ch, theta, cfg);
  const double c = std::norm((eff.h_b1 * v_a).value());
  const double d = std::norm((eff.h_e1 * v_a).value());
  const CMat gb = gram(eff.h_b2), ge = gram(eff.h_e2);
  const Eigen::Index na = ch.n_tx();
  const CMat id = CMat::Identity(na, na);
  return {{(c + cfg.noise_bob) * id + gb},
          {cfg.noise_bob * id + gb},
          {cfg.noise_eve * id + ge},
          {(d + cfg.noise_eve) * id + ge}};
}

inline GpiResult solve_van(const ChannelSet& ch, const CVec& theta, const CVec& v_a,
                           const CVec& v_an_warm, const SystemConfig& cfg) {
  return gpi_product_rayleigh(an_operands(ch, theta, v_a, cfg), v_an_warm, gpi_options(cfg));
}

/// Rows w, v, m, n (length Nr + 1) such that, with theta_bar = [1; theta],
/// h_B1 v_a = sqrt(Pt) w theta_bar, h_B2 v_an = sqrt(Pt) v theta_bar, and
/// likewise m, n on Eve's side.
struct LiftedRows {
  CRow w;
  CRow v;
  CRow m;
  CRow n;
};

inline LiftedRows lifted_rows(const ChannelSet& ch, const CVec& v_a, const CVec& v_an,
                              const SystemConfig& cfg) {
  const Eigen::Index nr = ch.n_irs();
  const CVec irs_a = ch.H_ai * v_a, irs_an = ch.H_ai * v_an;
  auto make = [&](double beta, double g_direct, const CVec& h_direct, double g_cascade,
                  const CVec& h_irs, const CVec& beam, const CVec& at_irs) {
    CRow row(nr + 1);
    row(0) = std::sqrt(beta * g_direct) * h_direct.dot(beam);
    row.tail(nr) = std::sqrt(beta * g_cascade) * h_irs.conjugate().cwiseProduct(at_irs).transpose();
    return row;
  };
  return {make(cfg.pa_cm, ch.g_ab, ch.h_ab, ch.g_aib, ch.h_ib, v_a, irs_a),
          make(cfg.pa_an, ch.g_ab, ch.h_ab, ch.g_aib, ch.h_ib, v_an, irs_an),
          make(cfg.pa_cm, ch.g_ae, ch.h_ae, ch.g_aie, ch.h_ie, v_a, irs_a),
          make(cfg.pa_an, ch.g_ae, ch.h_ae, ch.g_aie, ch.h_ie, v_an, irs_an)};
}

/// Q, K, T, R as identity-plus-low-rank operands. On the sphere
/// theta_bar^H theta_bar = Nr + 1 their product ratio is (1+gamma_b)/(1+gamma_e).
inline GpiOperands<ShiftedLowRank> theta_operands(const LiftedRows& r, const SystemConfig& cfg) {
  const Eigen::Index dim = r.w.size();
  const double sb = cfg.noise_bob / static_cast<double>(dim);
  const double se = cfg.noise_eve / static_cast<double>(dim);
  const double pt = cfg.tx_power;
  auto stack = [&](std::initializer_list<const CRow*> rows) {
    CMat out(static_cast<Eigen::Index>(rows.size()), dim);
    Eigen::Index k = 0;
    for (const CRow* row : rows) out.row(k++) = *row;
    return out;
  };
  return {{sb, stack({&r.v, &r.w}), RVec::Constant(2, pt)},
          {sb, stack({&r.v}), RVec::Constant(1, pt)},
          {se, stack({&r.n}), RVec::Constant(1, pt)},
          {se, stack({&r.n, &r.m}), RVec::Constant(2, pt)}};
}

struct ThetaStep {
  CVec theta;          // unit modulus; the incoming theta when rejected
  CVec theta_relaxed;  // theta_bar(2:) / theta_bar(1) before projection
  GpiResult gpi;
  double sr_in = 0.0;   // unclamped SR with the incoming theta
  double sr_out = 0.0;  // unclamped SR with the returned theta
  int polish_sweeps = 0;
  bool accepted = false;
  bool fallback = false;
};

/// Unit-modulus projection; entries with zero magnitude keep `reference`'s.
inline CVec project_unit_modulus(const CVec& x, const CVec& reference) {
  CVec out(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double mag = std::abs(x(k));
    out(k) = mag > 0.0 ? x(k) / mag : reference(k) / std::abs(reference(k));
  }
  return out;
}

/// Cyclic per-element phase ascent on (1+gamma_b)/(1+gamma_e) at fixed
/// beamformers. Each element's phase is set to the best of a 64-point sweep,
/// refined by golden section, and kept only if the ratio improves. Stops when
/// a full sweep gains less than `rel_tol` relative, or after `max_sweeps`.
/// Returns the number of sweeps run.
inline int polish_phases(const LiftedRows& r, const SystemConfig& cfg, CVec& theta,
                         double rel_tol = 1e-9, int max_sweeps = 20) {
  const Eigen::Index nr = theta.size();
  const CRow* rows[4] = {&r.w, &r.v, &r.m, &r.n};
  const double pt = cfg.tx_power;
  std::array<cplx, 4> s{};
  for (int i = 0; i < 4; ++i) s[i] = (*rows[i])(0) + (rows[i]->tail(nr) * theta).value();
  auto ratio = [&](const std::array<cplx, 4>& x) {
    const double w = pt * std::norm(x[0]), v = pt * std::norm(x[1]);
    const double m = pt * std::norm(x[2]), n = pt * std::norm(x[3]);
    return (w + v + cfg.noise_bob) / (v + cfg.noise_bob) * (n + cfg.noise_eve) /
           (n + m + cfg.noise_eve);
  };
  double f = ratio(s);
  int sweeps = 0;
  while (sweeps < max_sweeps) {
    ++sweeps;
    const double f_start = f;
    for (Eigen::Index k = 0; k < nr; ++k) {
      std::array<cplx, 4> rest{}, coef{};
      for (int i = 0; i < 4; ++i) {
        coef[i] = (*rows[i])(k + 1);
        rest[i] = s[i] - coef[i] * theta(k);
      }
      auto at = [&](double phi) {
        const cplx e = std::polar(1.0, phi);
        std::array<cplx, 4> x{};
        for (int i = 0; i < 4; ++i) x[i] = rest[i] + coef[i] * e;
        return ratio(x);
      };
      constexpr int kGrid = 64;
      const double step = 2.0 * kPi / kGrid;
      double best_phi = 0.0, best = -1.0;
      for (int g = 0; g < kGrid; ++g) {
        const double v = at(g * step);
        if (v > best) {
          best = v;
          best_phi = g * step;
        }
      }
      double lo = best_phi - step, hi = best_phi + step;
      const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
      double x1 = hi - golden * (hi - lo), x2 = lo + golden * (hi - lo);
      double f1 = at(x1), f2 = at(x2);
      for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
        if (f1 < f2) {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + golden * (hi - lo);
          f2 = at(x2);
        } else {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - golden * (hi - lo);
          f1 = at(x1);
        }
      }
      double chosen = best_phi, v = best;
      if (std::max(f1, f2) > best) {
        chosen = f1 > f2 ? x1 : x2;
        v = std::max(f1, f2);
      }
      if (v > f) {
        theta(k) = std::polar(1.0, chosen);
        for (int i = 0; i < 4; ++i) s[i] = rest[i] + coef[i] * theta(k);
        f = v;
      }
    }
    if (f - f_start <= rel_tol * f_start) break;
  }
  return sweeps;
}

inline ThetaStep solve_theta(const ChannelSet& ch, const CVec& v_a, const CVec& v_an,
                             const CVec& theta_in, const SystemConfig& cfg) {
  detail::check_beams(ch, v_a, v_an, theta_in);
  const Eigen::Index nr = ch.n_irs();
  ThetaStep step;
  step.theta = theta_in;
  step.theta_relaxed = theta_in;
  step.sr_in = step.sr_out = secrecy_rate_unclamped(ch, v_a, v_an, theta_in, cfg);
  if (nr == 0) return step;

  const LiftedRows rows = lifted_rows(ch, v_a, v_an, cfg);
  const auto ops = theta_operands(rows, cfg);
  CVec start(nr + 1);
  start(0) = 1.0;
  start.tail(nr) = theta_in;
  step.gpi = gpi_product_rayleigh(ops, start, gpi_options(cfg));

  // Candidates: the projected relaxation and the incoming theta, each polished.
  std::vector<CVec> candidates;
  const CVec lifted = step.gpi.w * std::sqrt(static_cast<double>(nr + 1));
  const double pinned = std::abs(lifted(0));
  if (pinned > 1e-12 * lifted.cwiseAbs().maxCoeff()) {
    step.theta_relaxed = lifted.tail(nr) / lifted(0);
    candidates.push_back(project_unit_modulus(step.theta_relaxed, theta_in));
  } else {
    step.fallback = true;
  }
  candidates.push_back(project_unit_modulus(theta_in, theta_in));
  for (CVec& c : candidates) {
    step.polish_sweeps += polish_phases(rows, cfg, c);
    const double sr = secrecy_rate_unclamped(ch, v_a, v_an, c, cfg);
    if (sr > step.sr_out || (!step.accepted && sr >= step.sr_in)) {
      step.theta = c;
      step.sr_out = sr;
      step.accepted = true;
    }
  }
  return step;
}

struct BeamformerState {
  CVec v_a;
  CVec v_an;
  double sr = 0.0;  // unclamped
  int an_gpi_iterations = 0;
  bool gpi_hit_max_iter = false;
};

/// One guarded v_a then v_an update with theta frozen. Each sub-step is
/// kept only if it does not lower the secrecy rate.
inline void update_beamformers(const ChannelSet& ch, const CVec& theta, BeamformerState& s,
                               const SystemConfig& cfg) {
  const CVec va = solve_va(ch, theta, s.v_an, cfg);
  const double sr_va = secrecy_rate_unclamped(ch, va, s.v_an, theta, cfg);
  if (sr_va >= s.sr) {
    s.v_a = va;
    s.sr = sr_va;
  }
  const GpiResult an = solve_van(ch, theta, s.v_a, s.v_an, cfg);
  s.an_gpi_iterations += an.iterations;
  s.gpi_hit_max_iter |= !an.converged;
  const double sr_an = secrecy_rate_unclamped(ch, s.v_a, an.w, theta, cfg);
  if (sr_an >= s.sr) {
    s.v_an = an.w;
    s.sr = sr_an;
  }
}

namespace detail {

inline void finalize(BeamformingSolution& sol, const ChannelSet& ch, const SystemConfig& cfg) {
  sol.sr = secrecy_rate(ch, sol.v_a, sol.v_an, sol.theta, cfg);
  sol.sr_relaxed = secrecy_rate(ch, sol.v_a, sol.v_an, sol.theta_relaxed, cfg);
}

inline double mean_per_outer(int total, int outer) {
  return outer > 0 ? std::max(1.0, static_cast<double>(total) / outer) : 1.0;
}

}  // namespace detail

/// Runs the v_a / v_an / theta alternation from one initial phase vector.
inline BeamformingSolution max_sr_gpi_from(const ChannelSet& ch, const CVec& theta0,
                                           const SystemConfig& cfg) {
  detail::check_theta(ch, theta0);
  BeamformingSolution sol;
  sol.method = Method::kMaxSrGpi;
  sol.theta = theta0;
  sol.theta_relaxed = theta0;

  BeamformerState st;
  st.v_a = mrt_direction(effective_channels(ch, theta0, cfg).h_b1);
  st.v_an = initial_an_direction(ch);
  st.sr = secrecy_rate_unclamped(ch, st.v_a, st.v_an, theta0, cfg);
  sol.sr_trace.push_back(st.sr);

  int theta_gpi_iterations = 0;
  for (int p = 1; p <= cfg.max_outer_iterations; ++p) {
    const double previous = st.sr;
    update_beamformers(ch, sol.theta, st, cfg);
    if (ch.n_irs() > 0) {
      ThetaStep step = solve_theta(ch, st.v_a, st.v_an, sol.theta, cfg);
      theta_gpi_iterations += step.gpi.iterations;
      sol.diagnostics.gpi_hit_max_iter |= !step.gpi.converged;
      sol.diagnostics.theta_fallbacks += step.fallback ? 1 : 0;
      if (step.accepted) {
        sol.theta = std::move(step.theta);
        sol.theta_relaxed = std::move(step.theta_relaxed);
        st.sr = step.sr_out;
      }
    }
    sol.sr_trace.push_back(st.sr);
    sol.outer_iterations = p;
    if (st.sr - previous <= cfg.epsilon) {
      sol.converged = true;
      break;
    }
  }
  sol.v_a = st.v_a;
  sol.v_an = st.v_an;
  sol.diagnostics.gpi_hit_max_iter |= st.gpi_hit_max_iter;
  sol.counts.l1 = std::max(1, sol.outer_iterations);
  sol.counts.l2 = detail::mean_per_outer(theta_gpi_iterations, sol.outer_iterations);
  sol.counts.l3 = detail::mean_per_outer(st.an_gpi_iterations, sol.outer_iterations);
  detail::finalize(sol, ch, cfg);
  return sol;
}

/// Multistart Max-SR-GPI. Start k draws uniform phases from Philox stream
/// (stream << 16) + k under cfg.seed; the best final secrecy rate wins.
inline BeamformingSolution max_sr_gpi(const ChannelSet& ch, const SystemConfig& cfg,
                                      std::uint64_t stream = 0) {
  check_dimensions(ch);
  std::optional<BeamformingSolution> best;
  std::optional<Error> first_error;
  for (int k = 0; k < cfg.multistart; ++k) {
    PhiloxStream rng(cfg.seed, (stream << 16) + static_cast<std::uint64_t>(k));
    try {
      BeamformingSolution sol = max_sr_gpi_from(ch, random_phases(rng, ch.n_irs()), cfg);
      if (!best || sol.sr_trace.back() > best->sr_trace.back()) best = std::move(sol);
    } catch (const Error& e) {
      if (!first_error) first_error = e;
    }
  }
  if (!best) throw *first_error;
  return *best;
}

}  // namespace irsdm

#endif  // IRSDM_MAX_SR_GPI_HPP_
