// SPDX-License-Identifier: Apache-2.0
//
// Max-RP-ZFC: the AN beamformer is zero-forced to Bob's direct channel and
// to the Alice -> IRS channel and steered at Eve's direct channel; the CM
// beamformer is MRT projected orthogonal to Eve's direct channel; the IRS
// vector maximizes Bob's receive power under theta^H theta = Nr through a
// Lagrange multiplier found as a quartic root.

#ifndef IRSDM_MAX_RP_ZFC_HPP_
#define IRSDM_MAX_RP_ZFC_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "irsdm/channel_model.hpp"
#include "irsdm/config.hpp"
#include "irsdm/kernels.hpp"
#include "irsdm/max_sr_gpi.hpp"
#include "irsdm/rng.hpp"
#include "irsdm/secrecy_metrics.hpp"
#include "irsdm/types.hpp"

namespace irsdm {

/// G = [h_ab^H; H_ai], (Nr + 1) x Na.
inline CMat zf_constraint_matrix(const ChannelSet& ch) {
  CMat g(ch.n_irs() + 1, ch.n_tx());
  g.row(0) = ch.h_ab.adjoint();
  g.bottomRows(ch.n_irs()) = ch.H_ai;
  return g;
}

inline CVec solve_van_zf(const ChannelSet& ch) {
  check_dimensions(ch);
  const CVec x = nullspace_projector(zf_constraint_matrix(ch)) * ch.h_ae;
  const double n = x.norm();
  detail::require(n > 1e-8 * ch.h_ae.norm(), ErrorCode::kDegenerateGeometry,
                  "Eve's direct channel lies in the span of the zero-forcing constraints");
  CVec v = x / n;
  detail::fix_phase(v);
  return v;
}

/// Path-loss amplitudes of the direct and cascaded Bob links, scaled so the
/// larger is 1. Receive power at Bob depends on the two only through their
/// ratio.
struct ReceiveWeights {
  double direct = 1.0;
  double cascade = 1.0;
};

inline ReceiveWeights receive_weights(const ChannelSet& ch) {
  const double d = std::sqrt(ch.g_ab), c = std::sqrt(ch.g_aib);
  const double top = std::max(d, c);
  detail::require(top > 0.0, ErrorCode::kDegenerateGeometry, "Bob receives through no path");
  return {d / top, c / top};
}

/// Bob's composite CM row, weighted by relative path-loss amplitude.
inline CRow composite_bob_row(const ChannelSet& ch, const CVec& theta) {
  const ReceiveWeights w = receive_weights(ch);
  return w.direct * ch.h_ab.adjoint() + w.cascade * cascaded_row(ch.h_ib, theta, ch.H_ai);
}

/// Projector I - h h^H / (h^H h) onto the complement of Eve's direct channel.
inline CMat eve_projector(const ChannelSet& ch) {
  const Eigen::Index na = ch.n_tx();
  const double h2 = ch.h_ae.squaredNorm();
  CMat p = CMat::Identity(na, na);
  if (h2 > 0.0) p -= ch.h_ae * ch.h_ae.adjoint() / h2;
  return p;
}

inline CVec solve_va_zf(const ChannelSet& ch, const CVec& theta) {
  detail::check_theta(ch, theta);
  const CVec composite = composite_bob_row(ch, theta).adjoint();
  const CVec x = eve_projector(ch) * composite;
  const double n = x.norm();
  detail::require(n > 1e-9 * composite.norm() && n > 0.0, ErrorCode::kDegenerateGeometry,
                  "Bob's composite channel is parallel to Eve's direct channel");
  CVec v = x / n;
  detail::fix_phase(v);
  return v;
}

/// a, b, C of  max theta^H a a^H theta + 2 Re(theta^H b) + C,
/// plus the scalar invariants of the multiplier quartic.
struct LagrangeOperands {
  CVec a;
  CVec b;
  double c = 0.0;
  double a1 = 0.0;  // a^H a
  double b1 = 0.0;  // b^H b
  double c1 = 0.0;  // b^H b a^H a
  double d1 = 0.0;  // b^H a a^H a a^H b
  double e1 = 0.0;  // b^H a a^H b
};

inline void fill_scalars(LagrangeOperands& op) {
  op.a1 = op.a.squaredNorm();
  op.b1 = op.b.squaredNorm();
  op.c1 = op.b1 * op.a1;
  op.e1 = std::norm(op.a.dot(op.b));
  op.d1 = op.a1 * op.e1;
}

/// Receive-power quadratic in theta for a fixed unit direction u_a.
inline LagrangeOperands lagrange_operands(const ChannelSet& ch, const CVec& u_a) {
  const ReceiveWeights w = receive_weights(ch);
  const CVec pu = eve_projector(ch) * u_a;
  const CVec at_irs = ch.H_ai * pu;
  LagrangeOperands op;
  op.a = w.cascade * at_irs.conjugate().cwiseProduct(ch.h_ib);
  const cplx direct = w.direct * ch.h_ab.dot(pu);
  op.b = op.a * direct;
  op.c = std::norm(direct);
  fill_scalars(op);
  return op;
}

/// Coefficients of ||(a a^H + l I)^{-1} b||^2 = nr multiplied through by
/// l^2 (l + a1)^2.
inline QuarticCoefficients lagrange_quartic(int nr, double a1, double b1, double d1, double e1) {
  const double n = nr;
  return {{n, 2.0 * n * a1, n * a1 * a1 - b1, 2.0 * e1 - 2.0 * a1 * b1,
           2.0 * a1 * e1 - a1 * a1 * b1 - d1}};
}

inline double quadratic_objective(const LagrangeOperands& op, const CVec& theta) {
  return std::norm(op.a.dot(theta)) + 2.0 * theta.dot(op.b).real() + op.c;
}

struct LagrangeSolution {
  CVec theta;  // theta^H theta = Nr
  double objective = 0.0;
  double lambda = 0.0;             // selected multiplier, in unscaled units
  std::vector<double> candidates;  // real quartic roots, in unscaled units
  double quartic_residual = 0.0;   // worst relative residual among candidates
  double norm_residual = 0.0;      // |theta^H theta - Nr| / Nr of the selection
  bool from_eigenvector = false;
  bool fallback = false;
};

/// Maximizes theta^H a a^H theta + 2 Re(theta^H b) + C over theta^H theta = nr.
/// Candidates: theta(l) = -(a a^H + l I)^{-1} b for every real quartic root l
/// away from the resolvent poles and meeting the norm constraint to 1e-6,
/// plus the top-eigenvector point sqrt(nr) a / ||a|| phase-aligned with b
/// (the solution when the multiplier sits on the pole -a^H a). If no
/// candidate exists (a = b = 0), `fallback` scaled to norm sqrt(nr) is
/// returned and flagged.
inline LagrangeSolution maximize_rank_one_quadratic(const LagrangeOperands& op, int nr,
                                                    const CVec& fallback) {
  detail::require(nr >= 1 && op.a.size() == nr && op.b.size() == nr, ErrorCode::kInvalidInput,
                  "quadratic operands must have length nr >= 1");
  const double root_nr = std::sqrt(static_cast<double>(nr));
  LagrangeSolution best;
  best.objective = -std::numeric_limits<double>::infinity();

  // Rescale so max(a1, sqrt(b1 / nr)) = 1; the multiplier scales by 1 / kappa2.
  const double kappa2 = std::max(op.a1, std::sqrt(op.b1 / nr));
  if (kappa2 > 0.0) {
    LagrangeOperands scaled;
    scaled.a = op.a / std::sqrt(kappa2);
    scaled.b = op.b / kappa2;
    fill_scalars(scaled);
    const QuarticCoefficients quartic =
        lagrange_quartic(nr, scaled.a1, scaled.b1, scaled.d1, scaled.e1);
    for (double root : quartic_real_roots(quartic)) {
      best.candidates.push_back(root * kappa2);
      best.quartic_residual =
          std::max(best.quartic_residual, quartic_relative_residual(quartic, root));
      if (std::abs(root) <= resolvent_pole_margin(scaled.a1) ||
          std::abs(root + scaled.a1) <= resolvent_pole_margin(scaled.a1)) {
        continue;
      }
      const CVec theta = rank_one_resolvent_apply(scaled.a, root, scaled.b);
      const double norm_residual = std::abs(theta.squaredNorm() - nr) / nr;
      if (norm_residual > 1e-6) continue;
      const double obj = quadratic_objective(op, theta);
      if (obj > best.objective) {
        best.theta = theta;
        best.objective = obj;
        best.lambda = root * kappa2;
        best.norm_residual = norm_residual;
      }
    }
  }
  if (op.a1 > 0.0) {
    const CVec dir = op.a / std::sqrt(op.a1);
    const cplx align = dir.dot(op.b);
    const cplx phase = std::abs(align) > 0.0 ? align / std::abs(align) : cplx(1.0);
    const CVec theta = root_nr * phase * dir;
    const double obj = quadratic_objective(op, theta);
    if (obj > best.objective) {
      best.theta = theta;
      best.objective = obj;
      best.lambda = -op.a1;
      best.norm_residual = std::abs(theta.squaredNorm() - nr) / nr;
      best.from_eigenvector = true;
    }
  }
  if (best.theta.size() == 0) {
    const double n = fallback.norm();
    best.theta = n > 0.0 ? CVec(fallback * (root_nr / n)) : CVec::Constant(nr, 1.0);
    best.objective = quadratic_objective(op, best.theta);
    best.norm_residual = std::abs(best.theta.squaredNorm() - nr) / nr;
    best.fallback = true;
  }
  return best;
}

inline LagrangeSolution solve_theta_lagrange(const ChannelSet& ch, const CVec& u_a,
                                             const CVec& fallback) {
  check_dimensions(ch);
  const int nr = static_cast<int>(ch.n_irs());
  detail::require(nr >= 1, ErrorCode::kInvalidInput, "the Lagrange phase step needs Nr >= 1");
  detail::require(u_a.size() == ch.n_tx() && u_a.norm() > 0.0, ErrorCode::kInvalidInput,
                  "u_a must be a nonzero vector of length Na");
  return maximize_rank_one_quadratic(lagrange_operands(ch, u_a / u_a.norm()), nr, fallback);
}

/// Alternates solve_va_zf and solve_theta_lagrange from uniform random
/// phases (Philox stream `stream` under cfg.seed). Each step is kept only if
/// the secrecy rate on the unit-modulus projection does not drop.
inline BeamformingSolution max_rp_zfc(const ChannelSet& ch, const SystemConfig& cfg,
                                      std::uint64_t stream = 0) {
  check_dimensions(ch);
  const Eigen::Index nr = ch.n_irs();
  BeamformingSolution sol;
  sol.method = Method::kMaxRpZfc;

  const CMat g = zf_constraint_matrix(ch);
  sol.v_an = solve_van_zf(ch);
  sol.diagnostics.zf_an_residual = (g * sol.v_an).norm();

  PhiloxStream rng(cfg.seed, stream << 16);
  sol.theta = random_phases(rng, nr);
  sol.theta_relaxed = sol.theta;
  sol.v_a = solve_va_zf(ch, sol.theta);
  auto track_va = [&](const CVec& v) {
    sol.diagnostics.zf_va_residual = std::max(sol.diagnostics.zf_va_residual,
                                              std::abs(ch.h_ae.dot(v)));
  };
  track_va(sol.v_a);
  double sr = secrecy_rate_unclamped(ch, sol.v_a, sol.v_an, sol.theta, cfg);
  sol.sr_trace.push_back(sr);

  for (int p = 1; p <= cfg.max_outer_iterations; ++p) {
    const double previous = sr;
    if (nr > 0) {
      const LagrangeSolution lag = solve_theta_lagrange(ch, sol.v_a, sol.theta);
      sol.diagnostics.quartic_residual =
          std::max(sol.diagnostics.quartic_residual, lag.quartic_residual);
      sol.diagnostics.theta_norm_residual =
          std::max(sol.diagnostics.theta_norm_residual, lag.norm_residual);
      sol.diagnostics.theta_fallbacks += lag.fallback ? 1 : 0;
      const CVec projected = project_unit_modulus(lag.theta, sol.theta);
      const double sr_theta = secrecy_rate_unclamped(ch, sol.v_a, sol.v_an, projected, cfg);
      if (sr_theta >= sr) {
        sol.theta = projected;
        sol.theta_relaxed = lag.theta;
        sr = sr_theta;
      }
    }
    const CVec va = solve_va_zf(ch, sol.theta);
    track_va(va);
    const double sr_va = secrecy_rate_unclamped(ch, va, sol.v_an, sol.theta, cfg);
    if (sr_va >= sr) {
      sol.v_a = va;
      sr = sr_va;
    }
    sol.sr_trace.push_back(sr);
    sol.outer_iterations = p;
    if (sr - previous <= cfg.epsilon) {
      sol.converged = true;
      break;
    }
  }
  sol.counts.l4 = std::max(1, sol.outer_iterations);
  if (nr > 0 && sol.theta_relaxed.squaredNorm() > 0.0) {
    sol.diagnostics.theta_norm_residual =
        std::max(sol.diagnostics.theta_norm_residual,
                 std::abs(sol.theta_relaxed.squaredNorm() - static_cast<double>(nr)) / nr);
  }
  detail::finalize(sol, ch, cfg);
  return sol;
}

}  // namespace irsdm

#endif  // IRSDM_MAX_RP_ZFC_HPP_
