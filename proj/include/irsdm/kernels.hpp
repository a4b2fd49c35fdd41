// SPDX-License-Identifier: Apache-2.0
//
// Dense numerical kernels used by both optimizers:
//   - generalized Rayleigh-quotient maximizer (Cholesky-reduced Hermitian eig)
//   - generalized power iteration (GPI) for a product of two generalized
//     Rayleigh quotients, over dense or identity-plus-low-rank operands
//   - SVD nullspace projector
//   - Sherman-Morrison application of -(a a^H + lambda I)^{-1}
//   - real roots of a quartic via companion-matrix eigenvalues

#ifndef IRSDM_KERNELS_HPP_
#define IRSDM_KERNELS_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <vector>

#include <Eigen/Dense>

#include "irsdm/types.hpp"

namespace irsdm {

// ---------------------------------------------------------------------------
// Generalized Rayleigh quotient
// ---------------------------------------------------------------------------

inline double rayleigh_ratio(const CMat& num, const CMat& den, const CVec& w) {
  return (w.adjoint() * num * w).value().real() / (w.adjoint() * den * w).value().real();
}

/// Unit vector maximizing w^H num w / w^H den w (top eigenvector of
/// den^{-1} num). `den` must be Hermitian positive definite.
inline CVec max_generalized_rayleigh(const CMat& num, const CMat& den) {
  detail::require(num.rows() == num.cols() && den.rows() == den.cols() &&
                      num.rows() == den.rows() && num.rows() >= 1,
                  ErrorCode::kInvalidInput, "Rayleigh operands must be square and equal-sized");
  Eigen::LLT<CMat> llt(den);
  bool ok = llt.info() == Eigen::Success;
  if (ok) {
    const RVec diag = llt.matrixLLT().diagonal().real();
    ok = diag.minCoeff() > 1e-12 * diag.maxCoeff() && diag.minCoeff() > 0.0;
  }
  detail::require(ok, ErrorCode::kSingularMatrix, "Rayleigh denominator is not positive definite");

  const CMat x = llt.matrixL().solve(num);
  CMat reduced = llt.matrixL().solve(CMat(x.adjoint())).adjoint();
  reduced = 0.5 * (reduced + reduced.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMat> eig(reduced);
  const CVec top = eig.eigenvectors().col(reduced.cols() - 1);
  CVec w = llt.matrixU().solve(top);
  w /= w.norm();
  detail::fix_phase(w);
  return w;
}

// ---------------------------------------------------------------------------
// GPI operands
// ---------------------------------------------------------------------------

/// A dense Hermitian positive-definite matrix.
struct DenseHermitian {
  CMat m;

  Eigen::Index dim() const { return m.rows(); }
  double quad(const CVec& w) const { return (w.adjoint() * m * w).value().real(); }
  CMat dense() const { return m; }
};

/// shift * I + rows^H diag(weights) rows, with shift > 0 and weights >= 0.
/// Each row of `rows` is one rank-one term.
struct ShiftedLowRank {
  double shift = 1.0;
  CMat rows;
  RVec weights;

  Eigen::Index dim() const { return rows.cols(); }
  double quad(const CVec& w) const {
    return shift * w.squaredNorm() + weights.dot((rows * w).cwiseAbs2());
  }
  CMat dense() const {
    CMat out = rows.adjoint() * weights.cast<cplx>().asDiagonal() * rows;
    out.diagonal().array() += shift;
    return out;
  }
};

template <class Op>
concept GpiOperand = requires(const Op& op, const CVec& w) {
  { op.dim() } -> std::convertible_to<Eigen::Index>;
  { op.quad(w) } -> std::convertible_to<double>;
  { op.dense() } -> std::convertible_to<CMat>;
};

/// (wa * a + wb * b) w
inline CVec apply_combination(const DenseHermitian& a, double wa, const DenseHermitian& b,
                              double wb, const CVec& w) {
  return wa * (a.m * w) + wb * (b.m * w);
}

inline CVec apply_combination(const ShiftedLowRank& a, double wa, const ShiftedLowRank& b,
                              double wb, const CVec& w) {
  CVec out = (wa * a.shift + wb * b.shift) * w;
  out.noalias() += a.rows.adjoint() * ((wa * a.weights).cast<cplx>().cwiseProduct(a.rows * w));
  out.noalias() += b.rows.adjoint() * ((wb * b.weights).cast<cplx>().cwiseProduct(b.rows * w));
  return out;
}

/// (wa * a + wb * b)^{-1} rhs
inline CVec solve_combination(const DenseHermitian& a, double wa, const DenseHermitian& b,
                              double wb, const CVec& rhs) {
  const CMat s = wa * a.m + wb * b.m;
  Eigen::LLT<CMat> llt(s);
  detail::require(llt.info() == Eigen::Success, ErrorCode::kSingularMatrix,
                  "GPI denominator combination is not positive definite");
  return llt.solve(rhs);
}

/// Woodbury solve for shift * I + R^H D R:
/// x = rhs / s - R^H D^{1/2} (s I + D^{1/2} R R^H D^{1/2})^{-1} D^{1/2} R rhs / s.
inline CVec solve_combination(const ShiftedLowRank& a, double wa, const ShiftedLowRank& b,
                              double wb, const CVec& rhs) {
  const double shift = wa * a.shift + wb * b.shift;
  detail::require(shift > 0.0, ErrorCode::kSingularMatrix, "GPI combination has no identity part");
  const Eigen::Index k = a.rows.rows() + b.rows.rows();
  CMat scaled(k, rhs.size());
  scaled.topRows(a.rows.rows()) = (wa * a.weights).cwiseSqrt().cast<cplx>().asDiagonal() * a.rows;
  scaled.bottomRows(b.rows.rows()) = (wb * b.weights).cwiseSqrt().cast<cplx>().asDiagonal() * b.rows;
  CMat core = scaled * scaled.adjoint();
  core.diagonal().array() += shift;
  const CVec inner = core.ldlt().solve(scaled * rhs);
  return (rhs - scaled.adjoint() * inner) / shift;
}

template <GpiOperand Op>
struct GpiOperands {
  Op e;
  Op f;
  Op m;
  Op n;
};

template <GpiOperand Op>
double gpi_objective(const GpiOperands<Op>& ops, const CVec& w) {
  return ops.e.quad(w) / ops.f.quad(w) * (ops.m.quad(w) / ops.n.quad(w));
}

struct GpiOptions {
  double tol = 1e-6;
  int max_iter = 100;
  // Also start from the top generalized eigenvectors of (E, F) and (M, N).
  bool eigen_starts = true;
};

struct GpiResult {
  CVec w;
  double objective = 0.0;
  double initial_objective = 0.0;
  int iterations = 0;  // summed over all starts
  bool converged = false;  // every start converged within max_iter
};

/// Top eigenvector of den^{-1} num, used as a GPI start.
inline CVec top_generalized_direction(const DenseHermitian& num, const DenseHermitian& den) {
  return max_generalized_rayleigh(num.m, den.m);
}

/// For identity-plus-low-rank operands the pencil only acts nontrivially on
/// the span of the rows, so the eigenproblem is solved in that subspace.
/// Returns an empty vector when the rows are empty.
inline CVec top_generalized_direction(const ShiftedLowRank& num, const ShiftedLowRank& den) {
  CMat span(num.rows.rows() + den.rows.rows(), num.dim());
  span << num.rows, den.rows;
  if (span.rows() == 0) return CVec(0);
  Eigen::BDCSVD<CMat> svd(span, Eigen::ComputeThinV);
  const RVec& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return CVec(0);
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > 1e-10 * sv(0)) ++r;
  const CMat basis = svd.matrixV().leftCols(r);
  auto restrict = [&](const ShiftedLowRank& op) {
    const CMat rb = op.rows * basis;
    CMat out = rb.adjoint() * op.weights.cast<cplx>().asDiagonal() * rb;
    out.diagonal().array() += op.shift;
    return out;
  };
  CVec w = basis * max_generalized_rayleigh(restrict(num), restrict(den));
  w /= w.norm();
  detail::fix_phase(w);
  return w;
}

namespace detail {

template <GpiOperand Op>
GpiResult gpi_single_start(const GpiOperands<Op>& ops, const CVec& w0, const GpiOptions& opt) {
  CVec w = w0;
  double f = gpi_objective(ops, w);
  detail::require(std::isfinite(f), ErrorCode::kNonFinite, "GPI objective is not finite");

  GpiResult best{w, f, f, 0, false};
  for (int it = 1; it <= opt.max_iter; ++it) {
    const double qe = ops.e.quad(w), qf = ops.f.quad(w), qm = ops.m.quad(w), qn = ops.n.quad(w);
    const CVec num = apply_combination(ops.e, 1.0 / qe, ops.m, 1.0 / qm, w);
    CVec next = solve_combination(ops.f, 1.0 / qf, ops.n, 1.0 / qn, num);
    const double norm = next.norm();
    detail::require(std::isfinite(norm) && norm > 0.0, ErrorCode::kNonFinite,
                    "GPI iterate is not finite");
    next /= norm;
    const double f_next = gpi_objective(ops, next);
    detail::require(std::isfinite(f_next), ErrorCode::kNonFinite, "GPI objective is not finite");
    best.iterations = it;
    if (f_next > best.objective) {
      best.w = next;
      best.objective = f_next;
    }
    const bool done = std::abs(f_next - f) <= opt.tol * std::abs(f);
    w = std::move(next);
    f = f_next;
    if (done) {
      best.converged = true;
      break;
    }
  }
  return best;
}

}  // namespace detail

/// Maximizes (w^H E w / w^H F w) (w^H M w / w^H N w) over unit w with the
/// fixed-point update
///   w <- normalize( (F/f + N/n)^{-1} (E/e + M/m) w ),
/// where e = w^H E w etc. Each start stops once the relative objective change
/// is <= tol. The objective is not unimodal, so besides w0 the iteration is
/// also run from the top eigenvectors of the two quotient pencils. Returns the
/// best iterate seen over all starts, so the result never scores below w0.
template <GpiOperand Op>
GpiResult gpi_product_rayleigh(const GpiOperands<Op>& ops, const CVec& w0,
                               const GpiOptions& opt = {}) {
  detail::require(w0.size() == ops.e.dim() && ops.f.dim() == ops.e.dim() &&
                      ops.m.dim() == ops.e.dim() && ops.n.dim() == ops.e.dim(),
                  ErrorCode::kInvalidInput, "GPI operand dimensions disagree");
  const double w0_norm = w0.norm();
  detail::require(w0_norm > 0.0 && std::isfinite(w0_norm), ErrorCode::kInvalidInput,
                  "GPI start vector must be nonzero");

  GpiResult best = detail::gpi_single_start(ops, CVec(w0 / w0_norm), opt);
  if (opt.eigen_starts) {
    for (const CVec& start : {top_generalized_direction(ops.e, ops.f),
                              top_generalized_direction(ops.m, ops.n)}) {
      if (start.size() == 0) continue;
      const GpiResult r = detail::gpi_single_start(ops, start, opt);
      best.iterations += r.iterations;
      best.converged = best.converged && r.converged;
      if (r.objective > best.objective) {
        best.w = r.w;
        best.objective = r.objective;
      }
    }
  }
  detail::fix_phase(best.w);
  return best;
}

// ---------------------------------------------------------------------------
// Projectors and resolvents
// ---------------------------------------------------------------------------

/// I - G^H (G G^H)^+ G. The pseudo-inverse drops eigenvalues of G G^H below
/// 1e-12 times the largest, i.e. singular values of G below 1e-6 sigma_max.
inline CMat nullspace_projector(const CMat& g) {
  const Eigen::Index n = g.cols();
  detail::require(n >= 1, ErrorCode::kInvalidInput, "projector needs at least one column");
  CMat t = CMat::Identity(n, n);
  if (g.rows() == 0) return t;
  Eigen::BDCSVD<CMat> svd(g, Eigen::ComputeThinV);
  const RVec& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return t;
  const double cutoff = 1e-12 * sv(0) * sv(0);
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) * sv(k) <= cutoff) break;
    const CVec v = svd.matrixV().col(k);
    t.noalias() -= v * v.adjoint();
  }
  return 0.5 * (t + t.adjoint());
}

/// Distance margin below which lambda is treated as a resolvent pole.
inline double resolvent_pole_margin(double a_norm2) { return 1e-6 * (1.0 + a_norm2); }

/// -(a a^H + lambda I)^{-1} b by Sherman-Morrison. Throws kSingularMatrix
/// when lambda is within resolvent_pole_margin of 0 or -a^H a.
inline CVec rank_one_resolvent_apply(const CVec& a, double lambda, const CVec& b) {
  detail::require(a.size() == b.size(), ErrorCode::kInvalidInput, "resolvent size mismatch");
  const double a1 = a.squaredNorm();
  const double margin = resolvent_pole_margin(a1);
  detail::require(std::abs(lambda) > margin && std::abs(lambda + a1) > margin,
                  ErrorCode::kSingularMatrix, "lambda at a resolvent pole");
  const cplx ab = a.dot(b);  // a^H b
  return -(b / lambda - a * (ab / (lambda * (lambda + a1))));
}

// ---------------------------------------------------------------------------
// Quartic
// ---------------------------------------------------------------------------

/// c[0] x^4 + c[1] x^3 + c[2] x^2 + c[3] x + c[4].
struct QuarticCoefficients {
  std::array<double, 5> c{};
};

inline double quartic_value(const QuarticCoefficients& q, double x) {
  return (((q.c[0] * x + q.c[1]) * x + q.c[2]) * x + q.c[3]) * x + q.c[4];
}

/// sum_k |c_k| |x|^(4-k); the natural magnitude against which a residual
/// is judged.
inline double quartic_scale(const QuarticCoefficients& q, double x) {
  const double ax = std::abs(x);
  return (((std::abs(q.c[0]) * ax + std::abs(q.c[1])) * ax + std::abs(q.c[2])) * ax +
          std::abs(q.c[3])) * ax + std::abs(q.c[4]);
}

inline double quartic_relative_residual(const QuarticCoefficients& q, double x) {
  const double scale = quartic_scale(q, x);
  return scale > 0.0 ? std::abs(quartic_value(q, x)) / scale : 0.0;
}

/// Real roots, ascending, with repeated roots reported once. Roots come from
/// the eigenvalues of the companion matrix of the monic polynomial rescaled
/// so its roots have unit magnitude scale, then get a short Newton polish.
/// Each returned root has relative residual <= 1e-8.
inline std::vector<double> quartic_real_roots(const QuarticCoefficients& q) {
  for (double v : q.c) {
    detail::require(std::isfinite(v), ErrorCode::kInvalidInput, "quartic coefficient not finite");
  }
  detail::require(q.c[0] != 0.0, ErrorCode::kInvalidInput, "quartic leading coefficient is zero");

  std::array<double, 5> p{};
  for (int k = 0; k < 5; ++k) p[k] = q.c[k] / q.c[0];
  double rho = 0.0;
  for (int k = 1; k <= 4; ++k) rho = std::max(rho, std::pow(std::abs(p[k]), 1.0 / k));
  if (rho == 0.0) return {0.0};

  Eigen::Matrix4d companion = Eigen::Matrix4d::Zero();
  for (int k = 1; k <= 4; ++k) companion(0, k - 1) = -p[k] / std::pow(rho, k);
  companion(1, 0) = companion(2, 1) = companion(3, 2) = 1.0;
  Eigen::EigenSolver<Eigen::Matrix4d> eig(companion, false);

  constexpr double kResidualBound = 1e-8;
  std::vector<double> roots;
  for (int k = 0; k < 4; ++k) {
    const std::complex<double> mu = eig.eigenvalues()(k);
    const double im = std::abs(mu.imag());
    // Clearly complex pairs are skipped; a pair split off a double root can
    // carry Im ~ sqrt(eps), so those are kept only if the residual confirms.
    if (im > 1e-5 * std::max(1.0, std::abs(mu))) continue;
    double x = rho * mu.real();
    for (int step = 0; step < 3; ++step) {
      const double f = quartic_value(q, x);
      const double df = ((4.0 * q.c[0] * x + 3.0 * q.c[1]) * x + 2.0 * q.c[2]) * x + q.c[3];
      if (df == 0.0) break;
      const double trial = x - f / df;
      if (!std::isfinite(trial) || std::abs(quartic_value(q, trial)) >= std::abs(f)) break;
      x = trial;
    }
    const bool strictly_real = im <= 1e-8 * std::max(1.0, std::abs(mu));
    const double resid = quartic_relative_residual(q, x);
    if (resid <= kResidualBound && (strictly_real || resid <= 1e-12)) roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end());
  std::vector<double> unique;
  for (double r : roots) {
    if (unique.empty() || std::abs(r - unique.back()) > 1e-7 * rho) unique.push_back(r);
  }
  return unique;
}

}  // namespace irsdm

#endif  // IRSDM_KERNELS_HPP_
