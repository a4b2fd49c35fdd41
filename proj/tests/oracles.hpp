// SPDX-License-Identifier: Apache-2.0
//
// Independent reference computations for the test suite. Everything here is
// written from the model definitions with loops, dense solvers and grids,
// without calling the library code it is compared against.

#ifndef IRSDM_TESTS_ORACLES_HPP_
#define IRSDM_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/Polynomials>

#include "irsdm/channel_model.hpp"
#include "irsdm/config.hpp"
#include "irsdm/rng.hpp"
#include "irsdm/types.hpp"

namespace oracle {

using irsdm::cplx;
using irsdm::CMat;
using irsdm::CVec;
using irsdm::kPi;

/// Random complex Gaussian vector with unit-variance entries.
inline CVec gaussian(irsdm::PhiloxStream& rng, Eigen::Index n) {
  CVec v(n);
  for (Eigen::Index k = 0; k < n; ++k) v(k) = rng.complex_normal();
  return v;
}

inline CMat gaussian(irsdm::PhiloxStream& rng, Eigen::Index r, Eigen::Index c) {
  CMat m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rng.complex_normal();
  return m;
}

/// Random Hermitian positive-definite matrix X X^H + floor I.
inline CMat random_hpd(irsdm::PhiloxStream& rng, Eigen::Index n, double floor = 0.1) {
  const CMat x = gaussian(rng, n, n);
  CMat a = x * x.adjoint();
  a.diagonal().array() += floor;
  return 0.5 * (a + a.adjoint());
}

/// Toy channel set with Gaussian links and a rank-one Alice -> IRS matrix.
/// Gains are chosen so SINRs sit around 1 with the noise levels of `toy_config`.
inline irsdm::ChannelSet random_channels(irsdm::PhiloxStream& rng, Eigen::Index na,
                                         Eigen::Index nr) {
  irsdm::ChannelSet ch;
  ch.h_ab = gaussian(rng, na);
  ch.h_ae = gaussian(rng, na);
  ch.h_ib = gaussian(rng, nr);
  ch.h_ie = gaussian(rng, nr);
  ch.H_ai = gaussian(rng, nr) * gaussian(rng, na).adjoint();
  ch.g_ab = 0.5 + rng.uniform();
  ch.g_ae = 0.5 + rng.uniform();
  ch.g_ai = 0.5 + rng.uniform();
  ch.g_ib = 0.5 + rng.uniform();
  ch.g_ie = 0.5 + rng.uniform();
  ch.g_aib = ch.g_ai * ch.g_ib;
  ch.g_aie = ch.g_ai * ch.g_ie;
  return ch;
}

inline irsdm::SystemConfig toy_config(int na, int nr) {
  irsdm::SystemConfig c;
  c.n_tx_antennas = na;
  c.n_irs_elements = nr;
  c.tx_power = 1.0;
  c.noise_bob = 1.0;
  c.noise_eve = 1.0;
  c.pa_cm = 0.8;
  c.pa_an = 0.2;
  return c;
}

/// Received-signal coefficient of beam `v` at a receiver, from the scalar sum
/// sqrt(g_d) sum_k conj(h_d[k]) v[k] + sqrt(g_c) sum_i conj(h_i[i]) theta[i] sum_k H[i,k] v[k].
inline cplx receive_coefficient(double g_d, const CVec& h_d, double g_c, const CVec& h_i,
                                const CVec& theta, const CMat& H, const CVec& v) {
  cplx direct = 0.0;
  for (Eigen::Index k = 0; k < v.size(); ++k) direct += std::conj(h_d(k)) * v(k);
  cplx cascade = 0.0;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    cplx at_element = 0.0;
    for (Eigen::Index k = 0; k < v.size(); ++k) at_element += H(i, k) * v(k);
    cascade += std::conj(h_i(i)) * theta(i) * at_element;
  }
  return std::sqrt(g_d) * direct + std::sqrt(g_c) * cascade;
}

struct SinrPair {
  double bob;
  double eve;
};

inline SinrPair sinrs(const irsdm::ChannelSet& ch, const CVec& va, const CVec& van,
                      const CVec& theta, const irsdm::SystemConfig& c) {
  const double p1 = c.pa_cm * c.tx_power, p2 = c.pa_an * c.tx_power;
  auto rx = [&](bool bob, const CVec& v) {
    return bob ? receive_coefficient(ch.g_ab, ch.h_ab, ch.g_aib, ch.h_ib, theta, ch.H_ai, v)
               : receive_coefficient(ch.g_ae, ch.h_ae, ch.g_aie, ch.h_ie, theta, ch.H_ai, v);
  };
  const double sb = p1 * std::norm(rx(true, va)), ib = p2 * std::norm(rx(true, van));
  const double se = p1 * std::norm(rx(false, va)), ie = p2 * std::norm(rx(false, van));
  return {sb / (ib + c.noise_bob), se / (ie + c.noise_eve)};
}

/// log2(1 + gb) - log2(1 + ge), unclamped.
inline double secrecy_rate(const irsdm::ChannelSet& ch, const CVec& va, const CVec& van,
                           const CVec& theta, const irsdm::SystemConfig& c) {
  const SinrPair s = oracle::sinrs(ch, va, van, theta, c);
  return std::log2(1.0 + s.bob) - std::log2(1.0 + s.eve);
}

/// Largest eigenvalue of B^{-1} A from a general (non-Hermitian) eigensolver.
inline double top_generalized_eigenvalue(const CMat& a, const CMat& b) {
  const CMat m = b.fullPivLu().solve(a);
  Eigen::ComplexEigenSolver<CMat> eig(m, false);
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) {
    best = std::max(best, eig.eigenvalues()(k).real());
  }
  return best;
}

/// Maximum of f over unit vectors of C^2, parameterized up to global phase as
/// [cos t, sin t e^{j p}] with t on [0, pi/2] and p on [0, 2 pi).
inline double sphere2_grid_max(const std::function<double(const CVec&)>& f, int nt = 100,
                               int np = 100) {
  double best = -std::numeric_limits<double>::infinity();
  CVec w(2);
  for (int i = 0; i <= nt; ++i) {
    const double t = 0.5 * kPi * i / nt;
    for (int j = 0; j < np; ++j) {
      const double p = 2.0 * kPi * j / np;
      w(0) = std::cos(t);
      w(1) = std::sin(t) * std::polar(1.0, p);
      best = std::max(best, f(w));
    }
  }
  return best;
}

/// Real roots of a polynomial (coefficients highest degree first) from
/// Eigen's companion-matrix polynomial solver.
inline std::vector<double> polynomial_real_roots(const std::vector<double>& high_first,
                                                 double imag_tol) {
  Eigen::VectorXd low_first(high_first.size());
  for (std::size_t k = 0; k < high_first.size(); ++k) {
    low_first(static_cast<Eigen::Index>(k)) = high_first[high_first.size() - 1 - k];
  }
  Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(low_first);
  std::vector<double> out;
  for (Eigen::Index k = 0; k < solver.roots().size(); ++k) {
    const auto r = solver.roots()(k);
    if (std::abs(r.imag()) <= imag_tol * std::max(1.0, std::abs(r))) out.push_back(r.real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Orthonormal basis of the nullspace of g from a full SVD.
inline CMat nullspace_basis(const CMat& g, double rel_tol = 1e-10) {
  Eigen::JacobiSVD<CMat> svd(g, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) > rel_tol * s(0)) ++rank;
  }
  return svd.matrixV().rightCols(g.cols() - rank);
}

inline Eigen::Index numerical_rank(const CMat& m, double rel_tol = 1e-8) {
  Eigen::JacobiSVD<CMat> svd(m);
  const auto& s = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) > rel_tol * std::max(1e-300, s(0))) ++rank;
  }
  return rank;
}

/// Best unit-modulus phase vector of length 2 on a g x g grid.
inline CVec best_phase_pair(const std::function<double(const CVec&)>& f, int grid,
                            double* value = nullptr) {
  CVec best(2), theta(2);
  double best_v = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      theta(0) = std::polar(1.0, 2.0 * kPi * i / grid);
      theta(1) = std::polar(1.0, 2.0 * kPi * j / grid);
      const double v = f(theta);
      if (v > best_v) {
        best_v = v;
        best = theta;
      }
    }
  }
  if (value) *value = best_v;
  return best;
}

/// Composite receive rows (length Na) at Bob and Eve for a fixed theta,
/// built column by column from receive_coefficient.
struct CompositeRows {
  CVec bob;  // conjugated: received coefficient of v is bob^H v
  CVec eve;
};

inline CompositeRows composite_rows(const irsdm::ChannelSet& ch, const CVec& theta) {
  const Eigen::Index na = ch.h_ab.size();
  CompositeRows r{CVec(na), CVec(na)};
  for (Eigen::Index k = 0; k < na; ++k) {
    const CVec e = CVec::Unit(na, k);
    r.bob(k) = std::conj(receive_coefficient(ch.g_ab, ch.h_ab, ch.g_aib, ch.h_ib, theta, ch.H_ai, e));
    r.eve(k) = std::conj(receive_coefficient(ch.g_ae, ch.h_ae, ch.g_aie, ch.h_ie, theta, ch.H_ai, e));
  }
  return r;
}

/// Largest root of det(A - l B) = 0 for 2 x 2 Hermitian A and PD B.
inline double top_generalized_eigenvalue_2x2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  const double qa = (b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0)).real();
  const double qb = -(a(0, 0) * b(1, 1) + a(1, 1) * b(0, 0) - a(0, 1) * b(1, 0) - a(1, 0) * b(0, 1)).real();
  const double qc = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)).real();
  const double disc = std::max(0.0, qb * qb - 4.0 * qa * qc);
  return (-qb + std::sqrt(disc)) / (2.0 * qa);
}

/// max over unit v of (|x^H v|^2 + cb) / (|y^H v|^2 + ce). The optimum lies in
/// span{x, y}; when that span is a line the objective is monotone in |q^H v|^2,
/// so one of the two endpoints wins.
inline double best_ratio_rank_one(const CVec& x, double cb, const CVec& y, double ce) {
  const double nx = x.norm();
  if (nx == 0.0) return x.size() > 1 || y.norm() == 0.0 ? cb / ce : cb / (y.squaredNorm() + ce);
  const CVec q1 = x / nx;
  const CVec r = y - q1 * q1.dot(y);
  const double nr = r.norm();
  if (nr <= 1e-12 * std::max(1.0, y.norm())) {
    const double along = (nx * nx + cb) / (std::norm(q1.dot(y)) + ce);
    return x.size() > 1 ? std::max(along, cb / ce) : along;
  }
  const CVec q2 = r / nr;
  Eigen::Vector2cd xs(q1.dot(x), q2.dot(x)), ys(q1.dot(y), q2.dot(y));
  const Eigen::Matrix2cd a = xs * xs.adjoint() + cb * Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd b = ys * ys.adjoint() + ce * Eigen::Matrix2cd::Identity();
  return top_generalized_eigenvalue_2x2(a, b);
}

/// Secrecy rate (unclamped) with the best CM beamformer for fixed theta and v_an.
inline double sr_best_va(const CompositeRows& rows,
                         const CVec& van, const irsdm::SystemConfig& c) {
  const double p1 = c.pa_cm * c.tx_power, p2 = c.pa_an * c.tx_power;
  const double cb = p2 * std::norm(rows.bob.dot(van)) + c.noise_bob;
  const double ce = p2 * std::norm(rows.eve.dot(van)) + c.noise_eve;
  const double ratio = best_ratio_rank_one(std::sqrt(p1) * rows.bob, cb, std::sqrt(p1) * rows.eve, ce);
  return std::log2(ratio * ce / cb);
}

}  // namespace oracle

#endif  // IRSDM_TESTS_ORACLES_HPP_
