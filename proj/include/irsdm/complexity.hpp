// SPDX-License-Identifier: Apache-2.0
//
// Analytic FLOP counts of the two optimizers, evaluated term by term as
// published. Counts are returned as double: at Nr = 1024 with a few dozen
// iterations the values exceed 2^53 only far beyond any tabulated range.

#ifndef IRSDM_COMPLEXITY_HPP_
#define IRSDM_COMPLEXITY_HPP_

#include <initializer_list>

#include "irsdm/types.hpp"

namespace irsdm {

/// Iteration counts that parameterize the FLOP formulas. In the Max-SR-GPI
/// formula l2 multiplies the (Nr+1)-dimensional GPI cost and l3 the
/// Na-dimensional one, so measured solves report the phase-vector GPI count
/// in l2 and the AN-beamformer GPI count in l3.
struct IterationCounts {
  double l1 = 1.0;  // Max-SR-GPI outer alternations
  double l2 = 1.0;  // GPI iterations per outer step, lifted phase vector
  double l3 = 1.0;  // GPI iterations per outer step, AN beamformer
  double l4 = 1.0;  // Max-RP-ZFC alternations
};

inline void check_counts_positive(std::initializer_list<double> counts) {
  for (double c : counts) {
    detail::require(c >= 1.0, ErrorCode::kInvalidInput, "iteration counts must be >= 1");
  }
}

inline double flops_max_sr_gpi(int na, int nr, const IterationCounts& k) {
  detail::require(na >= 1 && nr >= 0, ErrorCode::kInvalidInput, "bad dimensions");
  check_counts_positive({k.l1, k.l2, k.l3});
  const double a = na, r1 = static_cast<double>(nr) + 1.0;
  return k.l1 * (k.l2 * (3.0 * r1 * r1 * r1 + 7.0 * r1 * r1) +
                 k.l3 * (3.0 * a * a * a + 7.0 * a * a) + 2.0 * a * a * a + 4.0 * a * a);
}

inline double flops_max_rp_zfc(int na, int nr, const IterationCounts& k) {
  detail::require(na >= 1 && nr >= 0, ErrorCode::kInvalidInput, "bad dimensions");
  check_counts_positive({k.l4});
  const double a = na, r = nr;
  return k.l4 * (r * r * r + 7.0 * r * r + 2.0 * r * r * a + 14.0 * a * a + 6.0 * a * a * r -
                 4.0 * r * a - 6.0 * a - 2.0 * r) +
         2.0 * a * a + a;
}

}  // namespace irsdm

#endif  // IRSDM_COMPLEXITY_HPP_
