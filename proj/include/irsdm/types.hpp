// SPDX-License-Identifier: Apache-2.0
//
// Common numeric aliases and the error type shared by every irsdm header.

#ifndef IRSDM_TYPES_HPP_
#define IRSDM_TYPES_HPP_

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace irsdm {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CRow = Eigen::RowVectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

enum class ErrorCode {
  kInvalidInput,
  kInvalidConfig,
  kDegenerateGeometry,
  kSingularMatrix,
  kNonFinite,
  kIo,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "invalid_input";
    case ErrorCode::kInvalidConfig: return "invalid_config";
    case ErrorCode::kDegenerateGeometry: return "degenerate_geometry";
    case ErrorCode::kSingularMatrix: return "singular_matrix";
    case ErrorCode::kNonFinite: return "non_finite";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

namespace detail {

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

// Rotates v so its first entry with |v_k| > 1e-12 * max|v| is real-positive.
inline void fix_phase(CVec& v) {
  const double peak = v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
  if (peak == 0.0) return;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const double mag = std::abs(v(k));
    if (mag > 1e-12 * peak) {
      v *= std::conj(v(k)) / mag;
      v(k) = cplx(mag, 0.0);
      return;
    }
  }
}

}  // namespace detail
}  // namespace irsdm

#endif  // IRSDM_TYPES_HPP_
