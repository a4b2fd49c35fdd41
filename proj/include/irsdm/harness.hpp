// SPDX-License-Identifier: Apache-2.0
//
// Scenario runner, parameter sweeps and CSV / trace output.

#ifndef IRSDM_HARNESS_HPP_
#define IRSDM_HARNESS_HPP_

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "irsdm/baselines.hpp"
#include "irsdm/channel_model.hpp"
#include "irsdm/complexity.hpp"
#include "irsdm/config.hpp"
#include "irsdm/max_rp_zfc.hpp"
#include "irsdm/max_sr_gpi.hpp"
#include "irsdm/secrecy_metrics.hpp"

namespace irsdm {

inline constexpr const char* kVersion = "1.0.0";

/// Tolerances a record is audited against.
struct Tolerances {
  double unit_norm = 1e-9;
  double theta_modulus = 1e-9;
  double theta_norm = 1e-6;
  double zero_forcing = 1e-9;
  double quartic = 1e-8;
};

inline constexpr double kNotApplicable = std::numeric_limits<double>::quiet_NaN();

/// One row of a results table. Fields that do not apply to a method hold
/// NaN and are written as empty CSV cells.
struct SweepRecord {
  std::string method;
  std::string axis;  // "none" for single runs
  double axis_value = kNotApplicable;
  int n_irs = 0;
  std::uint64_t seed = 0;
  double sr = 0.0;
  double sr_relaxed = kNotApplicable;
  double sr_stderr = kNotApplicable;  // random-phase only
  int outer_iterations = 0;
  bool converged = false;
  double l1 = kNotApplicable;
  double l2 = kNotApplicable;
  double l3 = kNotApplicable;
  double l4 = kNotApplicable;
  double flops = kNotApplicable;
  double wall_seconds = kNotApplicable;
  double va_norm_residual = kNotApplicable;
  double van_norm_residual = kNotApplicable;
  double theta_modulus_residual = kNotApplicable;
  double theta_norm_residual = kNotApplicable;
  double zf_an_residual = kNotApplicable;
  double zf_va_residual = kNotApplicable;
  double quartic_residual = kNotApplicable;
  int theta_fallbacks = 0;
  bool gpi_hit_max_iter = false;
  bool flagged = false;
  std::string error;  // ErrorCode name, empty on success
};

inline constexpr const char* kCsvHeader =
    "method,axis,axis_value,n_irs,seed,sr,sr_relaxed,sr_stderr,outer_iterations,converged,"
    "l1,l2,l3,l4,flops,wall_seconds,va_norm_residual,van_norm_residual,"
    "theta_modulus_residual,theta_norm_residual,zf_an_residual,zf_va_residual,"
    "quartic_residual,theta_fallbacks,gpi_hit_max_iter,flagged,error";

struct ScenarioResult {
  BeamformingSolution solution;  // first draw for random-phase
  SweepRecord record;
};

namespace detail {

inline double worst(double current, double value) {
  return std::isnan(current) ? value : std::max(current, value);
}

inline double max_modulus_deviation(const CVec& theta) {
  double out = 0.0;
  for (Eigen::Index k = 0; k < theta.size(); ++k) {
    out = std::max(out, std::abs(std::abs(theta(k)) - 1.0));
  }
  return out;
}

inline void audit_solution(SweepRecord& r, const ChannelSet& ch, const BeamformingSolution& s) {
  r.va_norm_residual = worst(r.va_norm_residual, std::abs(s.v_a.norm() - 1.0));
  r.van_norm_residual = worst(r.van_norm_residual, std::abs(s.v_an.norm() - 1.0));
  if (s.theta.size() > 0) {
    r.theta_modulus_residual = worst(r.theta_modulus_residual, max_modulus_deviation(s.theta));
  }
  r.theta_fallbacks += s.diagnostics.theta_fallbacks;
  r.gpi_hit_max_iter = r.gpi_hit_max_iter || s.diagnostics.gpi_hit_max_iter;
  if (s.method == Method::kMaxRpZfc) {
    const double zf_an = (zf_constraint_matrix(ch) * s.v_an).norm();
    const double zf_va = std::abs(ch.h_ae.dot(s.v_a));
    r.zf_an_residual = worst(r.zf_an_residual, std::max(zf_an, s.diagnostics.zf_an_residual));
    r.zf_va_residual = worst(r.zf_va_residual, std::max(zf_va, s.diagnostics.zf_va_residual));
    r.quartic_residual = worst(r.quartic_residual, s.diagnostics.quartic_residual);
    r.theta_norm_residual = worst(r.theta_norm_residual, s.diagnostics.theta_norm_residual);
  }
}

inline bool exceeds(double value, double tol) { return !std::isnan(value) && !(value <= tol); }

}  // namespace detail

inline void flag_record(SweepRecord& r, const Tolerances& tol = {}) {
  r.flagged = !r.error.empty() || detail::exceeds(r.va_norm_residual, tol.unit_norm) ||
              detail::exceeds(r.van_norm_residual, tol.unit_norm) ||
              detail::exceeds(r.theta_modulus_residual, tol.theta_modulus) ||
              detail::exceeds(r.theta_norm_residual, tol.theta_norm) ||
              detail::exceeds(r.zf_an_residual, tol.zero_forcing) ||
              detail::exceeds(r.zf_va_residual, tol.zero_forcing) ||
              detail::exceeds(r.quartic_residual, tol.quartic) || !(r.sr >= 0.0);
}

/// Builds the channels for `cfg`, runs `method` and fills the record. cfg.seed
/// is replaced by `seed`; `stream` selects the Philox stream family. Library
/// errors become a flagged record with the error name.
inline ScenarioResult run_scenario(SystemConfig cfg, Method method, std::uint64_t seed,
                                   std::uint64_t stream = 0, bool timing = false) {
  cfg.seed = seed;
  ScenarioResult out;
  SweepRecord& r = out.record;
  r.method = to_string(method);
  r.axis = "none";
  r.n_irs = cfg.n_irs_elements;
  r.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  try {
    validate(cfg);
    const ChannelSet ch = build_channels(cfg);
    switch (method) {
      case Method::kMaxSrGpi: {
        out.solution = max_sr_gpi(ch, cfg, stream);
        const IterationCounts& k = out.solution.counts;
        r.l1 = k.l1;
        r.l2 = k.l2;
        r.l3 = k.l3;
        r.flops = flops_max_sr_gpi(cfg.n_tx_antennas, cfg.n_irs_elements, k);
        r.sr_relaxed = out.solution.sr_relaxed;
        detail::audit_solution(r, ch, out.solution);
        break;
      }
      case Method::kMaxRpZfc: {
        out.solution = max_rp_zfc(ch, cfg, stream);
        r.l4 = out.solution.counts.l4;
        r.flops = flops_max_rp_zfc(cfg.n_tx_antennas, cfg.n_irs_elements, out.solution.counts);
        r.sr_relaxed = out.solution.sr_relaxed;
        detail::audit_solution(r, ch, out.solution);
        break;
      }
      case Method::kNoIrs: {
        out.solution = no_irs_solution(ch, cfg);
        r.l1 = out.solution.counts.l1;
        r.l3 = out.solution.counts.l3;
        detail::audit_solution(r, without_irs(ch), out.solution);
        break;
      }
      case Method::kRandomPhase: {
        RandomPhaseResult rp = random_phase_solution(ch, cfg, seed, stream);
        for (const BeamformingSolution& s : rp.draws) detail::audit_solution(r, ch, s);
        out.solution = std::move(rp.draws.front());
        out.solution.sr = rp.mean_sr;
        r.sr_stderr = rp.stderr_sr;
        r.l1 = out.solution.counts.l1;
        r.l3 = out.solution.counts.l3;
        break;
      }
    }
    r.sr = out.solution.sr;
    r.outer_iterations = out.solution.outer_iterations;
    r.converged = out.solution.converged;
  } catch (const Error& e) {
    r.error = to_string(e.code());
  }
  if (timing) {
    r.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  flag_record(r);
  return out;
}

enum class SweepAxis { kNIrsElements, kTxPower, kPaCm, kDistances };

inline const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::kNIrsElements: return "n_irs_elements";
    case SweepAxis::kTxPower: return "tx_power";
    case SweepAxis::kPaCm: return "pa_cm";
    case SweepAxis::kDistances: return "distances";
  }
  return "unknown";
}

inline SweepAxis parse_axis(std::string_view name) {
  for (SweepAxis a : {SweepAxis::kNIrsElements, SweepAxis::kTxPower, SweepAxis::kPaCm,
                      SweepAxis::kDistances}) {
    if (name == to_string(a)) return a;
  }
  throw Error(ErrorCode::kInvalidInput, "unknown sweep axis '" + std::string(name) + "'");
}

/// Sets one axis value. tx_power is in dBm; pa_cm also sets pa_an to its
/// complement; distances scales d_ai, d_ab and d_ae together.
inline SystemConfig apply_axis(SystemConfig cfg, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::kNIrsElements:
      detail::require(value >= 0.0 && value == std::floor(value) && value <= (1 << 20),
                      ErrorCode::kInvalidInput, "n_irs_elements values must be integers >= 0");
      cfg.n_irs_elements = static_cast<int>(value);
      break;
    case SweepAxis::kTxPower: cfg.tx_power = dbm_to_watt(value); break;
    case SweepAxis::kPaCm:
      cfg.pa_cm = value;
      cfg.pa_an = 1.0 - value;
      break;
    case SweepAxis::kDistances:
      cfg.d_ai *= value;
      cfg.d_ab *= value;
      cfg.d_ae *= value;
      break;
  }
  return cfg;
}

struct SweepSpec {
  SweepAxis axis = SweepAxis::kNIrsElements;
  std::vector<double> values;
  std::vector<Method> methods;
  std::vector<std::uint64_t> seeds;
  bool timing = false;
};

inline void check_spec(const SweepSpec& s) {
  detail::require(!s.values.empty(), ErrorCode::kInvalidInput, "sweep needs at least one value");
  detail::require(!s.methods.empty(), ErrorCode::kInvalidInput, "sweep needs at least one method");
  detail::require(!s.seeds.empty(), ErrorCode::kInvalidInput, "sweep needs at least one seed");
}

/// Philox stream family of one sweep cell.
inline std::uint64_t cell_stream(std::size_t axis_index, Method method) {
  return (static_cast<std::uint64_t>(axis_index) << 8) | static_cast<std::uint64_t>(method);
}

/// Rows ordered by value, then method, then seed. A cell whose axis value
/// yields an invalid config is recorded with the error and flagged.
inline std::vector<SweepRecord> run_sweep(const SweepSpec& spec, const SystemConfig& base) {
  check_spec(spec);
  std::vector<SweepRecord> rows;
  rows.reserve(spec.values.size() * spec.methods.size() * spec.seeds.size());
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    for (Method m : spec.methods) {
      for (std::uint64_t seed : spec.seeds) {
        SweepRecord r;
        try {
          const SystemConfig cfg = apply_axis(base, spec.axis, spec.values[i]);
          r = run_scenario(cfg, m, seed, cell_stream(i, m), spec.timing).record;
        } catch (const Error& e) {
          r.method = to_string(m);
          r.seed = seed;
          r.n_irs = base.n_irs_elements;
          r.error = to_string(e.code());
          r.flagged = true;
        }
        r.axis = to_string(spec.axis);
        r.axis_value = spec.values[i];
        rows.push_back(std::move(r));
      }
    }
  }
  return rows;
}

/// Shortest decimal that round-trips; empty for NaN.
inline std::string format_double(double v) {
  if (std::isnan(v)) return {};
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string csv_row(const SweepRecord& r) {
  std::string out;
  auto field = [&](const std::string& s) {
    if (!out.empty()) out += ',';
    out += s;
  };
  field(r.method);
  field(r.axis);
  field(format_double(r.axis_value));
  field(std::to_string(r.n_irs));
  field(std::to_string(r.seed));
  field(format_double(r.sr));
  field(format_double(r.sr_relaxed));
  field(format_double(r.sr_stderr));
  field(std::to_string(r.outer_iterations));
  field(r.converged ? "1" : "0");
  field(format_double(r.l1));
  field(format_double(r.l2));
  field(format_double(r.l3));
  field(format_double(r.l4));
  field(format_double(r.flops));
  field(format_double(r.wall_seconds));
  field(format_double(r.va_norm_residual));
  field(format_double(r.van_norm_residual));
  field(format_double(r.theta_modulus_residual));
  field(format_double(r.theta_norm_residual));
  field(format_double(r.zf_an_residual));
  field(format_double(r.zf_va_residual));
  field(format_double(r.quartic_residual));
  field(std::to_string(r.theta_fallbacks));
  field(r.gpi_hit_max_iter ? "1" : "0");
  field(r.flagged ? "1" : "0");
  field(r.error);
  return out;
}

/// "# irsdm version=... config=<fnv1a64 hex> <extra>".
inline std::string manifest_line(const SystemConfig& cfg, const std::string& extra) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_string(cfg))));
  std::string line = std::string("# irsdm version=") + kVersion + " config=" + hash;
  if (!extra.empty()) line += " " + extra;
  return line;
}

inline std::string csv_text(const std::vector<SweepRecord>& table, const std::string& manifest) {
  std::string out = manifest + "\n" + kCsvHeader + "\n";
  for (const SweepRecord& r : table) out += csv_row(r) + "\n";
  return out;
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  detail::require(static_cast<bool>(f), ErrorCode::kIo, "cannot open '" + path + "' for writing");
  f << text;
  f.flush();
  detail::require(static_cast<bool>(f), ErrorCode::kIo, "write failed for '" + path + "'");
}

inline void emit_csv(const std::vector<SweepRecord>& table, const std::string& path,
                     const std::string& manifest) {
  write_file(path, csv_text(table, manifest));
}

/// Manifest comment, then one unclamped SR value per line.
inline void emit_trace(const BeamformingSolution& sol, const std::string& path,
                       const std::string& manifest) {
  std::string text = manifest + "\n";
  for (double v : sol.sr_trace) text += format_double(v) + "\n";
  write_file(path, text);
}

inline constexpr const char* kFlopsHeader =
    "n_tx,n_irs,l1,l2,l3,l4,flops_max_sr_gpi,flops_max_rp_zfc,ratio";

inline std::string flops_csv(int na, const std::vector<int>& nr_list, const IterationCounts& k) {
  std::string out = std::string("# irsdm version=") + kVersion + "\n" + kFlopsHeader + "\n";
  for (int nr : nr_list) {
    const double gpi = flops_max_sr_gpi(na, nr, k);
    const double zfc = flops_max_rp_zfc(na, nr, k);
    out += std::to_string(na) + "," + std::to_string(nr) + "," + format_double(k.l1) + "," +
           format_double(k.l2) + "," + format_double(k.l3) + "," + format_double(k.l4) + "," +
           format_double(gpi) + "," + format_double(zfc) + "," + format_double(gpi / zfc) + "\n";
  }
  return out;
}

}  // namespace irsdm

#endif  // IRSDM_HARNESS_HPP_
