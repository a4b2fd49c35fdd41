// SPDX-License-Identifier: Apache-2.0
//
// Scenario configuration: the scalars of one IRS-aided DM link, plus the
// solver knobs. Powers are stored in watts; the text format accepts dBm.

#ifndef IRSDM_CONFIG_HPP_
#define IRSDM_CONFIG_HPP_

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>

#include "irsdm/types.hpp"

namespace irsdm {

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }

struct SystemConfig {
  int n_tx_antennas = 16;
  int n_irs_elements = 32;
  double tx_power = 1.0;  // 30 dBm
  double pa_cm = 0.9;
  double pa_an = 0.1;
  double noise_bob = 1e-7;  // -40 dBm
  double noise_eve = 1e-7;
  double spacing_ratio = 0.5;
  double d_ai = 20.0;
  double d_ab = 40.0;
  double d_ae = 50.0;
  double theta_ai = 29.0 * kPi / 60.0;
  double theta_ab = kPi / 2.0;
  double theta_ae = 23.0 * kPi / 36.0;
  double path_loss_exponent = 2.0;
  double path_loss_g0 = 1e-4;  // -40 dB at 1 m
  double epsilon = 1e-3;
  int max_outer_iterations = 50;
  int multistart = 10;
  int random_phase_draws = 50;
  double gpi_tol = 1e-6;
  int gpi_max_iter = 100;
  std::uint64_t seed = 0;
};

inline void validate(const SystemConfig& c) {
  using detail::require;
  constexpr auto kBad = ErrorCode::kInvalidConfig;
  require(c.n_tx_antennas >= 1, kBad, "n_tx_antennas must be >= 1");
  require(c.n_irs_elements >= 0, kBad, "n_irs_elements must be >= 0");
  require(c.pa_cm >= 0.0 && c.pa_cm <= 1.0 && c.pa_an >= 0.0 && c.pa_an <= 1.0, kBad,
          "pa_cm and pa_an must lie in [0, 1]");
  require(std::abs(c.pa_cm + c.pa_an - 1.0) <= 1e-12, kBad, "pa_cm + pa_an must equal 1");
  for (double v : {c.tx_power, c.noise_bob, c.noise_eve, c.d_ai, c.d_ab, c.d_ae, c.spacing_ratio,
                   c.path_loss_g0, c.epsilon, c.gpi_tol}) {
    require(std::isfinite(v) && v > 0.0, kBad,
            "powers, noise variances, distances, spacing, g0 and tolerances must be positive");
  }
  for (double v : {c.theta_ai, c.theta_ab, c.theta_ae}) {
    require(std::isfinite(v), kBad, "angles must be finite");
  }
  require(std::isfinite(c.path_loss_exponent) && c.path_loss_exponent >= 0.0, kBad,
          "path_loss_exponent must be >= 0");
  require(c.max_outer_iterations >= 1 && c.multistart >= 1 && c.random_phase_draws >= 1 &&
              c.gpi_max_iter >= 1,
          kBad, "iteration counts, multistart and draws must be >= 1");
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_double(std::string_view s, const std::string& key) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  require(ec == std::errc() && ptr == s.data() + s.size() && !s.empty(),
          ErrorCode::kInvalidConfig, "bad number for '" + key + "': '" + std::string(s) + "'");
  return out;
}

// "a" or "a/b".
inline double parse_ratio(std::string_view s, const std::string& key) {
  s = trim(s);
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return parse_double(s, key);
  const double den = parse_double(s.substr(slash + 1), key);
  require(den != 0.0, ErrorCode::kInvalidConfig, "zero denominator for '" + key + "'");
  return parse_double(s.substr(0, slash), key) / den;
}

inline std::uint64_t parse_uint(std::string_view s, const std::string& key) {
  s = trim(s);
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  require(ec == std::errc() && ptr == s.data() + s.size() && !s.empty(),
          ErrorCode::kInvalidConfig, "bad integer for '" + key + "': '" + std::string(s) + "'");
  return out;
}

inline int parse_int(std::string_view s, const std::string& key) {
  const auto v = parse_uint(s, key);
  require(v <= 1u << 30, ErrorCode::kInvalidConfig, "integer out of range for '" + key + "'");
  return static_cast<int>(v);
}

}  // namespace detail

/// Parses an angle in radians. Accepts plain radians ("1.5"), and rational
/// multiples of pi: "29/60 pi", "29/60*pi", "pi/2", "-pi", "0.5pi".
inline double parse_angle(std::string_view text, const std::string& key = "angle") {
  using detail::trim;
  std::string_view s = trim(text);
  const auto pos = s.find("pi");
  if (pos == std::string_view::npos) return detail::parse_double(s, key);

  std::string_view coef = trim(s.substr(0, pos));
  std::string_view tail = trim(s.substr(pos + 2));
  if (!coef.empty() && coef.back() == '*') coef = trim(coef.substr(0, coef.size() - 1));
  double value = kPi;
  if (coef == "-") {
    value = -kPi;
  } else if (!coef.empty()) {
    value *= detail::parse_ratio(coef, key);
  }
  if (!tail.empty()) {
    detail::require(tail.front() == '/', ErrorCode::kInvalidConfig,
                    "bad angle for '" + key + "': '" + std::string(s) + "'");
    const double den = detail::parse_double(tail.substr(1), key);
    detail::require(den != 0.0, ErrorCode::kInvalidConfig, "zero denominator for '" + key + "'");
    value /= den;
  }
  return value;
}

/// Applies one `key = value` assignment. Returns false on an unknown key.
inline bool apply_setting(SystemConfig& c, const std::string& key, std::string_view value) {
  using namespace detail;
  if (key == "n_tx_antennas") c.n_tx_antennas = parse_int(value, key);
  else if (key == "n_irs_elements") c.n_irs_elements = parse_int(value, key);
  else if (key == "tx_power_dbm") c.tx_power = dbm_to_watt(parse_double(value, key));
  else if (key == "tx_power_w") c.tx_power = parse_double(value, key);
  else if (key == "pa_cm") c.pa_cm = parse_ratio(value, key);
  else if (key == "pa_an") c.pa_an = parse_ratio(value, key);
  else if (key == "noise_bob_dbm") c.noise_bob = dbm_to_watt(parse_double(value, key));
  else if (key == "noise_bob_w") c.noise_bob = parse_double(value, key);
  else if (key == "noise_eve_dbm") c.noise_eve = dbm_to_watt(parse_double(value, key));
  else if (key == "noise_eve_w") c.noise_eve = parse_double(value, key);
  else if (key == "spacing_ratio") c.spacing_ratio = parse_ratio(value, key);
  else if (key == "d_ai") c.d_ai = parse_double(value, key);
  else if (key == "d_ab") c.d_ab = parse_double(value, key);
  else if (key == "d_ae") c.d_ae = parse_double(value, key);
  else if (key == "theta_ai") c.theta_ai = parse_angle(value, key);
  else if (key == "theta_ab") c.theta_ab = parse_angle(value, key);
  else if (key == "theta_ae") c.theta_ae = parse_angle(value, key);
  else if (key == "path_loss_exponent") c.path_loss_exponent = parse_double(value, key);
  else if (key == "path_loss_g0") c.path_loss_g0 = parse_double(value, key);
  else if (key == "path_loss_g0_db") c.path_loss_g0 = std::pow(10.0, parse_double(value, key) / 10.0);
  else if (key == "epsilon") c.epsilon = parse_double(value, key);
  else if (key == "max_outer_iterations") c.max_outer_iterations = parse_int(value, key);
  else if (key == "multistart") c.multistart = parse_int(value, key);
  else if (key == "random_phase_draws") c.random_phase_draws = parse_int(value, key);
  else if (key == "gpi_tol") c.gpi_tol = parse_double(value, key);
  else if (key == "gpi_max_iter") c.gpi_max_iter = parse_int(value, key);
  else if (key == "seed") c.seed = parse_uint(value, key);
  else return false;
  return true;
}

/// Parses the flat `key = value` format. '#' starts a comment. Keys not
/// present keep their defaults; when only one of pa_cm / pa_an is given the
/// other is set to its complement.
inline SystemConfig parse_config(std::string_view text) {
  SystemConfig c;
  std::map<std::string, int> seen;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find('\n', start), text.size());
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    detail::require(eq != std::string_view::npos, ErrorCode::kInvalidConfig,
                    "line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key(detail::trim(line.substr(0, eq)));
    detail::require(seen[key]++ == 0, ErrorCode::kInvalidConfig, "duplicate key '" + key + "'");
    detail::require(apply_setting(c, key, line.substr(eq + 1)), ErrorCode::kInvalidConfig,
                    "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  if (seen.count("pa_cm") && !seen.count("pa_an")) c.pa_an = 1.0 - c.pa_cm;
  if (seen.count("pa_an") && !seen.count("pa_cm")) c.pa_cm = 1.0 - c.pa_an;
  validate(c);
  return c;
}

inline SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  detail::require(static_cast<bool>(in), ErrorCode::kIo, "cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

/// Canonical text form with every field at full precision; used for hashing.
inline std::string canonical_string(const SystemConfig& c) {
  std::string out;
  char buf[64];
  auto put = [&](const char* key, double v) {
    std::snprintf(buf, sizeof buf, "%s=%.17g\n", key, v);
    out += buf;
  };
  put("n_tx_antennas", c.n_tx_antennas);
  put("n_irs_elements", c.n_irs_elements);
  put("tx_power_w", c.tx_power);
  put("pa_cm", c.pa_cm);
  put("pa_an", c.pa_an);
  put("noise_bob_w", c.noise_bob);
  put("noise_eve_w", c.noise_eve);
  put("spacing_ratio", c.spacing_ratio);
  put("d_ai", c.d_ai);
  put("d_ab", c.d_ab);
  put("d_ae", c.d_ae);
  put("theta_ai", c.theta_ai);
  put("theta_ab", c.theta_ab);
  put("theta_ae", c.theta_ae);
  put("path_loss_exponent", c.path_loss_exponent);
  put("path_loss_g0", c.path_loss_g0);
  put("epsilon", c.epsilon);
  put("max_outer_iterations", c.max_outer_iterations);
  put("multistart", c.multistart);
  put("random_phase_draws", c.random_phase_draws);
  put("gpi_tol", c.gpi_tol);
  put("gpi_max_iter", c.gpi_max_iter);
  out += "seed=" + std::to_string(c.seed) + "\n";
  return out;
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace irsdm

#endif  // IRSDM_CONFIG_HPP_
