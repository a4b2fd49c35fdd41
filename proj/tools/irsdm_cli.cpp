// SPDX-License-Identifier: Apache-2.0
//
// irsdm command line: run / sweep / flops.
// Log level comes from IRSDM_LOG_LEVEL (trace, debug, info, warn, error, off).

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "irsdm/harness.hpp"

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double to_double(const std::string& s) { return irsdm::detail::parse_double(s, "value"); }

std::uint64_t to_uint(const std::string& s) { return irsdm::detail::parse_uint(s, "seed"); }

// "0-19", "3", or "1,4,9"; ranges may appear inside comma lists.
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const std::string& part : split(text, ',')) {
    const auto dash = part.find('-');
    if (dash == std::string::npos) {
      out.push_back(to_uint(part));
      continue;
    }
    const std::uint64_t lo = to_uint(part.substr(0, dash)), hi = to_uint(part.substr(dash + 1));
    irsdm::detail::require(lo <= hi && hi - lo < 1000000, irsdm::ErrorCode::kInvalidInput,
                           "bad seed range '" + part + "'");
    for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
  }
  return out;
}

void set_log_level() {
  const char* env = std::getenv("IRSDM_LOG_LEVEL");
  spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
}

int cmd_run(const std::string& config, const std::string& method, std::uint64_t seed,
            const std::string& trace, bool timing) {
  const irsdm::SystemConfig cfg = irsdm::load_config(config);
  const irsdm::Method m = irsdm::parse_method(method);
  spdlog::info("run {} seed={} Na={} Nr={}", method, seed, cfg.n_tx_antennas, cfg.n_irs_elements);
  const irsdm::ScenarioResult res = irsdm::run_scenario(cfg, m, seed, 0, timing);
  const std::string manifest = irsdm::manifest_line(cfg, "seed=" + std::to_string(seed));
  if (!res.record.error.empty()) spdlog::error("solve failed: {}", res.record.error);
  if (res.record.flagged) spdlog::warn("record flagged");
  std::cout << irsdm::csv_text({res.record}, manifest);
  if (!trace.empty() && res.record.error.empty()) {
    irsdm::emit_trace(res.solution, trace, manifest);
    spdlog::info("trace written to {}", trace);
  }
  return res.record.error.empty() ? 0 : 2;
}

int cmd_sweep(const std::string& config, const std::string& axis, const std::string& values,
              const std::string& methods, const std::string& seeds, const std::string& out,
              bool timing) {
  const irsdm::SystemConfig cfg = irsdm::load_config(config);
  irsdm::SweepSpec spec;
  spec.axis = irsdm::parse_axis(axis);
  for (const std::string& v : split(values, ',')) spec.values.push_back(to_double(v));
  for (const std::string& m : split(methods, ',')) spec.methods.push_back(irsdm::parse_method(m));
  spec.seeds = parse_seeds(seeds);
  spec.timing = timing;
  spdlog::info("sweep {} x {} values x {} methods x {} seeds", axis, spec.values.size(),
               spec.methods.size(), spec.seeds.size());
  const auto rows = irsdm::run_sweep(spec, cfg);
  std::size_t flagged = 0;
  for (const auto& r : rows) {
    if (r.flagged) {
      ++flagged;
      spdlog::warn("flagged: {} {}={} seed={} {}", r.method, r.axis, r.axis_value, r.seed, r.error);
    }
  }
  const std::string manifest = irsdm::manifest_line(
      cfg, "axis=" + axis + " seeds=" + seeds + " timing=" + (timing ? "1" : "0"));
  irsdm::emit_csv(rows, out, manifest);
  spdlog::info("{} rows written to {} ({} flagged)", rows.size(), out, flagged);
  return 0;
}

int cmd_flops(int na, const std::string& nr_list, const std::string& counts, const std::string& out) {
  std::vector<int> nrs;
  for (const std::string& s : split(nr_list, ',')) {
    nrs.push_back(irsdm::detail::parse_int(s, "nr-list"));
  }
  const auto c = split(counts, ',');
  irsdm::detail::require(c.size() == 4, irsdm::ErrorCode::kInvalidInput,
                         "--counts needs four values L1,L2,L3,L4");
  const irsdm::IterationCounts k{to_double(c[0]), to_double(c[1]), to_double(c[2]),
                                 to_double(c[3])};
  irsdm::write_file(out, irsdm::flops_csv(na, nrs, k));
  spdlog::info("{} rows written to {}", nrs.size(), out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  set_log_level();
  CLI::App app{"IRS-aided directional modulation: secure beamforming solvers"};
  app.require_subcommand(1);

  std::string config, method, trace, axis, values, methods, seeds = "0-19", out;
  std::uint64_t seed = 0;
  bool timing = false;

  auto* run = app.add_subcommand("run", "solve one scenario and print its CSV record");
  run->add_option("--config", config, "scenario config file")->required()->check(CLI::ExistingFile);
  run->add_option("--method", method, "max-sr-gpi | max-rp-zfc | no-irs | random-phase")->required();
  run->add_option("--seed", seed, "RNG seed")->required();
  run->add_option("--trace", trace, "write the per-iteration SR trace here");
  run->add_flag("--timing", timing, "fill the wall_seconds column");

  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep and write a CSV table");
  sweep->add_option("--config", config, "base config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--axis", axis, "n_irs_elements | tx_power | pa_cm | distances")->required();
  sweep->add_option("--values", values, "comma-separated axis values")->required();
  sweep->add_option("--methods", methods, "comma-separated method names")->required();
  sweep->add_option("--seeds", seeds, "seed list or range, e.g. 0-19")->capture_default_str();
  sweep->add_option("--out", out, "output CSV path")->required();
  sweep->add_flag("--timing", timing, "fill the wall_seconds column");

  int na = 16;
  std::string nr_list, counts = "1,1,1,1";
  auto* flops = app.add_subcommand("flops", "tabulate the analytic FLOP counts");
  flops->add_option("--na", na, "transmit antennas")->capture_default_str();
  flops->add_option("--nr-list", nr_list, "comma-separated IRS sizes")->required();
  flops->add_option("--counts", counts, "L1,L2,L3,L4")->capture_default_str();
  flops->add_option("--out", out, "output CSV path")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(config, method, seed, trace, timing);
    if (*sweep) return cmd_sweep(config, axis, values, methods, seeds, out, timing);
    if (*flops) return cmd_flops(na, nr_list, counts, out);
  } catch (const irsdm::Error& e) {
    spdlog::error("{}: {}", irsdm::to_string(e.code()), e.what());
    return 1;
  }
  return 0;
}
