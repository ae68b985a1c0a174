#pragma once

#include "wsrm/coordinator.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace wsrm {

enum class Preset { convergence, power_sweep, single_run };

Preset preset_from_string(const std::string& name);
std::string to_string(Preset preset);

/// One experiment request: a preset, the resolved system configuration, and
/// the sweep/seed lists.
struct ExperimentSpec {
  Preset preset = Preset::convergence;
  SystemConfig config;  // defaults are the benchmark configuration (N = 64)
  std::vector<double> power_sweep_dbw = {5, 10, 15, 20, 25, 30};
  std::vector<std::uint64_t> seeds = {1};
  std::string out_dir = "out";
  InitMode init = InitMode::ia;  // used by single_run
  bool dump_channels = true;     // single_run only
  RunOptions run_options;

  void validate() const;
};

struct RunSummary {
  std::uint64_t seed = 0;
  InitMode mode = InitMode::ia;
  bool converged = false;
  int iterations_used = 0;
  double final_wsr = 0.0;
  std::uint64_t inter_cell_messages = 0;
  int solver_failures = 0;
};

struct ExperimentResult {
  std::vector<std::string> files;
  std::vector<RunSummary> runs;
};

/// Convergence-curve comparison: per (seed, init mode) trajectory CSVs and a
/// summary CSV, plus the resolved configuration.
ExperimentResult run_convergence_experiment(const ExperimentSpec& spec);

/// Converged sum-rate vs transmit power, both init modes, unit weights,
/// averaged over seeds: power_dbw,mode,mean_sumrate,stderr.
ExperimentResult run_power_sweep(const ExperimentSpec& spec);

/// One seeded end-to-end run with full traces.
ExperimentResult run_single(const ExperimentSpec& spec);

ExperimentResult run_experiment(const ExperimentSpec& spec);

/// key = value configuration text; unknown keys are rejected.
void apply_config_file(ExperimentSpec& spec, const std::string& path);
void apply_config_line(ExperimentSpec& spec, const std::string& key, const std::string& value);

/// The fully resolved configuration echo written next to every result set.
std::string config_echo(const ExperimentSpec& spec);

}  // namespace wsrm
