#include "wsrm/experiments.hpp"
#include "wsrm/io.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

namespace {

template <typename T>
void override_if_set(const CLI::Option* opt, wsrm::ExperimentSpec& spec, const std::string& key,
                     const T& value) {
  if (opt->count() > 0) wsrm::apply_config_line(spec, key, value);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed weighted sum-rate maximization for the multicell MU-MIMO OFDMA downlink"};

  std::string config_file, preset = "convergence", weights, seeds, power_dbw, power_sweep,
              init = "ia", out_dir;
  int cells = 0, users = 0, nt = 0, nr = 0, subcarriers = 0, max_iters = 0, ia_iters = 0,
      ia_restarts = 0;
  double tol = 0.0;
  bool no_channel_dump = false;

  app.add_option("--config", config_file, "key = value configuration file");
  auto* preset_opt =
      app.add_option("--preset", preset, "convergence | power_sweep | single_run");
  auto* cells_opt = app.add_option("--cells", cells, "number of cells M");
  auto* users_opt = app.add_option("--users", users, "users per cell K");
  auto* nt_opt = app.add_option("--nt", nt, "transmit antennas");
  auto* nr_opt = app.add_option("--nr", nr, "receive antennas");
  auto* sub_opt = app.add_option("--subcarriers", subcarriers, "OFDMA subcarriers N");
  auto* power_opt =
      app.add_option("--power-dbw", power_dbw, "per-cell power budget in dBW (comma list)");
  auto* weights_opt =
      app.add_option("--weights", weights, "user weights, cell-major comma list");
  auto* seeds_opt = app.add_option("--seeds,--seed", seeds, "RNG seeds (comma list)");
  auto* init_opt = app.add_option("--init", init, "single_run initialization: ia | random");
  auto* tol_opt = app.add_option("--tol", tol, "convergence tolerance on the WSR");
  auto* max_opt = app.add_option("--max-iters", max_iters, "WSRM iteration cap");
  auto* ia_iters_opt = app.add_option("--ia-iters", ia_iters, "IA sweeps per restart");
  auto* ia_restarts_opt = app.add_option("--ia-restarts", ia_restarts, "IA random restarts");
  auto* sweep_opt =
      app.add_option("--power-sweep", power_sweep, "sweep powers in dBW (comma list)");
  auto* out_opt = app.add_option("--out", out_dir, "output directory");
  app.add_flag("--no-channel-dump", no_channel_dump, "skip channels.txt on single runs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the error
    return code == 0 ? 0 : 1;
  }

  wsrm::ExperimentSpec spec;
  try {
    if (!config_file.empty()) wsrm::apply_config_file(spec, config_file);
    override_if_set(preset_opt, spec, "preset", preset);
    override_if_set(cells_opt, spec, "cells", std::to_string(cells));
    override_if_set(users_opt, spec, "users", std::to_string(users));
    override_if_set(nt_opt, spec, "nt", std::to_string(nt));
    override_if_set(nr_opt, spec, "nr", std::to_string(nr));
    override_if_set(sub_opt, spec, "subcarriers", std::to_string(subcarriers));
    override_if_set(power_opt, spec, "power_dbw", power_dbw);
    override_if_set(weights_opt, spec, "weights", weights);
    override_if_set(seeds_opt, spec, "seeds", seeds);
    override_if_set(init_opt, spec, "init", init);
    override_if_set(tol_opt, spec, "tol", wsrm::format_double(tol));
    override_if_set(max_opt, spec, "max_iters", std::to_string(max_iters));
    override_if_set(ia_iters_opt, spec, "ia_iters", std::to_string(ia_iters));
    override_if_set(ia_restarts_opt, spec, "ia_restarts", std::to_string(ia_restarts));
    override_if_set(sweep_opt, spec, "power_sweep", power_sweep);
    override_if_set(out_opt, spec, "out", out_dir);
    if (no_channel_dump) spec.dump_channels = false;
    spec.validate();
  } catch (const wsrm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }

  try {
    const wsrm::ExperimentResult result = wsrm::run_experiment(spec);
    for (const auto& file : result.files) std::cout << file << '\n';
  } catch (const wsrm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
