#include "wsrm/experiments.hpp"

#include "wsrm/io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

namespace wsrm {

namespace fs = std::filesystem;

Preset preset_from_string(const std::string& name) {
  if (name == "convergence") return Preset::convergence;
  if (name == "power_sweep") return Preset::power_sweep;
  if (name == "single_run" || name == "single") return Preset::single_run;
  throw ConfigError("unknown preset '" + name + "'");
}

std::string to_string(Preset preset) {
  switch (preset) {
    case Preset::convergence: return "convergence";
    case Preset::power_sweep: return "power_sweep";
    case Preset::single_run: return "single_run";
  }
  return "?";
}

void ExperimentSpec::validate() const {
  config.validate();
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (preset == Preset::power_sweep && power_sweep_dbw.empty())
    throw ConfigError("power sweep needs a nonempty power list");
  if (out_dir.empty()) throw ConfigError("output directory must be set");
}

namespace {

std::ofstream open_out(const std::string& dir, const std::string& name,
                       std::vector<std::string>& files) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir + ": " + ec.message());
  const std::string path = (fs::path(dir) / name).string();
  std::ofstream out(path, std::ios::binary);  // '\n' line endings everywhere
  if (!out) throw ConfigError("cannot open for writing: " + path);
  files.push_back(path);
  return out;
}

void write_trajectory_csv(std::ostream& out, const RunState& state) {
  out << "iteration,cell,wsr_cell,wsr_global,delta\n";
  for (size_t t = 0; t < state.wsr_trajectory.size(); ++t) {
    const TrajectoryPoint& point = state.wsr_trajectory[t];
    const std::string delta =
        t == 0 ? "" : format_double(point.wsr - state.wsr_trajectory[t - 1].wsr);
    for (size_t m = 0; m < point.cell_wsr.size(); ++m)
      out << point.iteration << ',' << m << ',' << format_double(point.cell_wsr[m]) << ','
          << format_double(point.wsr) << ',' << delta << '\n';
  }
}

void write_rate_report_csv(std::ostream& out, const RateReport& report,
                           const Assignment& assignment) {
  out << "record,m,k,n,value\n";
  for (int m = 0; m < report.num_cells; ++m)
    for (int n = 0; n < report.num_subcarriers; ++n)
      out << "link," << m << ',' << assignment.user_of(m, n) << ',' << n << ','
          << format_double(report.link(m, n)) << '\n';
  for (int m = 0; m < report.num_cells; ++m)
    out << "cell," << m << ",,," << format_double(report.cell_wsr[static_cast<size_t>(m)]) << '\n';
  out << "wsr,,,," << format_double(report.wsr) << '\n';
}

RunSummary summarize(std::uint64_t seed, const RunState& state) {
  return {seed,
          state.init_mode,
          state.converged,
          state.iterations_used,
          state.wsr_trajectory.empty() ? 0.0 : state.wsr_trajectory.back().wsr,
          state.total_messages(),
          state.solver_failures};
}

}  // namespace

std::string config_echo(const ExperimentSpec& spec) {
  std::ostringstream out;
  auto list = [](const auto& values) {
    std::string joined;
    for (size_t i = 0; i < values.size(); ++i) {
      if (i) joined += ',';
      if constexpr (std::is_floating_point_v<std::decay_t<decltype(values[i])>>)
        joined += format_double(values[i]);
      else
        joined += std::to_string(values[i]);
    }
    return joined;
  };
  out << "preset = " << to_string(spec.preset) << '\n';
  out << "cells = " << spec.config.num_cells << '\n';
  out << "users = " << spec.config.users_per_cell << '\n';
  out << "nt = " << spec.config.tx_antennas << '\n';
  out << "nr = " << spec.config.rx_antennas << '\n';
  out << "subcarriers = " << spec.config.num_subcarriers << '\n';
  out << "power_dbw = " << list(spec.config.power_budget_dbw) << '\n';
  out << "weights = " << list(spec.config.user_weights) << '\n';
  out << "weight_order = cell_major\n";
  out << "tol = " << format_double(spec.config.convergence_tol) << '\n';
  out << "ia_iters = " << spec.config.ia_iters << '\n';
  out << "ia_restarts = " << spec.config.ia_restarts << '\n';
  out << "max_iters = " << spec.config.wsrm_max_iters << '\n';
  out << "seeds = " << list(spec.seeds) << '\n';
  out << "power_sweep = " << list(spec.power_sweep_dbw) << '\n';
  out << "init = " << to_string(spec.init) << '\n';
  out << "out = " << spec.out_dir << '\n';
  return out.str();
}

ExperimentResult run_convergence_experiment(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentResult result;

  auto summary = open_out(spec.out_dir, "summary.csv", result.files);
  summary << "seed,mode,converged,iterations_used,final_wsr\n";

  for (std::uint64_t seed : spec.seeds) {
    SystemConfig config = spec.config;
    config.rng_seed = seed;
    const Assignment assignment = round_robin_assignment(config);
    const ChannelSet channels = generate_channels(config);
    for (InitMode mode : {InitMode::ia, InitMode::random}) {
      const RunState state = run(channels, config, assignment, mode, spec.run_options);
      auto trajectory = open_out(
          spec.out_dir, "trajectory_seed" + std::to_string(seed) + "_" + to_string(mode) + ".csv",
          result.files);
      write_trajectory_csv(trajectory, state);
      const RunSummary row = summarize(seed, state);
      summary << seed << ',' << to_string(mode) << ',' << (row.converged ? 1 : 0) << ','
              << row.iterations_used << ',' << format_double(row.final_wsr) << '\n';
      result.runs.push_back(row);
    }
  }

  auto echo = open_out(spec.out_dir, "config.txt", result.files);
  echo << config_echo(spec);
  return result;
}

ExperimentResult run_power_sweep(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentResult result;

  auto csv = open_out(spec.out_dir, "power_sweep.csv", result.files);
  csv << "power_dbw,mode,mean_sumrate,stderr\n";

  for (double power_dbw : spec.power_sweep_dbw) {
    for (InitMode mode : {InitMode::ia, InitMode::random}) {
      std::vector<double> rates;
      rates.reserve(spec.seeds.size());
      for (std::uint64_t seed : spec.seeds) {
        SystemConfig config = spec.config;
        config.rng_seed = seed;
        config.power_budget_dbw = {power_dbw};
        config.user_weights = {1.0};  // average sum-rate convention
        const Assignment assignment = round_robin_assignment(config);
        const ChannelSet channels = generate_channels(config);
        const RunState state = run(channels, config, assignment, mode, spec.run_options);
        rates.push_back(state.wsr_trajectory.back().wsr);
        RunSummary row = summarize(seed, state);
        result.runs.push_back(row);
      }
      const double mean =
          std::accumulate(rates.begin(), rates.end(), 0.0) / static_cast<double>(rates.size());
      double stderr_value = 0.0;
      if (rates.size() > 1) {
        double ss = 0.0;
        for (double r : rates) ss += (r - mean) * (r - mean);
        stderr_value = std::sqrt(ss / static_cast<double>(rates.size() - 1)) /
                       std::sqrt(static_cast<double>(rates.size()));
      }
      csv << format_double(power_dbw) << ',' << to_string(mode) << ',' << format_double(mean)
          << ',' << format_double(stderr_value) << '\n';
    }
  }

  auto echo = open_out(spec.out_dir, "config.txt", result.files);
  echo << config_echo(spec);
  return result;
}

ExperimentResult run_single(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentResult result;

  SystemConfig config = spec.config;
  config.rng_seed = spec.seeds.front();
  const Assignment assignment = round_robin_assignment(config);
  const ChannelSet channels = generate_channels(config);

  RunOptions opts = spec.run_options;
  opts.record_solver_trace = true;
  opts.record_ia_trace = true;
  const RunState state = run(channels, config, assignment, spec.init, opts);

  auto trajectory = open_out(spec.out_dir, "trajectory.csv", result.files);
  write_trajectory_csv(trajectory, state);

  auto ia_csv = open_out(spec.out_dir, "ia_leakage.csv", result.files);
  ia_csv << "restart,sweep,total_leakage,sum_capacity\n";
  if (state.ia)
    for (const IaTraceRow& row : state.ia->trace)
      ia_csv << row.restart << ',' << row.sweep << ',' << format_double(row.total_leakage) << ','
             << format_double(row.sum_capacity) << '\n';

  auto solver_csv = open_out(spec.out_dir, "solver_trace.csv", result.files);
  solver_csv << "cell,outer_iter,inner_iter,objective,step\n";
  for (const CellSolverTraceRow& row : state.solver_trace)
    solver_csv << row.cell << ',' << row.outer_iter << ',' << row.inner_iter << ','
               << format_double(row.objective) << ',' << format_double(row.step) << '\n';

  const RateReport report = weighted_sum_rate(channels, state.beams, config, assignment);
  auto rates_csv = open_out(spec.out_dir, "rate_report.csv", result.files);
  write_rate_report_csv(rates_csv, report, assignment);

  if (spec.dump_channels) {
    auto channels_txt = open_out(spec.out_dir, "channels.txt", result.files);
    dump_channels(channels, channels_txt);
  }

  auto echo = open_out(spec.out_dir, "config.txt", result.files);
  echo << config_echo(spec);
  result.runs.push_back(summarize(config.rng_seed, state));
  return result;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  switch (spec.preset) {
    case Preset::convergence: return run_convergence_experiment(spec);
    case Preset::power_sweep: return run_power_sweep(spec);
    case Preset::single_run: return run_single(spec);
  }
  throw ConfigError("unknown preset");
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& value, Parse parse) {
  std::vector<T> out;
  std::istringstream stream(value);
  std::string token;
  while (std::getline(stream, token, ',')) {
    token = trim(token);
    if (!token.empty()) out.push_back(parse(token));
  }
  if (out.empty()) throw ConfigError("empty list value '" + value + "'");
  return out;
}

double parse_real(const std::string& s) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw ConfigError("bad number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("bad number '" + s + "'");
  }
}

int parse_integer(const std::string& s) {
  try {
    size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size()) throw ConfigError("bad integer '" + s + "'");
    return static_cast<int>(v);
  } catch (const std::logic_error&) {
    throw ConfigError("bad integer '" + s + "'");
  }
}

std::uint64_t parse_seed(const std::string& s) {
  try {
    size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw ConfigError("bad seed '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("bad seed '" + s + "'");
  }
}

}  // namespace

void apply_config_line(ExperimentSpec& spec, const std::string& key, const std::string& value) {
  if (key == "preset") spec.preset = preset_from_string(value);
  else if (key == "cells") spec.config.num_cells = parse_integer(value);
  else if (key == "users") spec.config.users_per_cell = parse_integer(value);
  else if (key == "nt") spec.config.tx_antennas = parse_integer(value);
  else if (key == "nr") spec.config.rx_antennas = parse_integer(value);
  else if (key == "subcarriers") spec.config.num_subcarriers = parse_integer(value);
  else if (key == "power_dbw") spec.config.power_budget_dbw = parse_list<double>(value, parse_real);
  else if (key == "weights") spec.config.user_weights = parse_list<double>(value, parse_real);
  else if (key == "tol") spec.config.convergence_tol = parse_real(value);
  else if (key == "ia_iters") spec.config.ia_iters = parse_integer(value);
  else if (key == "ia_restarts") spec.config.ia_restarts = parse_integer(value);
  else if (key == "max_iters") spec.config.wsrm_max_iters = parse_integer(value);
  else if (key == "seed" || key == "seeds") spec.seeds = parse_list<std::uint64_t>(value, parse_seed);
  else if (key == "power_sweep") spec.power_sweep_dbw = parse_list<double>(value, parse_real);
  else if (key == "init") {
    if (value == "ia") spec.init = InitMode::ia;
    else if (value == "random") spec.init = InitMode::random;
    else throw ConfigError("init must be 'ia' or 'random'");
  } else if (key == "out") spec.out_dir = value;
  else if (key == "weight_order") {
    if (value != "cell_major") throw ConfigError("only cell_major weight order is supported");
  } else throw ConfigError("unknown config key '" + key + "'");
}

void apply_config_file(ExperimentSpec& spec, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
    apply_config_line(spec, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

}  // namespace wsrm
