#include <doctest.h>

#include "wsrm/experiments.hpp"
#include "wsrm/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace wsrm;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

ExperimentSpec desk_spec(Preset preset, const std::string& out) {
  ExperimentSpec spec;
  spec.preset = preset;
  spec.config.num_subcarriers = 4;
  spec.config.ia_restarts = 5;
  spec.out_dir = out;
  return spec;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("spec defaults are the benchmark configuration") {
  const ExperimentSpec spec;
  CHECK(spec.config.num_cells == 2);
  CHECK(spec.config.users_per_cell == 2);
  CHECK(spec.config.tx_antennas == 4);
  CHECK(spec.config.rx_antennas == 2);
  CHECK(spec.config.num_subcarriers == 64);
  CHECK(spec.config.user_weights == std::vector<double>{0.25, 0.54, 0.67, 0.79});
  CHECK(spec.config.power_budget_dbw == std::vector<double>{20.0});
  CHECK(spec.config.linear_power(0) == doctest::Approx(100.0));
  CHECK(spec.config.convergence_tol == 0.01);
  CHECK(spec.power_sweep_dbw == std::vector<double>{5, 10, 15, 20, 25, 30});
}

TEST_CASE("convergence experiment writes one trajectory per run plus a summary") {
  TempDir dir("wsrm_convergence_test");
  ExperimentSpec spec = desk_spec(Preset::convergence, dir.path.string());
  spec.seeds = {9};
  const ExperimentResult result = run_convergence_experiment(spec);

  CHECK(result.files.size() == 4);  // summary + 2 trajectories + config echo
  CHECK(fs::exists(dir.path / "summary.csv"));
  CHECK(fs::exists(dir.path / "trajectory_seed9_ia.csv"));
  CHECK(fs::exists(dir.path / "trajectory_seed9_random.csv"));
  CHECK(fs::exists(dir.path / "config.txt"));

  const auto summary = lines_of(slurp((dir.path / "summary.csv").string()));
  REQUIRE(summary.size() == 3);
  CHECK(summary[0] == "seed,mode,converged,iterations_used,final_wsr");
  CHECK(summary[1].rfind("9,ia,", 0) == 0);
  CHECK(summary[2].rfind("9,random,", 0) == 0);

  const auto trajectory = lines_of(slurp((dir.path / "trajectory_seed9_ia.csv").string()));
  CHECK(trajectory[0] == "iteration,cell,wsr_cell,wsr_global,delta");
  REQUIRE(result.runs.size() == 2);
  for (const RunSummary& run : result.runs) CHECK(run.inter_cell_messages == 0);
}

TEST_CASE("config echo materializes every resolved field") {
  TempDir dir("wsrm_echo_test");
  ExperimentSpec spec = desk_spec(Preset::single_run, dir.path.string());
  spec.seeds = {3};
  run_single(spec);
  const std::string echo = slurp((dir.path / "config.txt").string());
  for (const char* key :
       {"preset = ", "cells = ", "users = ", "nt = ", "nr = ", "subcarriers = ", "power_dbw = ",
        "weights = ", "weight_order = cell_major", "tol = ", "ia_iters = ", "ia_restarts = ",
        "max_iters = ", "seeds = ", "power_sweep = ", "init = ", "out = "})
    CHECK(echo.find(key) != std::string::npos);
}

TEST_CASE("single runs are byte-identical under a fixed seed") {
  TempDir dir_a("wsrm_repro_a");
  TempDir dir_b("wsrm_repro_b");
  ExperimentSpec spec = desk_spec(Preset::single_run, dir_a.path.string());
  spec.seeds = {17};
  const ExperimentResult first = run_single(spec);
  spec.out_dir = dir_b.path.string();
  const ExperimentResult second = run_single(spec);
  REQUIRE(first.files.size() == second.files.size());
  for (size_t i = 0; i < first.files.size(); ++i) {
    const std::string name_a = fs::path(first.files[i]).filename().string();
    const std::string name_b = fs::path(second.files[i]).filename().string();
    CHECK(name_a == name_b);
    if (name_a == "config.txt") continue;  // echoes the differing out dir
    CHECK(slurp(first.files[i]) == slurp(second.files[i]));
  }
}

TEST_CASE("single run emits the full trace set") {
  TempDir dir("wsrm_single_test");
  ExperimentSpec spec = desk_spec(Preset::single_run, dir.path.string());
  spec.seeds = {5};
  run_single(spec);
  for (const char* name : {"trajectory.csv", "ia_leakage.csv", "solver_trace.csv",
                           "rate_report.csv", "channels.txt", "config.txt"})
    CHECK(fs::exists(dir.path / name));

  const auto ia_lines = lines_of(slurp((dir.path / "ia_leakage.csv").string()));
  CHECK(ia_lines[0] == "restart,sweep,total_leakage,sum_capacity");
  // 5 restarts, sweeps 0..10 recorded
  CHECK(ia_lines.size() == 1 + 5 * 11);

  const auto rate_lines = lines_of(slurp((dir.path / "rate_report.csv").string()));
  CHECK(rate_lines[0] == "record,m,k,n,value");
  CHECK(rate_lines.back().rfind("wsr,", 0) == 0);

  const auto solver_lines = lines_of(slurp((dir.path / "solver_trace.csv").string()));
  CHECK(solver_lines[0] == "cell,outer_iter,inner_iter,objective,step");
  CHECK(solver_lines.size() > 1);
}

TEST_CASE("single-cell trajectory is flat after the first iteration") {
  TempDir dir("wsrm_flat_test");
  ExperimentSpec spec = desk_spec(Preset::single_run, dir.path.string());
  spec.config.num_cells = 1;
  spec.config.user_weights = {1.0};
  spec.seeds = {11};
  // Resolve the inner solves tightly so the one-step fixed point shows.
  spec.run_options.solver.objective_tol = 1e-12;
  spec.run_options.solver.max_inner_iters = 2000;
  const ExperimentResult result = run_single(spec);
  REQUIRE(result.runs.size() == 1);

  const auto lines = lines_of(slurp((dir.path / "trajectory.csv").string()));
  REQUIRE(lines.size() >= 3);
  std::vector<double> wsr;
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto first_comma = lines[i].find(',');
    const auto second = lines[i].find(',', first_comma + 1);
    const auto third = lines[i].find(',', second + 1);
    wsr.push_back(std::stod(lines[i].substr(second + 1, third - second - 1)));
  }
  for (size_t i = 1; i < wsr.size(); ++i) CHECK(std::abs(wsr[i] - wsr[0]) < 1e-6);
}

TEST_CASE("a vanishing power budget yields a vanishing rate") {
  TempDir dir("wsrm_zero_power_test");
  ExperimentSpec spec = desk_spec(Preset::single_run, dir.path.string());
  spec.config.power_budget_dbw = {-120.0};  // 1e-12 linear
  spec.seeds = {2};
  const ExperimentResult result = run_single(spec);
  CHECK(result.runs[0].final_wsr < 1e-6);
}

TEST_CASE("power sweep emits one row per (power, mode)") {
  TempDir dir("wsrm_sweep_test");
  ExperimentSpec spec = desk_spec(Preset::power_sweep, dir.path.string());
  spec.power_sweep_dbw = {10.0, 20.0};
  spec.seeds = {1, 2};
  spec.config.wsrm_max_iters = 6;
  const ExperimentResult result = run_power_sweep(spec);

  const auto lines = lines_of(slurp((dir.path / "power_sweep.csv").string()));
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "power_dbw,mode,mean_sumrate,stderr");
  CHECK(lines[1].rfind("10,ia,", 0) == 0);
  CHECK(lines[2].rfind("10,random,", 0) == 0);
  CHECK(lines[3].rfind("20,ia,", 0) == 0);
  CHECK(lines[4].rfind("20,random,", 0) == 0);
  CHECK(result.runs.size() == 8);
}

TEST_CASE("config files override defaults and reject junk") {
  TempDir dir("wsrm_config_test");
  const fs::path file = dir.path / "run.cfg";
  {
    std::ofstream out(file);
    out << "# comment\n";
    out << "preset = single_run\n";
    out << "cells = 3\n";
    out << "subcarriers = 6\n";
    out << "weights = 1,1,1,1,1,1\n";
    out << "power_dbw = 10,20,30\n";
    out << "seeds = 4,5\n";
    out << "init = random\n";
  }
  ExperimentSpec spec;
  apply_config_file(spec, file.string());
  CHECK(spec.preset == Preset::single_run);
  CHECK(spec.config.num_cells == 3);
  CHECK(spec.config.num_subcarriers == 6);
  CHECK(spec.config.power_budget_dbw == std::vector<double>{10, 20, 30});
  CHECK(spec.seeds == std::vector<std::uint64_t>{4, 5});
  CHECK(spec.init == InitMode::random);

  CHECK_THROWS_AS(apply_config_line(spec, "bogus_key", "1"), ConfigError);
  CHECK_THROWS_AS(apply_config_line(spec, "cells", "two"), ConfigError);

  spec.config.users_per_cell = 9;  // > subcarriers
  CHECK_THROWS_AS(spec.validate(), ConfigError);
}

TEST_CASE("channel dumps can be suppressed") {
  TempDir dir("wsrm_nodump_test");
  ExperimentSpec spec = desk_spec(Preset::single_run, dir.path.string());
  spec.seeds = {4};
  spec.dump_channels = false;
  run_single(spec);
  CHECK_FALSE(fs::exists(dir.path / "channels.txt"));
  CHECK(fs::exists(dir.path / "trajectory.csv"));
}

TEST_CASE("unwritable output paths are configuration errors") {
  ExperimentSpec spec = desk_spec(Preset::single_run, "/proc/wsrm_unwritable/out");
  spec.seeds = {1};
  CHECK_THROWS_AS(run_single(spec), ConfigError);
}

TEST_CASE("malformed channel dumps are rejected") {
  std::stringstream missing_fields("0,0,0,0,0,0,1.5\n");
  CHECK_THROWS_AS(load_channels(missing_fields), ConfigError);
  std::stringstream bad_float("0,0,0,0,0,0,abc,0\n");
  CHECK_THROWS_AS(load_channels(bad_float), ConfigError);
  std::stringstream empty("");
  CHECK_THROWS_AS(load_channels(empty), ConfigError);
}

TEST_CASE("empty seed lists are rejected") {
  ExperimentSpec spec;
  spec.seeds.clear();
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec.seeds = {1};
  spec.preset = Preset::power_sweep;
  spec.power_sweep_dbw.clear();
  CHECK_THROWS_AS(spec.validate(), ConfigError);
}

TEST_CASE("doubles format with shortest round-trip strings") {
  CHECK(format_double(0.25) == "0.25");
  CHECK(format_double(100.0) == "100");
  const double value = 0.1 + 0.2;
  CHECK(std::stod(format_double(value)) == value);
}
