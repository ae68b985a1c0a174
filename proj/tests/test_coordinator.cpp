#include <doctest.h>

#include "wsrm/coordinator.hpp"

#include <cmath>
#include <limits>

using namespace wsrm;

namespace {

SystemConfig desk_config(int cells, std::uint64_t seed, int subcarriers = 4) {
  SystemConfig config;
  config.num_cells = cells;
  config.users_per_cell = 2;
  config.tx_antennas = 4;
  config.rx_antennas = 2;
  config.num_subcarriers = subcarriers;
  config.user_weights = cells == 2 ? std::vector<double>{0.25, 0.54, 0.67, 0.79}
                                   : std::vector<double>{1.0};
  config.rng_seed = seed;
  config.ia_restarts = 5;
  return config;
}

}  // namespace

TEST_CASE("single cell reaches its fixed point after one iteration") {
  SystemConfig config = desk_config(1, 101, 2);
  config.users_per_cell = 1;
  config.user_weights = {1.0};
  const Assignment assignment = round_robin_assignment(config);
  const ChannelSet channels = generate_channels(config);

  RunState state{BeamformerSet(1, 2, 4, 2),
                 FilterSet::identity(1, 2, 2),
                 std::vector<CovarianceSet>(1),
                 {},
                 false,
                 0,
                 InitMode::random,
                 {0},
                 0,
                 {},
                 std::nullopt};
  state.beams = random_feasible_beamformers(config);
  const RunOptions opts;

  // Direct solve from the same starting point.
  const FilterSet filters = mmse_filters(channels, state.beams, assignment);
  const SubproblemData data =
      build_subproblem(channels, state.beams, filters, config, assignment, 0, opts.solver.epsilon);
  CovarianceSet init;
  for (int n = 0; n < 2; ++n) {
    const CMatrix& v = state.beams.at(0, n);
    init.w.push_back(CMatrix(v * v.adjoint()) + 1e-6 * CMatrix::Identity(4, 4));
  }
  const CovarianceSet direct = solve(data, init, opts.solver);
  BeamformerSet direct_beams = state.beams;
  for (int n = 0; n < 2; ++n)
    direct_beams.at(0, n) = recover_beamformer(direct[static_cast<size_t>(n)], 2);
  const double direct_wsr = weighted_sum_rate(channels, direct_beams, config, assignment).wsr;

  wsrm_iteration(state, channels, config, assignment, opts);
  const double first = state.wsr_trajectory.back().wsr;
  CHECK(std::abs(first - direct_wsr) <= 1e-9 * (1.0 + direct_wsr));

  for (int extra = 0; extra < 3; ++extra) {
    wsrm_iteration(state, channels, config, assignment, opts);
    CHECK(std::abs(state.wsr_trajectory.back().wsr - first) < 1e-6);
  }
}

TEST_CASE("zero channels give zero rate and survive solver failures") {
  SystemConfig config = desk_config(2, 102, 2);
  const Assignment assignment = round_robin_assignment(config);
  const ChannelSet channels(2, 2, 4, 2, 2);  // all-zero matrices
  const RunState state = run(channels, config, assignment, InitMode::random);
  for (const TrajectoryPoint& point : state.wsr_trajectory)
    CHECK(point.wsr == doctest::Approx(0.0));
  CHECK(state.converged);           // |0 - 0| <= tol at the first comparison
  CHECK(state.solver_failures > 0); // every cell fails on degenerate filters
}

TEST_CASE("benchmark-scale runs converge within the iteration cap") {
  for (std::uint64_t seed : {201, 202, 203}) {
    SystemConfig config = desk_config(2, seed, 8);
    const Assignment assignment = round_robin_assignment(config);
    const ChannelSet channels = generate_channels(config);
    const RunState state = run(channels, config, assignment, InitMode::ia);
    CHECK(state.converged);
    CHECK(state.iterations_used <= 20);
    if (state.converged) {
      const size_t t = state.wsr_trajectory.size();
      CHECK(std::abs(state.wsr_trajectory[t - 1].wsr - state.wsr_trajectory[t - 2].wsr) <=
            config.convergence_tol);
    }
  }
}

TEST_CASE("runs are deterministic for a fixed seed and mode") {
  SystemConfig config = desk_config(2, 103, 4);
  const Assignment assignment = round_robin_assignment(config);
  const ChannelSet channels = generate_channels(config);
  for (InitMode mode : {InitMode::ia, InitMode::random}) {
    const RunState a = run(channels, config, assignment, mode);
    const RunState b = run(channels, config, assignment, mode);
    REQUIRE(a.wsr_trajectory.size() == b.wsr_trajectory.size());
    for (size_t t = 0; t < a.wsr_trajectory.size(); ++t) {
      CHECK(a.wsr_trajectory[t].wsr == b.wsr_trajectory[t].wsr);
      CHECK(a.wsr_trajectory[t].cell_wsr == b.wsr_trajectory[t].cell_wsr);
    }
    CHECK(a.beams == b.beams);
  }
}

TEST_CASE("parallel and sequential cell solves agree") {
  SystemConfig config = desk_config(2, 104, 4);
  const Assignment assignment = round_robin_assignment(config);
  const ChannelSet channels = generate_channels(config);
  RunOptions sequential;
  sequential.parallel_cells = false;
  const RunState a = run(channels, config, assignment, InitMode::ia);
  const RunState b = run(channels, config, assignment, InitMode::ia, sequential);
  REQUIRE(a.wsr_trajectory.size() == b.wsr_trajectory.size());
  for (size_t t = 0; t < a.wsr_trajectory.size(); ++t)
    CHECK(a.wsr_trajectory[t].wsr == b.wsr_trajectory[t].wsr);
  CHECK(a.beams == b.beams);
}

TEST_CASE("infinite tolerance converges at the first comparison") {
  SystemConfig config = desk_config(2, 105, 2);
  config.convergence_tol = std::numeric_limits<double>::infinity();
  const Assignment assignment = round_robin_assignment(config);
  const ChannelSet channels = generate_channels(config);
  const RunState state = run(channels, config, assignment, InitMode::random);
  CHECK(state.converged);
  CHECK(state.iterations_used == 2);
  CHECK(state.wsr_trajectory.size() == 2);
}

TEST_CASE("no messages pass between cells during the loop") {
  SystemConfig config = desk_config(2, 106, 4);
  const Assignment assignment = round_robin_assignment(config);
  const ChannelSet channels = generate_channels(config);
  for (InitMode mode : {InitMode::ia, InitMode::random}) {
    const RunState state = run(channels, config, assignment, mode);
    CHECK(state.total_messages() == 0);
  }
}

TEST_CASE("cross-cell peeks would be counted") {
  const BeamformerSet beams(2, 2, 4, 2);
  const FilterSet filters = FilterSet::identity(2, 2, 2);
  std::vector<std::uint64_t> counters(2, 0);
  IterationWorkspace workspace(beams, filters, counters);
  workspace.post_result(1, {});
  (void)workspace.peek_inflight(0, 1);
  CHECK(counters[0] == 1);
  CHECK(counters[1] == 0);
}

TEST_CASE("final iterate stays near the trajectory maximum") {
  for (std::uint64_t seed : {107, 108, 109, 110}) {
    SystemConfig config = desk_config(2, seed, 4);
    const Assignment assignment = round_robin_assignment(config);
    const ChannelSet channels = generate_channels(config);
    const RunState state = run(channels, config, assignment, InitMode::ia);
    double peak = 0.0;
    for (const TrajectoryPoint& point : state.wsr_trajectory) peak = std::max(peak, point.wsr);
    CHECK(state.wsr_trajectory.back().wsr >= 0.95 * peak);
  }
}

TEST_CASE("trajectory bookkeeping matches the recorded invariants") {
  SystemConfig config = desk_config(2, 111, 4);
  const Assignment assignment = round_robin_assignment(config);
  const ChannelSet channels = generate_channels(config);
  const RunState state = run(channels, config, assignment, InitMode::ia);
  CHECK(state.wsr_trajectory.size() == static_cast<size_t>(state.iterations_used));
  for (size_t t = 0; t < state.wsr_trajectory.size(); ++t) {
    CHECK(state.wsr_trajectory[t].iteration == static_cast<int>(t) + 1);
    CHECK(std::isfinite(state.wsr_trajectory[t].wsr));
    double sum = 0.0;
    for (double cell : state.wsr_trajectory[t].cell_wsr) sum += cell;
    CHECK(state.wsr_trajectory[t].wsr == doctest::Approx(sum).epsilon(1e-12));
  }
  for (int m = 0; m < 2; ++m)
    CHECK(state.beams.cell_power(m) <= config.linear_power(m) * (1.0 + 1e-9));
}
