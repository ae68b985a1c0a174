#include "wsrm/coordinator.hpp"

#include "wsrm/linalg.hpp"

#include <cmath>
#include <future>
#include <numeric>

namespace wsrm {

std::string to_string(InitMode mode) { return mode == InitMode::ia ? "ia" : "random"; }

std::uint64_t RunState::total_messages() const {
  return std::accumulate(inter_cell_messages.begin(), inter_cell_messages.end(),
                         std::uint64_t{0});
}

namespace {

struct CellOutcome {
  bool ok = false;
  CovarianceSet covs;
  std::vector<CMatrix> beams;
  std::vector<SolverTraceRow> trace;
};

CellOutcome solve_cell(int cell, const IterationWorkspace& workspace, const ChannelSet& channels,
                       const SystemConfig& config, const Assignment& assignment,
                       const RunOptions& opts) {
  CellOutcome outcome;
  try {
    const SubproblemData data =
        build_subproblem(channels, workspace.beams(), workspace.filters(), config, assignment,
                         cell, opts.solver.epsilon);
    CovarianceSet init;
    init.w.reserve(static_cast<size_t>(config.num_subcarriers));
    for (int n = 0; n < config.num_subcarriers; ++n) {
      const CMatrix& v = workspace.beams().at(cell, n);
      init.w.push_back(CMatrix(v * v.adjoint()) +
                       1e-6 * CMatrix::Identity(config.tx_antennas, config.tx_antennas));
    }
    outcome.covs = solve(data, init, opts.solver,
                         opts.record_solver_trace ? &outcome.trace : nullptr);
    outcome.beams.reserve(outcome.covs.size());
    for (size_t n = 0; n < outcome.covs.size(); ++n)
      outcome.beams.push_back(recover_beamformer(outcome.covs[n], config.rx_antennas));
    outcome.ok = true;
  } catch (const NumericalError&) {
    outcome.ok = false;
  }
  return outcome;
}

}  // namespace

void wsrm_iteration(RunState& state, const ChannelSet& channels, const SystemConfig& config,
                    const Assignment& assignment, const RunOptions& opts) {
  state.filters = mmse_filters(channels, state.beams, assignment);

  IterationWorkspace workspace(state.beams, state.filters, state.inter_cell_messages);
  std::vector<CellOutcome> outcomes(static_cast<size_t>(config.num_cells));
  if (opts.parallel_cells && config.num_cells > 1) {
    std::vector<std::future<CellOutcome>> futures;
    futures.reserve(static_cast<size_t>(config.num_cells));
    for (int m = 0; m < config.num_cells; ++m)
      futures.push_back(std::async(std::launch::async, solve_cell, m, std::cref(workspace),
                                   std::cref(channels), std::cref(config), std::cref(assignment),
                                   std::cref(opts)));
    for (int m = 0; m < config.num_cells; ++m)
      outcomes[static_cast<size_t>(m)] = futures[static_cast<size_t>(m)].get();
  } else {
    for (int m = 0; m < config.num_cells; ++m)
      outcomes[static_cast<size_t>(m)] =
          solve_cell(m, workspace, channels, config, assignment, opts);
  }

  // Committed atomically: every cell solved against the same snapshot.
  const int iteration = state.iterations_used + 1;
  for (int m = 0; m < config.num_cells; ++m) {
    CellOutcome& outcome = outcomes[static_cast<size_t>(m)];
    if (!outcome.ok) {
      ++state.solver_failures;
      continue;
    }
    state.covs[static_cast<size_t>(m)] = std::move(outcome.covs);
    for (int n = 0; n < config.num_subcarriers; ++n)
      state.beams.at(m, n) = std::move(outcome.beams[static_cast<size_t>(n)]);
    for (const SolverTraceRow& row : outcome.trace)
      state.solver_trace.push_back({m, iteration, row.inner_iter, row.objective, row.step});
  }

  const RateReport report = weighted_sum_rate(channels, state.beams, config, assignment);
  state.wsr_trajectory.push_back({iteration, report.cell_wsr, report.wsr});
  state.iterations_used = iteration;
}

RunState run(const ChannelSet& channels, const SystemConfig& config, const Assignment& assignment,
             InitMode mode, const RunOptions& opts) {
  config.validate();
  RunState state{
      BeamformerSet(config.num_cells, config.num_subcarriers, config.tx_antennas,
                    config.rx_antennas),
      FilterSet::identity(config.num_cells, config.num_subcarriers, config.rx_antennas),
      std::vector<CovarianceSet>(static_cast<size_t>(config.num_cells)),
      {},
      false,
      0,
      mode,
      std::vector<std::uint64_t>(static_cast<size_t>(config.num_cells), 0),
      0,
      {},
      std::nullopt};

  if (mode == InitMode::ia) {
    state.ia = run_ia_phase(channels, config, assignment, opts.record_ia_trace);
    state.beams = state.ia->beams;
  } else {
    state.beams = random_feasible_beamformers(config);
  }

  while (state.iterations_used < config.wsrm_max_iters) {
    wsrm_iteration(state, channels, config, assignment, opts);
    const size_t t = state.wsr_trajectory.size();
    if (t >= 2) {
      const double delta =
          std::abs(state.wsr_trajectory[t - 1].wsr - state.wsr_trajectory[t - 2].wsr);
      if (delta <= config.convergence_tol) {
        state.converged = true;
        break;
      }
    }
  }
  return state;
}

}  // namespace wsrm
