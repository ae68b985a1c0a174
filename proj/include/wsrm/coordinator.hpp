#pragma once

#include "wsrm/ia_phase.hpp"
#include "wsrm/subproblem_solver.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wsrm {

enum class InitMode { ia, random };

std::string to_string(InitMode mode);

struct TrajectoryPoint {
  int iteration = 0;              // 1-based
  std::vector<double> cell_wsr;   // weighted per-cell sums
  double wsr = 0.0;
};

struct CellSolverTraceRow {
  int cell = 0;
  int outer_iter = 0;
  int inner_iter = 0;
  double objective = 0.0;
  double step = 0.0;
};

/// Full state of one iterative WSRM run.
struct RunState {
  BeamformerSet beams;
  FilterSet filters;
  std::vector<CovarianceSet> covs;  // per cell, latest accepted
  std::vector<TrajectoryPoint> wsr_trajectory;
  bool converged = false;
  int iterations_used = 0;
  InitMode init_mode = InitMode::ia;

  /// Messages exchanged between per-cell solver contexts after
  /// initialization. The algorithm never exchanges any; the counters exist
  /// to make that checkable.
  std::vector<std::uint64_t> inter_cell_messages;
  int solver_failures = 0;

  std::vector<CellSolverTraceRow> solver_trace;
  std::optional<IaResult> ia;  // present for InitMode::ia runs

  std::uint64_t total_messages() const;
};

struct RunOptions {
  SolverOptions solver;
  bool record_solver_trace = false;
  bool record_ia_trace = false;
  bool parallel_cells = true;
};

/// Immutable start-of-iteration snapshot one cell solves against. Reading
/// another cell's in-flight result goes through peek_inflight(), which is
/// counted; the implemented algorithm never calls it.
class IterationWorkspace {
 public:
  IterationWorkspace(const BeamformerSet& beams, const FilterSet& filters,
                     std::vector<std::uint64_t>& message_counters)
      : beams_(beams), filters_(filters), counters_(message_counters),
        inflight_(static_cast<size_t>(beams.num_cells())) {}

  const BeamformerSet& beams() const { return beams_; }
  const FilterSet& filters() const { return filters_; }

  void post_result(int cell, std::vector<CMatrix> new_beams) {
    inflight_[static_cast<size_t>(cell)] = std::move(new_beams);
  }
  /// Cross-cell read during an iteration; increments the reader's counter.
  const std::vector<CMatrix>& peek_inflight(int reader_cell, int target_cell) {
    ++counters_[static_cast<size_t>(reader_cell)];
    return inflight_[static_cast<size_t>(target_cell)];
  }

 private:
  const BeamformerSet& beams_;
  const FilterSet& filters_;
  std::vector<std::uint64_t>& counters_;
  std::vector<std::vector<CMatrix>> inflight_;
};

/// One post-IA iteration: MMSE filter refresh, Jacobi per-cell subproblem
/// solves against the shared snapshot, covariance recovery, and a trajectory
/// append with the true weighted sum-rate. A cell whose solve fails keeps its
/// previous beamformers.
void wsrm_iteration(RunState& state, const ChannelSet& channels, const SystemConfig& config,
                    const Assignment& assignment, const RunOptions& opts);

/// Full Algorithm: initialize beams (IA phase or random), then iterate until
/// |wsr(t) - wsr(t-1)| <= convergence_tol or wsrm_max_iters is reached.
RunState run(const ChannelSet& channels, const SystemConfig& config, const Assignment& assignment,
             InitMode mode, const RunOptions& opts = {});

}  // namespace wsrm
