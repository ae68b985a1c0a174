#pragma once

#include "wsrm/rate_engine.hpp"

#include <utility>
#include <vector>

namespace wsrm {

struct IaTraceRow {
  int restart = 0;
  int sweep = 0;  // 0 = before the first sweep
  double total_leakage = 0.0;
  double sum_capacity = 0.0;  // only filled when tracing is enabled
};

/// Outcome of the interference-alignment initialization phase.
struct IaResult {
  BeamformerSet beams;
  FilterSet filters;
  std::vector<double> leakage_per_user;  // (m, n) flat; user implied by assignment
  std::vector<double> leakage_history;   // winning restart, per sweep (index 0 = start)
  double sum_capacity = 0.0;
  int restarts_run = 0;
  int best_restart = 0;
  std::vector<IaTraceRow> trace;  // per (restart, sweep) when requested
};

/// Filtered interference power received on link (m, n):
/// sum over interfering cells of trace(U^H H V V^H H^H U).
double leakage(const ChannelSet& channels, const BeamformerSet& beams, const FilterSet& filters,
               const Assignment& assignment, int cell, int subcarrier);

/// Network leakage, summed over every link.
double total_leakage(const ChannelSet& channels, const BeamformerSet& beams,
                     const FilterSet& filters, const Assignment& assignment);

/// One alternating leakage-minimization sweep. Receive filters become the
/// ascending eigenbasis of each link's interference covariance; transmit
/// beamformers become the least-leaking eigenvectors of the outgoing-leakage
/// matrix, renormalized to each cell's full power budget.
std::pair<BeamformerSet, FilterSet> ia_sweep(const ChannelSet& channels,
                                             const BeamformerSet& beams, const FilterSet& filters,
                                             const SystemConfig& config,
                                             const Assignment& assignment);

/// Best of config.ia_restarts random restarts, each running exactly
/// config.ia_iters sweeps; the winner maximizes unweighted sum capacity,
/// ties broken by lowest restart index.
IaResult run_ia_phase(const ChannelSet& channels, const SystemConfig& config,
                      const Assignment& assignment, bool with_trace = false);

}  // namespace wsrm
