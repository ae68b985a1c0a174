#pragma once

#include "wsrm/rate_engine.hpp"

#include <vector>

namespace wsrm {

/// Transmit covariances W, one Nt x Nt Hermitian PSD matrix per subcarrier
/// of the solving cell, subject to an aggregate trace budget.
struct CovarianceSet {
  std::vector<CMatrix> w;  // per subcarrier

  double total_trace() const;
  size_t size() const { return w.size(); }
  CMatrix& operator[](size_t n) { return w[n]; }
  const CMatrix& operator[](size_t n) const { return w[n]; }
};

/// Everything one cell needs to evaluate its convex-approximated objective:
/// its own filtered signal maps, the precomputed interference penalty toward
/// every victim, weights, and the trace budget.
struct SubproblemData {
  int cell = 0;
  double power_budget = 0.0;          // linear
  double epsilon = 1e-9;              // log-det regularizer
  std::vector<double> weight;         // w_mkn per subcarrier
  std::vector<CMatrix> signal_map;    // A_n = U^H H, Nr x Nt
  std::vector<CMatrix> penalty;       // P_n, Nt x Nt Hermitian PSD
};

struct SolverOptions {
  int max_inner_iters = 200;
  double step_init = 1.0;
  double backtrack = 0.5;            // beta in (0,1)
  double sufficient_decrease = 1e-4; // c1 in (0,1)
  double epsilon = 1e-9;             // regularizer copied into SubproblemData
  double objective_tol = 1e-6;
};

struct SolverTraceRow {
  int inner_iter = 0;
  double objective = 0.0;
  double step = 0.0;
};

/// Assembles the solving cell's subproblem from a snapshot of the other
/// cells' beamformers and the current filters. Throws NumericalError when a
/// victim's leakage-plus-noise matrix is singular (degenerate filters).
SubproblemData build_subproblem(const ChannelSet& channels, const BeamformerSet& beams,
                                const FilterSet& filters, const SystemConfig& config,
                                const Assignment& assignment, int cell, double epsilon = 1e-9);

/// f(W) = sum_n [ w_n log2 det(A_n W_n A_n^H + eps I) - trace(P_n W_n)/ln 2 ].
/// Returns -inf (as NumericalError) only when eps = 0 and a signal term is
/// singular.
double objective(const SubproblemData& data, const CovarianceSet& covs);

/// Gradient per subcarrier: (w_n/ln2) A^H (A W A^H + eps I)^{-1} A - P_n/ln2.
std::vector<CMatrix> gradient(const SubproblemData& data, const CovarianceSet& covs);

/// PSD-clips every matrix, then uniformly rescales when the aggregate trace
/// exceeds the budget. Output satisfies both constraints.
CovarianceSet project_feasible(const CovarianceSet& covs, double budget);

/// Projected gradient ascent with Armijo backtracking. The accepted
/// objective sequence is nondecreasing; the result is feasible.
CovarianceSet solve(const SubproblemData& data, const CovarianceSet& init,
                    const SolverOptions& opts, std::vector<SolverTraceRow>* trace = nullptr);

/// Rank-Nr recovery V = [v_1..v_Nr] diag(sqrt(sigma_1)..sqrt(sigma_Nr)) from
/// the top eigenpairs; negative eigenvalues are clipped, missing ones give
/// zero columns.
CMatrix recover_beamformer(const CMatrix& w, int rx_antennas);

}  // namespace wsrm
