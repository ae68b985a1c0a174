#include "wsrm/subproblem_solver.hpp"

#include "wsrm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace wsrm {

double CovarianceSet::total_trace() const {
  double total = 0.0;
  for (const auto& m : w) total += m.trace().real();
  return total;
}

SubproblemData build_subproblem(const ChannelSet& channels, const BeamformerSet& beams,
                                const FilterSet& filters, const SystemConfig& config,
                                const Assignment& assignment, int cell, double epsilon) {
  const int nt = config.tx_antennas;
  SubproblemData data;
  data.cell = cell;
  data.power_budget = config.linear_power(cell);
  data.epsilon = epsilon;
  data.weight.reserve(static_cast<size_t>(config.num_subcarriers));
  data.signal_map.reserve(static_cast<size_t>(config.num_subcarriers));
  data.penalty.reserve(static_cast<size_t>(config.num_subcarriers));

  for (int n = 0; n < config.num_subcarriers; ++n) {
    const int k = assignment.user_of(cell, n);
    data.weight.push_back(config.weight(cell, k));
    data.signal_map.push_back(filters.at(cell, n).adjoint() * channels.at(cell, cell, k, n));

    CMatrix penalty = CMatrix::Zero(nt, nt);
    for (int victim = 0; victim < config.num_cells; ++victim) {
      if (victim == cell) continue;
      const int victim_user = assignment.user_of(victim, n);
      const CMatrix leak_map =
          filters.at(victim, n).adjoint() * channels.at(cell, victim, victim_user, n);
      const CMatrix n_leak = aggregate_leakage_plus_noise(channels, beams, filters, assignment,
                                                          victim, n, cell);
      const CMatrix solved = hpd_solve(n_leak, leak_map, "build_subproblem");
      penalty += config.weight(victim, victim_user) * (leak_map.adjoint() * solved);
    }
    data.penalty.push_back(hermitianize(penalty));
  }
  return data;
}

namespace {

CMatrix signal_term(const SubproblemData& data, const CMatrix& w, size_t n) {
  const CMatrix& a = data.signal_map[n];
  CMatrix s = a * w * a.adjoint();
  s += data.epsilon * CMatrix::Identity(s.rows(), s.cols());
  return hermitianize(s);
}

}  // namespace

double objective(const SubproblemData& data, const CovarianceSet& covs) {
  double value = 0.0;
  for (size_t n = 0; n < covs.size(); ++n) {
    value += data.weight[n] * log2_det_hpd(signal_term(data, covs[n], n));
    value -= (data.penalty[n] * covs[n]).trace().real() / kLn2;
  }
  return value;
}

std::vector<CMatrix> gradient(const SubproblemData& data, const CovarianceSet& covs) {
  std::vector<CMatrix> grad;
  grad.reserve(covs.size());
  for (size_t n = 0; n < covs.size(); ++n) {
    const CMatrix& a = data.signal_map[n];
    const CMatrix solved = hpd_solve(signal_term(data, covs[n], n), a, "gradient");
    grad.push_back(hermitianize((data.weight[n] / kLn2) * (a.adjoint() * solved) -
                                data.penalty[n] / kLn2));
  }
  return grad;
}

CovarianceSet project_feasible(const CovarianceSet& covs, double budget) {
  CovarianceSet projected;
  projected.w.reserve(covs.size());
  for (const auto& w : covs.w) projected.w.push_back(psd_clip(w));
  const double total = projected.total_trace();
  if (total > budget && total > 0.0) {
    const double scale = budget / total;
    for (auto& w : projected.w) w *= scale;
  }
  return projected;
}

namespace {

// Exact Euclidean projection onto {W_n >= 0, sum_n trace(W_n) <= P}: shared
// water level theta on the concatenated eigenvalues, lambda -> max(lambda -
// theta, 0). Uniform trace rescaling is feasibility-preserving but its fixed
// points are not KKT points when the budget binds with unequal weights, so
// the line search projects through this one instead.
CovarianceSet project_euclidean(const CovarianceSet& covs, double budget) {
  std::vector<Eigh> decomps;
  decomps.reserve(covs.size());
  std::vector<double> eigenvalues;
  for (const auto& w : covs.w) {
    decomps.push_back(sorted_eigh(w));
    for (Eigen::Index i = 0; i < decomps.back().values.size(); ++i)
      eigenvalues.push_back(decomps.back().values(i));
  }

  double positive_sum = 0.0;
  for (double lam : eigenvalues) positive_sum += std::max(lam, 0.0);
  double theta = 0.0;
  if (positive_sum > budget) {
    std::sort(eigenvalues.begin(), eigenvalues.end(), std::greater<double>());
    double prefix = 0.0;
    for (size_t k = 0; k < eigenvalues.size(); ++k) {
      prefix += eigenvalues[k];
      const double candidate = (prefix - budget) / static_cast<double>(k + 1);
      const bool last = k + 1 == eigenvalues.size();
      if (candidate >= 0.0 && (last || candidate >= eigenvalues[k + 1])) {
        theta = candidate;
        break;
      }
    }
  }

  CovarianceSet projected;
  projected.w.reserve(covs.size());
  for (const Eigh& d : decomps) {
    RVector shifted = (d.values.array() - theta).cwiseMax(0.0);
    projected.w.push_back(d.vectors * shifted.asDiagonal() * d.vectors.adjoint());
  }
  return projected;
}

}  // namespace

CovarianceSet solve(const SubproblemData& data, const CovarianceSet& init,
                    const SolverOptions& opts, std::vector<SolverTraceRow>* trace) {
  CovarianceSet current = project_feasible(init, data.power_budget);
  double value = objective(data, current);
  if (!std::isfinite(value))
    throw NumericalError("solve: objective is not finite at the initial point");

  double trial_step = opts.step_init;
  for (int iter = 1; iter <= opts.max_inner_iters; ++iter) {
    const std::vector<CMatrix> grad = gradient(data, current);

    double step = trial_step;
    bool accepted = false;
    CovarianceSet candidate;
    double candidate_value = value;
    while (step > 1e-18) {
      CovarianceSet moved;
      moved.w.reserve(current.size());
      for (size_t n = 0; n < current.size(); ++n) moved.w.push_back(current[n] + step * grad[n]);
      candidate = project_euclidean(moved, data.power_budget);

      double directional = 0.0;
      for (size_t n = 0; n < current.size(); ++n)
        directional += (grad[n] * (candidate[n] - current[n])).trace().real();

      candidate_value = objective(data, candidate);
      if (std::isfinite(candidate_value) && candidate_value >= value &&
          candidate_value - value >= opts.sufficient_decrease * std::max(directional, 0.0)) {
        accepted = true;
        break;
      }
      step *= opts.backtrack;
    }
    if (!accepted) break;

    // The accepted step seeds the next trial, doubled, so budget-bound
    // directions saturate in logarithmically many iterations.
    trial_step = std::min(step * 2.0, 1e12);

    const double improvement = candidate_value - value;
    current = std::move(candidate);
    value = candidate_value;
    if (trace) trace->push_back({iter, value, step});
    if (improvement < opts.objective_tol) break;
  }
  return current;
}

CMatrix recover_beamformer(const CMatrix& w, int rx_antennas) {
  const Eigh eig = sorted_eigh(w);
  const Eigen::Index nt = w.rows();
  CMatrix v = CMatrix::Zero(nt, rx_antennas);
  for (int i = 0; i < rx_antennas; ++i) {
    const Eigen::Index idx = nt - 1 - i;  // descending order
    if (idx < 0) break;
    const double sigma = std::max(eig.values(idx), 0.0);
    v.col(i) = eig.vectors.col(idx) * std::sqrt(sigma);
  }
  return v;
}

}  // namespace wsrm
