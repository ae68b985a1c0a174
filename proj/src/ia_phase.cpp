#include "wsrm/ia_phase.hpp"

#include "wsrm/linalg.hpp"

#include <thread>

namespace wsrm {

double leakage(const ChannelSet& channels, const BeamformerSet& beams, const FilterSet& filters,
               const Assignment& assignment, int cell, int subcarrier) {
  const int k = assignment.user_of(cell, subcarrier);
  const CMatrix& u = filters.at(cell, subcarrier);
  double power = 0.0;
  for (int other = 0; other < channels.num_cells(); ++other) {
    if (other == cell) continue;
    const CMatrix uhv =
        u.adjoint() * channels.at(other, cell, k, subcarrier) * beams.at(other, subcarrier);
    power += uhv.squaredNorm();
  }
  return power;
}

double total_leakage(const ChannelSet& channels, const BeamformerSet& beams,
                     const FilterSet& filters, const Assignment& assignment) {
  double power = 0.0;
  for (int m = 0; m < channels.num_cells(); ++m)
    for (int n = 0; n < channels.num_subcarriers(); ++n)
      power += leakage(channels, beams, filters, assignment, m, n);
  return power;
}

std::pair<BeamformerSet, FilterSet> ia_sweep(const ChannelSet& channels,
                                             const BeamformerSet& beams, const FilterSet& filters,
                                             const SystemConfig& config,
                                             const Assignment& assignment) {
  const int num_cells = config.num_cells;
  const int num_subcarriers = config.num_subcarriers;
  const int nr = config.rx_antennas;
  const int nt = config.tx_antennas;

  // Receive side: ascending eigenbasis of the interference covariance, so the
  // least-interfered directions come first. An exactly zero covariance (no
  // interferers) leaves the filter as is.
  FilterSet new_filters = filters;
  for (int m = 0; m < num_cells; ++m)
    for (int n = 0; n < num_subcarriers; ++n) {
      const int k = assignment.user_of(m, n);
      CMatrix cov = CMatrix::Zero(nr, nr);
      for (int other = 0; other < num_cells; ++other) {
        if (other == m) continue;
        const CMatrix hv = channels.at(other, m, k, n) * beams.at(other, n);
        cov += hv * hv.adjoint();
      }
      if (cov.norm() > 0.0) new_filters.at(m, n) = sorted_eigh(cov).vectors;
    }

  // Transmit side: least-leaking directions of the aggregate outgoing-leakage
  // matrix seen by all victim receivers, then full-power renormalization.
  BeamformerSet new_beams = beams;
  for (int m = 0; m < num_cells; ++m)
    for (int n = 0; n < num_subcarriers; ++n) {
      CMatrix outgoing = CMatrix::Zero(nt, nt);
      for (int victim = 0; victim < num_cells; ++victim) {
        if (victim == m) continue;
        const int k = assignment.user_of(victim, n);
        const CMatrix uh = new_filters.at(victim, n).adjoint() * channels.at(m, victim, k, n);
        outgoing += uh.adjoint() * uh;
      }
      if (outgoing.norm() > 0.0)
        new_beams.at(m, n) = sorted_eigh(outgoing).vectors.leftCols(nr);
    }
  new_beams.normalize_cell_power(linear_power_budgets(config));
  return {std::move(new_beams), std::move(new_filters)};
}

namespace {

struct RestartOutcome {
  BeamformerSet beams;
  FilterSet filters;
  std::vector<double> leakage_history;
  double sum_capacity = 0.0;
  std::vector<IaTraceRow> trace;
};

RestartOutcome run_restart(const ChannelSet& channels, const SystemConfig& config,
                           const Assignment& assignment, int restart, bool with_trace) {
  RestartOutcome out{
      random_feasible_beamformers(config, static_cast<std::uint64_t>(restart)),
      FilterSet::identity(config.num_cells, config.num_subcarriers, config.rx_antennas),
      {},
      0.0,
      {}};
  auto record = [&](int sweep) {
    const double leak = total_leakage(channels, out.beams, out.filters, assignment);
    out.leakage_history.push_back(leak);
    if (with_trace)
      out.trace.push_back(
          {restart, sweep, leak, sum_capacity(channels, out.beams, assignment)});
  };
  record(0);
  for (int sweep = 1; sweep <= config.ia_iters; ++sweep) {
    auto [beams, filters] = ia_sweep(channels, out.beams, out.filters, config, assignment);
    out.beams = std::move(beams);
    out.filters = std::move(filters);
    record(sweep);
  }
  out.sum_capacity = sum_capacity(channels, out.beams, assignment);
  return out;
}

}  // namespace

IaResult run_ia_phase(const ChannelSet& channels, const SystemConfig& config,
                      const Assignment& assignment, bool with_trace) {
  config.validate();
  const int restarts = config.ia_restarts;
  std::vector<RestartOutcome> outcomes;
  outcomes.reserve(static_cast<size_t>(restarts));
  for (int r = 0; r < restarts; ++r) outcomes.push_back(RestartOutcome{});

  const unsigned hardware = std::max(1u, std::thread::hardware_concurrency());
  const int workers = static_cast<int>(std::min<unsigned>(hardware, static_cast<unsigned>(restarts)));
  if (workers <= 1) {
    for (int r = 0; r < restarts; ++r)
      outcomes[static_cast<size_t>(r)] = run_restart(channels, config, assignment, r, with_trace);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int r = w; r < restarts; r += workers)
          outcomes[static_cast<size_t>(r)] =
              run_restart(channels, config, assignment, r, with_trace);
      });
    for (auto& t : pool) t.join();
  }

  // Deterministic max-reduction, ties to the lowest restart index.
  int best = 0;
  for (int r = 1; r < restarts; ++r)
    if (outcomes[static_cast<size_t>(r)].sum_capacity > outcomes[static_cast<size_t>(best)].sum_capacity)
      best = r;

  RestartOutcome& winner = outcomes[static_cast<size_t>(best)];
  IaResult result{std::move(winner.beams),
                  std::move(winner.filters),
                  {},
                  std::move(winner.leakage_history),
                  winner.sum_capacity,
                  restarts,
                  best,
                  {}};
  result.leakage_per_user.reserve(
      static_cast<size_t>(config.num_cells) * config.num_subcarriers);
  for (int m = 0; m < config.num_cells; ++m)
    for (int n = 0; n < config.num_subcarriers; ++n)
      result.leakage_per_user.push_back(
          leakage(channels, result.beams, result.filters, assignment, m, n));
  if (with_trace)
    for (auto& outcome : outcomes)
      result.trace.insert(result.trace.end(), outcome.trace.begin(), outcome.trace.end());
  return result;
}

}  // namespace wsrm
