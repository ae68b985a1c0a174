#include "wsrm/rate_engine.hpp"

#include "wsrm/linalg.hpp"

namespace wsrm {

FilterSet::FilterSet(int num_cells, int num_subcarriers, int rx_antennas)
    : num_cells_(num_cells),
      num_subcarriers_(num_subcarriers),
      u_(static_cast<size_t>(num_cells) * num_subcarriers, CMatrix::Zero(rx_antennas, rx_antennas)) {}

FilterSet FilterSet::identity(int num_cells, int num_subcarriers, int rx_antennas) {
  FilterSet filters(num_cells, num_subcarriers, rx_antennas);
  for (int m = 0; m < num_cells; ++m)
    for (int n = 0; n < num_subcarriers; ++n)
      filters.at(m, n) = CMatrix::Identity(rx_antennas, rx_antennas);
  return filters;
}

bool FilterSet::operator==(const FilterSet& other) const {
  if (u_.size() != other.u_.size()) return false;
  for (size_t i = 0; i < u_.size(); ++i)
    if (u_[i] != other.u_[i]) return false;
  return true;
}

CMatrix interference_covariance(const ChannelSet& channels, const BeamformerSet& beams,
                                const Assignment& assignment, int cell, int subcarrier) {
  const int nr = channels.rx_antennas();
  const int k = assignment.user_of(cell, subcarrier);
  CMatrix x = CMatrix::Identity(nr, nr);
  for (int other = 0; other < channels.num_cells(); ++other) {
    if (other == cell) continue;
    const CMatrix hv = channels.at(other, cell, k, subcarrier) * beams.at(other, subcarrier);
    x += hv * hv.adjoint();
  }
  return hermitianize(x);
}

CMatrix sinr_matrix(const ChannelSet& channels, const BeamformerSet& beams,
                    const Assignment& assignment, int cell, int subcarrier) {
  const int k = assignment.user_of(cell, subcarrier);
  const CMatrix x = interference_covariance(channels, beams, assignment, cell, subcarrier);
  const CMatrix hv = channels.at(cell, cell, k, subcarrier) * beams.at(cell, subcarrier);
  const CMatrix solved = hpd_solve(x, hv, "sinr_matrix");
  return hermitianize(hv.adjoint() * solved);
}

LinkStatistics link_statistics(const ChannelSet& channels, const BeamformerSet& beams,
                               const Assignment& assignment, int cell, int subcarrier) {
  LinkStatistics stats;
  stats.interference_covariance =
      interference_covariance(channels, beams, assignment, cell, subcarrier);
  const int k = assignment.user_of(cell, subcarrier);
  const CMatrix hv = channels.at(cell, cell, k, subcarrier) * beams.at(cell, subcarrier);
  stats.sinr = hermitianize(hv.adjoint() * hpd_solve(stats.interference_covariance, hv, "sinr"));
  return stats;
}

double rate(const CMatrix& gamma) { return log2_det_identity_plus(gamma); }

CMatrix mmse_filter(const ChannelSet& channels, const BeamformerSet& beams,
                    const Assignment& assignment, int cell, int subcarrier) {
  const int k = assignment.user_of(cell, subcarrier);
  const CMatrix x = interference_covariance(channels, beams, assignment, cell, subcarrier);
  const CMatrix hv = channels.at(cell, cell, k, subcarrier) * beams.at(cell, subcarrier);
  return hpd_solve(x, hv, "mmse_filter");
}

FilterSet mmse_filters(const ChannelSet& channels, const BeamformerSet& beams,
                       const Assignment& assignment) {
  FilterSet filters(channels.num_cells(), channels.num_subcarriers(), channels.rx_antennas());
  for (int m = 0; m < channels.num_cells(); ++m)
    for (int n = 0; n < channels.num_subcarriers(); ++n)
      filters.at(m, n) = mmse_filter(channels, beams, assignment, m, n);
  return filters;
}

double filtered_rate(const ChannelSet& channels, const BeamformerSet& beams,
                     const FilterSet& filters, const Assignment& assignment, int cell,
                     int subcarrier) {
  const int k = assignment.user_of(cell, subcarrier);
  const CMatrix& u = filters.at(cell, subcarrier);
  const CMatrix x = interference_covariance(channels, beams, assignment, cell, subcarrier);
  const CMatrix uxu = hermitianize(u.adjoint() * x * u);
  const CMatrix uhv =
      u.adjoint() * channels.at(cell, cell, k, subcarrier) * beams.at(cell, subcarrier);
  // det(I + M^{-1} K K^H) = det(I + (L^{-1}K)(L^{-1}K)^H) with M = L L^H keeps
  // the argument Hermitian PSD for any filter.
  Eigen::LLT<CMatrix> llt(uxu);
  if (llt.info() != Eigen::Success)
    throw NumericalError("filtered_rate: degenerate filter, U^H X U is singular");
  const CMatrix whitened = llt.matrixL().solve(uhv);
  return log2_det_identity_plus(hermitianize(whitened * whitened.adjoint()));
}

double high_sinr_rate(const ChannelSet& channels, const BeamformerSet& beams,
                      const FilterSet& filters, const Assignment& assignment, int cell,
                      int subcarrier) {
  const int k = assignment.user_of(cell, subcarrier);
  const CMatrix& u = filters.at(cell, subcarrier);
  const CMatrix x = interference_covariance(channels, beams, assignment, cell, subcarrier);
  const CMatrix uhv =
      u.adjoint() * channels.at(cell, cell, k, subcarrier) * beams.at(cell, subcarrier);
  const double signal = log2_det_hpd(hermitianize(uhv * uhv.adjoint()));
  const double noise = log2_det_hpd(hermitianize(u.adjoint() * x * u));
  return signal - noise;
}

CMatrix aggregate_leakage_plus_noise(const ChannelSet& channels, const BeamformerSet& beams,
                                     const FilterSet& filters, const Assignment& assignment,
                                     int victim_cell, int subcarrier, int excluded_cell) {
  const int k = assignment.user_of(victim_cell, subcarrier);
  const CMatrix& u = filters.at(victim_cell, subcarrier);
  CMatrix n_leak = u.adjoint() * u;
  for (int i = 0; i < channels.num_cells(); ++i) {
    if (i == victim_cell || i == excluded_cell) continue;
    const CMatrix uhv =
        u.adjoint() * channels.at(i, victim_cell, k, subcarrier) * beams.at(i, subcarrier);
    n_leak += uhv * uhv.adjoint();
  }
  n_leak = hermitianize(n_leak);
  Eigen::LLT<CMatrix> llt(n_leak);
  if (llt.info() != Eigen::Success)
    throw NumericalError("aggregate_leakage_plus_noise: rank-deficient filter, result is not PD");
  return n_leak;
}

RateReport weighted_sum_rate(const ChannelSet& channels, const BeamformerSet& beams,
                             const SystemConfig& config, const Assignment& assignment) {
  RateReport report;
  report.num_cells = config.num_cells;
  report.users_per_cell = config.users_per_cell;
  report.num_subcarriers = config.num_subcarriers;
  report.link_rate.assign(
      static_cast<size_t>(config.num_cells) * config.num_subcarriers, 0.0);
  report.user_capacity.assign(
      static_cast<size_t>(config.num_cells) * config.users_per_cell, 0.0);
  report.cell_wsr.assign(static_cast<size_t>(config.num_cells), 0.0);

  for (int m = 0; m < config.num_cells; ++m) {
    for (int n = 0; n < config.num_subcarriers; ++n) {
      const double r = rate(sinr_matrix(channels, beams, assignment, m, n));
      report.link_rate[static_cast<size_t>(m) * config.num_subcarriers + n] = r;
      const int k = assignment.user_of(m, n);
      report.user_capacity[static_cast<size_t>(m) * config.users_per_cell + k] += r;
    }
    for (int k = 0; k < config.users_per_cell; ++k)
      report.cell_wsr[static_cast<size_t>(m)] += config.weight(m, k) * report.capacity(m, k);
    report.wsr += report.cell_wsr[static_cast<size_t>(m)];
  }
  return report;
}

double sum_capacity(const ChannelSet& channels, const BeamformerSet& beams,
                    const Assignment& assignment) {
  double total = 0.0;
  for (int m = 0; m < channels.num_cells(); ++m)
    for (int n = 0; n < channels.num_subcarriers(); ++n)
      total += rate(sinr_matrix(channels, beams, assignment, m, n));
  return total;
}

}  // namespace wsrm
