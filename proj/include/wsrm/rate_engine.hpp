#pragma once

#include "wsrm/channel_model.hpp"

#include <vector>

namespace wsrm {

/// Receive filters U, shape Nr x Nr, one per (cell, subcarrier).
class FilterSet {
 public:
  FilterSet() = default;
  FilterSet(int num_cells, int num_subcarriers, int rx_antennas);

  const CMatrix& at(int cell, int subcarrier) const {
    return u_[static_cast<size_t>(cell) * num_subcarriers_ + subcarrier];
  }
  CMatrix& at(int cell, int subcarrier) {
    return u_[static_cast<size_t>(cell) * num_subcarriers_ + subcarrier];
  }

  static FilterSet identity(int num_cells, int num_subcarriers, int rx_antennas);

  int num_cells() const { return num_cells_; }
  int num_subcarriers() const { return num_subcarriers_; }
  bool operator==(const FilterSet& other) const;

 private:
  int num_cells_ = 0, num_subcarriers_ = 0;
  std::vector<CMatrix> u_;
};

/// Interference-plus-noise covariance and SINR matrix of one link.
struct LinkStatistics {
  CMatrix interference_covariance;  // X, Hermitian, eigenvalues >= 1
  CMatrix sinr;                     // gamma, Hermitian PSD
};

/// Per-link rates, per-user capacities, and the weighted sum-rate.
struct RateReport {
  int num_cells = 0;
  int users_per_cell = 0;
  int num_subcarriers = 0;
  std::vector<double> link_rate;      // (m, n) flat; user implied by assignment
  std::vector<double> user_capacity;  // (m, k) flat, cell-major
  std::vector<double> cell_wsr;       // weighted per-cell sums
  double wsr = 0.0;
  std::vector<double> wsr_trajectory;  // filled by iterative runs

  double link(int cell, int subcarrier) const {
    return link_rate[static_cast<size_t>(cell) * num_subcarriers + subcarrier];
  }
  double capacity(int cell, int user) const {
    return user_capacity[static_cast<size_t>(cell) * users_per_cell + user];
  }
};

/// X = I + sum over interfering cells of H V V^H H^H at the user served on
/// (m, n). Hermitian with eigenvalues >= 1.
CMatrix interference_covariance(const ChannelSet& channels, const BeamformerSet& beams,
                                const Assignment& assignment, int cell, int subcarrier);

/// gamma = V^H H^H X^{-1} H V.
CMatrix sinr_matrix(const ChannelSet& channels, const BeamformerSet& beams,
                    const Assignment& assignment, int cell, int subcarrier);

LinkStatistics link_statistics(const ChannelSet& channels, const BeamformerSet& beams,
                               const Assignment& assignment, int cell, int subcarrier);

/// R = log2 det(I + gamma), bits per channel use.
double rate(const CMatrix& gamma);

/// Capacity-preserving receive filter U = X^{-1} H V.
CMatrix mmse_filter(const ChannelSet& channels, const BeamformerSet& beams,
                    const Assignment& assignment, int cell, int subcarrier);

/// MMSE filters for every (cell, subcarrier).
FilterSet mmse_filters(const ChannelSet& channels, const BeamformerSet& beams,
                       const Assignment& assignment);

/// R = log2 det(I + (U^H X U)^{-1} U^H H V V^H H^H U). Throws NumericalError
/// when U^H X U is singular (degenerate filter).
double filtered_rate(const ChannelSet& channels, const BeamformerSet& beams,
                     const FilterSet& filters, const Assignment& assignment, int cell,
                     int subcarrier);

/// High-SINR split log2 det(U^H H V V^H H^H U) - log2 det(U^H X U). Throws
/// NumericalError when either determinant argument is singular.
double high_sinr_rate(const ChannelSet& channels, const BeamformerSet& beams,
                      const FilterSet& filters, const Assignment& assignment, int cell,
                      int subcarrier);

/// Aggregate leakage-plus-noise at the user served on (victim_cell, n), with
/// interference from excluded_cell and the victim's own cell left out:
/// N = sum_{i not in {excluded, victim}} U^H H V V^H H^H U + U^H U.
CMatrix aggregate_leakage_plus_noise(const ChannelSet& channels, const BeamformerSet& beams,
                                     const FilterSet& filters, const Assignment& assignment,
                                     int victim_cell, int subcarrier, int excluded_cell);

/// Evaluates every link rate, per-user capacities, and the weighted sum.
RateReport weighted_sum_rate(const ChannelSet& channels, const BeamformerSet& beams,
                             const SystemConfig& config, const Assignment& assignment);

/// Unweighted sum of all link rates.
double sum_capacity(const ChannelSet& channels, const BeamformerSet& beams,
                    const Assignment& assignment);

}  // namespace wsrm
