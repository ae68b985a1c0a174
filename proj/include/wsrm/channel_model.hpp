#pragma once

#include "wsrm/types.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace wsrm {

/// Static description of one network instance: dimensions, per-cell power
/// budgets, user weights, and the iteration constants of the two-phase
/// optimization. Immutable after validate().
struct SystemConfig {
  int num_cells = 2;        // M
  int users_per_cell = 2;   // K
  int tx_antennas = 4;      // Nt
  int rx_antennas = 2;      // Nr
  int num_subcarriers = 64; // N

  /// One dBW value per cell (a single entry is broadcast to all cells).
  std::vector<double> power_budget_dbw = {20.0};

  /// w_mk in cell-major, user-minor order; size M*K (a single entry is
  /// broadcast to all users).
  std::vector<double> user_weights = {0.25, 0.54, 0.67, 0.79};

  double convergence_tol = 0.01;
  int ia_iters = 10;      // sweeps per IA restart
  int ia_restarts = 100;  // random restarts in the IA phase
  int wsrm_max_iters = 20;
  std::uint64_t rng_seed = 1;

  /// Throws ConfigError unless all invariants hold (Nr >= 2, Nt >= Nr,
  /// K <= N, positive weights/budgets/tolerances/counts).
  void validate() const;

  double linear_power(int cell) const;     // 10^(dBW/10)
  double weight(int cell, int user) const; // w_mk
};

/// Non-overlapping subcarrier-to-user map within each cell.
class Assignment {
 public:
  Assignment(int num_cells, int users_per_cell, int num_subcarriers,
             std::vector<int> user_of_flat);

  int user_of(int cell, int subcarrier) const {
    return user_of_[static_cast<size_t>(cell) * num_subcarriers_ + subcarrier];
  }
  const std::vector<int>& subcarriers_of(int cell, int user) const {
    return subcarriers_of_[static_cast<size_t>(cell) * users_per_cell_ + user];
  }
  int num_cells() const { return num_cells_; }
  int users_per_cell() const { return users_per_cell_; }
  int num_subcarriers() const { return num_subcarriers_; }

 private:
  int num_cells_, users_per_cell_, num_subcarriers_;
  std::vector<int> user_of_;                      // (m, n) -> k
  std::vector<std::vector<int>> subcarriers_of_;  // (m, k) -> sorted n list
};

/// All channel matrices H, shape Nr x Nt, indexed by transmitting cell,
/// receiving (cell, user), and subcarrier.
class ChannelSet {
 public:
  ChannelSet(int num_cells, int users_per_cell, int tx_antennas, int rx_antennas,
             int num_subcarriers);

  const CMatrix& at(int tx_cell, int rx_cell, int user, int subcarrier) const {
    return h_[index(tx_cell, rx_cell, user, subcarrier)];
  }
  CMatrix& at(int tx_cell, int rx_cell, int user, int subcarrier) {
    return h_[index(tx_cell, rx_cell, user, subcarrier)];
  }

  int num_cells() const { return num_cells_; }
  int users_per_cell() const { return users_per_cell_; }
  int tx_antennas() const { return tx_antennas_; }
  int rx_antennas() const { return rx_antennas_; }
  int num_subcarriers() const { return num_subcarriers_; }
  size_t matrix_count() const { return h_.size(); }

  bool operator==(const ChannelSet& other) const;

 private:
  size_t index(int tx_cell, int rx_cell, int user, int subcarrier) const {
    return ((static_cast<size_t>(tx_cell) * num_cells_ + rx_cell) * users_per_cell_ + user) *
               num_subcarriers_ +
           subcarrier;
  }
  int num_cells_, users_per_cell_, tx_antennas_, rx_antennas_, num_subcarriers_;
  std::vector<CMatrix> h_;
};

/// Transmit beamformers V, shape Nt x Nr, one per (cell, subcarrier); the
/// served user is implied by the assignment.
class BeamformerSet {
 public:
  BeamformerSet() = default;
  BeamformerSet(int num_cells, int num_subcarriers, int tx_antennas, int rx_antennas);

  const CMatrix& at(int cell, int subcarrier) const {
    return v_[static_cast<size_t>(cell) * num_subcarriers_ + subcarrier];
  }
  CMatrix& at(int cell, int subcarrier) {
    return v_[static_cast<size_t>(cell) * num_subcarriers_ + subcarrier];
  }

  /// Sum over subcarriers of trace(V V^H) for one cell.
  double cell_power(int cell) const;
  /// Uniform per-cell rescale so cell_power(m) == budget(m) exactly.
  void normalize_cell_power(const std::vector<double>& linear_budgets);

  int num_cells() const { return num_cells_; }
  int num_subcarriers() const { return num_subcarriers_; }
  bool operator==(const BeamformerSet& other) const;

 private:
  int num_cells_ = 0, num_subcarriers_ = 0;
  std::vector<CMatrix> v_;
};

/// Deterministic substream engine: one independent generator per
/// (purpose, index...) tuple, so generation order never matters.
enum class RngPurpose : std::uint64_t { channels = 1, init_beams = 2 };
std::mt19937_64 substream(std::uint64_t seed, RngPurpose purpose, std::uint64_t a = 0,
                          std::uint64_t b = 0, std::uint64_t c = 0, std::uint64_t d = 0);

/// i.i.d. CN(0,1) channels: real and imaginary parts each N(0, 1/2).
ChannelSet generate_channels(const SystemConfig& config);

/// f(m,n) = n mod K, identical across cells. Requires K <= N.
Assignment round_robin_assignment(const SystemConfig& config);

/// Complex-Gaussian beamformers scaled per cell to full power budget.
/// `salt` selects an independent draw (IA restart index).
BeamformerSet random_feasible_beamformers(const SystemConfig& config, std::uint64_t salt = 0);

std::vector<double> linear_power_budgets(const SystemConfig& config);

}  // namespace wsrm
