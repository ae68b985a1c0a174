#include "wsrm/channel_model.hpp"

#include <cmath>
#include <string>

namespace wsrm {

void SystemConfig::validate() const {
  if (num_cells < 1) throw ConfigError("num_cells must be positive");
  if (users_per_cell < 1) throw ConfigError("users_per_cell must be positive");
  if (tx_antennas < 1) throw ConfigError("tx_antennas must be positive");
  if (rx_antennas < 2) throw ConfigError("rx_antennas must be >= 2");
  if (tx_antennas < rx_antennas)
    throw ConfigError("tx_antennas must be >= rx_antennas for rank-Nr covariance recovery");
  if (num_subcarriers < 1) throw ConfigError("num_subcarriers must be positive");
  if (users_per_cell > num_subcarriers)
    throw ConfigError("users_per_cell exceeds num_subcarriers; assignment impossible");
  if (power_budget_dbw.empty() ||
      (power_budget_dbw.size() != 1 &&
       power_budget_dbw.size() != static_cast<size_t>(num_cells)))
    throw ConfigError("power_budget_dbw needs 1 or num_cells entries");
  for (double p : power_budget_dbw)
    if (!std::isfinite(p)) throw ConfigError("power budget must be finite");
  if (user_weights.empty() ||
      (user_weights.size() != 1 &&
       user_weights.size() != static_cast<size_t>(num_cells) * users_per_cell))
    throw ConfigError("user_weights needs 1 or num_cells*users_per_cell entries");
  for (double w : user_weights)
    if (!(w > 0.0) || !std::isfinite(w)) throw ConfigError("user weights must be > 0");
  if (!(convergence_tol > 0.0)) throw ConfigError("convergence_tol must be > 0");
  if (ia_iters < 1) throw ConfigError("ia_iters must be positive");
  if (ia_restarts < 1) throw ConfigError("ia_restarts must be positive");
  if (wsrm_max_iters < 1) throw ConfigError("wsrm_max_iters must be positive");
}

double SystemConfig::linear_power(int cell) const {
  const double dbw =
      power_budget_dbw.size() == 1 ? power_budget_dbw[0] : power_budget_dbw[static_cast<size_t>(cell)];
  return std::pow(10.0, dbw / 10.0);
}

double SystemConfig::weight(int cell, int user) const {
  if (user_weights.size() == 1) return user_weights[0];
  return user_weights[static_cast<size_t>(cell) * users_per_cell + user];
}

std::vector<double> linear_power_budgets(const SystemConfig& config) {
  std::vector<double> out(static_cast<size_t>(config.num_cells));
  for (int m = 0; m < config.num_cells; ++m) out[static_cast<size_t>(m)] = config.linear_power(m);
  return out;
}

Assignment::Assignment(int num_cells, int users_per_cell, int num_subcarriers,
                       std::vector<int> user_of_flat)
    : num_cells_(num_cells),
      users_per_cell_(users_per_cell),
      num_subcarriers_(num_subcarriers),
      user_of_(std::move(user_of_flat)),
      subcarriers_of_(static_cast<size_t>(num_cells) * users_per_cell) {
  if (user_of_.size() != static_cast<size_t>(num_cells) * num_subcarriers)
    throw ConfigError("assignment map has wrong size");
  for (int m = 0; m < num_cells_; ++m)
    for (int n = 0; n < num_subcarriers_; ++n) {
      const int k = user_of(m, n);
      if (k < 0 || k >= users_per_cell_) throw ConfigError("assignment maps to invalid user");
      subcarriers_of_[static_cast<size_t>(m) * users_per_cell_ + k].push_back(n);
    }
}

ChannelSet::ChannelSet(int num_cells, int users_per_cell, int tx_antennas, int rx_antennas,
                       int num_subcarriers)
    : num_cells_(num_cells),
      users_per_cell_(users_per_cell),
      tx_antennas_(tx_antennas),
      rx_antennas_(rx_antennas),
      num_subcarriers_(num_subcarriers),
      h_(static_cast<size_t>(num_cells) * num_cells * users_per_cell * num_subcarriers,
         CMatrix::Zero(rx_antennas, tx_antennas)) {}

bool ChannelSet::operator==(const ChannelSet& other) const {
  if (h_.size() != other.h_.size()) return false;
  for (size_t i = 0; i < h_.size(); ++i)
    if (h_[i] != other.h_[i]) return false;
  return true;
}

BeamformerSet::BeamformerSet(int num_cells, int num_subcarriers, int tx_antennas, int rx_antennas)
    : num_cells_(num_cells),
      num_subcarriers_(num_subcarriers),
      v_(static_cast<size_t>(num_cells) * num_subcarriers, CMatrix::Zero(tx_antennas, rx_antennas)) {}

double BeamformerSet::cell_power(int cell) const {
  double power = 0.0;
  for (int n = 0; n < num_subcarriers_; ++n) power += at(cell, n).squaredNorm();
  return power;
}

void BeamformerSet::normalize_cell_power(const std::vector<double>& linear_budgets) {
  for (int m = 0; m < num_cells_; ++m) {
    const double power = cell_power(m);
    if (power <= 0.0) continue;
    const double scale = std::sqrt(linear_budgets[static_cast<size_t>(m)] / power);
    for (int n = 0; n < num_subcarriers_; ++n) at(m, n) *= scale;
  }
}

bool BeamformerSet::operator==(const BeamformerSet& other) const {
  if (v_.size() != other.v_.size()) return false;
  for (size_t i = 0; i < v_.size(); ++i)
    if (v_[i] != other.v_[i]) return false;
  return true;
}

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void fill_complex_gaussian(CMatrix& m, std::mt19937_64& engine) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double re = normal(engine);
      const double im = normal(engine);
      m(r, c) = Complex(re, im);
    }
}

}  // namespace

std::mt19937_64 substream(std::uint64_t seed, RngPurpose purpose, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c, std::uint64_t d) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ static_cast<std::uint64_t>(purpose));
  h = mix64(h ^ a);
  h = mix64(h ^ b);
  h = mix64(h ^ c);
  h = mix64(h ^ d);
  return std::mt19937_64(h);
}

ChannelSet generate_channels(const SystemConfig& config) {
  config.validate();
  ChannelSet channels(config.num_cells, config.users_per_cell, config.tx_antennas,
                      config.rx_antennas, config.num_subcarriers);
  for (int tx = 0; tx < config.num_cells; ++tx)
    for (int rx = 0; rx < config.num_cells; ++rx)
      for (int k = 0; k < config.users_per_cell; ++k)
        for (int n = 0; n < config.num_subcarriers; ++n) {
          auto engine = substream(config.rng_seed, RngPurpose::channels,
                                  static_cast<std::uint64_t>(tx), static_cast<std::uint64_t>(rx),
                                  static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(n));
          fill_complex_gaussian(channels.at(tx, rx, k, n), engine);
        }
  return channels;
}

Assignment round_robin_assignment(const SystemConfig& config) {
  config.validate();
  std::vector<int> map(static_cast<size_t>(config.num_cells) * config.num_subcarriers);
  for (int m = 0; m < config.num_cells; ++m)
    for (int n = 0; n < config.num_subcarriers; ++n)
      map[static_cast<size_t>(m) * config.num_subcarriers + n] = n % config.users_per_cell;
  return Assignment(config.num_cells, config.users_per_cell, config.num_subcarriers,
                    std::move(map));
}

BeamformerSet random_feasible_beamformers(const SystemConfig& config, std::uint64_t salt) {
  config.validate();
  BeamformerSet beams(config.num_cells, config.num_subcarriers, config.tx_antennas,
                      config.rx_antennas);
  for (int m = 0; m < config.num_cells; ++m)
    for (int n = 0; n < config.num_subcarriers; ++n) {
      auto engine = substream(config.rng_seed, RngPurpose::init_beams, salt,
                              static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(n));
      fill_complex_gaussian(beams.at(m, n), engine);
    }
  beams.normalize_cell_power(linear_power_budgets(config));
  return beams;
}

}  // namespace wsrm
