#include "wsrm/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

namespace wsrm {

std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

void dump_channels(const ChannelSet& channels, std::ostream& out) {
  for (int tx = 0; tx < channels.num_cells(); ++tx)
    for (int rx = 0; rx < channels.num_cells(); ++rx)
      for (int k = 0; k < channels.users_per_cell(); ++k)
        for (int n = 0; n < channels.num_subcarriers(); ++n) {
          const CMatrix& h = channels.at(tx, rx, k, n);
          for (Eigen::Index r = 0; r < h.rows(); ++r)
            for (Eigen::Index c = 0; c < h.cols(); ++c)
              out << tx << ',' << rx << ',' << k << ',' << n << ',' << r << ',' << c << ','
                  << format_double(h(r, c).real()) << ',' << format_double(h(r, c).imag())
                  << '\n';
        }
}

void dump_channels_to_file(const ChannelSet& channels, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  dump_channels(channels, out);
}

namespace {

struct Entry {
  int tx, rx, k, n, row, col;
  double re, im;
};

double parse_double(const std::string& token) {
  double value = 0.0;
  const auto result = std::from_chars(token.data(), token.data() + token.size(), value);
  if (result.ec != std::errc() || result.ptr != token.data() + token.size())
    throw ConfigError("channel dump: bad float '" + token + "'");
  return value;
}

int parse_int(const std::string& token) {
  int value = 0;
  const auto result = std::from_chars(token.data(), token.data() + token.size(), value);
  if (result.ec != std::errc() || result.ptr != token.data() + token.size())
    throw ConfigError("channel dump: bad integer '" + token + "'");
  return value;
}

}  // namespace

ChannelSet load_channels(std::istream& in) {
  std::vector<Entry> entries;
  int max_cell = -1, max_user = -1, max_sub = -1, max_row = -1, max_col = -1;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string token;
    std::vector<std::string> tokens;
    while (std::getline(fields, token, ',')) tokens.push_back(token);
    if (tokens.size() != 8) throw ConfigError("channel dump: expected 8 fields per line");
    Entry e{parse_int(tokens[0]), parse_int(tokens[1]), parse_int(tokens[2]),
            parse_int(tokens[3]), parse_int(tokens[4]), parse_int(tokens[5]),
            parse_double(tokens[6]), parse_double(tokens[7])};
    max_cell = std::max({max_cell, e.tx, e.rx});
    max_user = std::max(max_user, e.k);
    max_sub = std::max(max_sub, e.n);
    max_row = std::max(max_row, e.row);
    max_col = std::max(max_col, e.col);
    entries.push_back(e);
  }
  if (entries.empty()) throw ConfigError("channel dump: no entries");
  ChannelSet channels(max_cell + 1, max_user + 1, max_col + 1, max_row + 1, max_sub + 1);
  for (const Entry& e : entries)
    channels.at(e.tx, e.rx, e.k, e.n)(e.row, e.col) = Complex(e.re, e.im);
  return channels;
}

ChannelSet load_channels_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open for reading: " + path);
  return load_channels(in);
}

}  // namespace wsrm
