#pragma once

#include "wsrm/channel_model.hpp"

#include <iosfwd>
#include <string>

namespace wsrm {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

/// Plain-text channel dump, one line per entry:
/// m_tx,m_rx,k,n,row,col,re,im
void dump_channels(const ChannelSet& channels, std::ostream& out);
void dump_channels_to_file(const ChannelSet& channels, const std::string& path);

/// Inverse of dump_channels; dimensions are inferred from the indices.
/// Throws ConfigError on malformed input.
ChannelSet load_channels(std::istream& in);
ChannelSet load_channels_from_file(const std::string& path);

}  // namespace wsrm
