#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rlnc/network.hpp"

namespace rlnc {

/// Channel reference inside a cut: a real channel, or imaginary source
/// input d_j (stored as j, 1-based).
struct CutChannel {
  bool imaginary = false;
  std::size_t index = 0;  // ChannelIndex, or j for d_j

  friend bool operator==(const CutChannel&, const CutChannel&) = default;
};

/// Cut sequences CUT_{i,k} for every sink over the union of its chosen paths.
///
/// Node i_0 is the source and i_1..i_R are the internal nodes of the union
/// of all path collections in topological order. Cuts are positional: slot j
/// of every cut for sink i holds the current channel of path j.
struct CutSequenceSet {
  std::size_t rate = 0;
  /// i_0 = s, then i_1..i_R.
  std::vector<NodeIndex> order;
  /// Sinks in network order.
  std::vector<NodeIndex> sinks;
  /// cuts[i][k] for k = 0..R+1.
  std::vector<std::vector<std::vector<CutChannel>>> cuts;
  /// out_size[i][k] = |CUT_{i,k} \ In(i_k)| for k = 0..R; entry R+1 is taken
  /// against In(t_i) and is therefore 0.
  std::vector<std::vector<std::size_t>> out_size;
  /// M_k and N_k as sink positions, k = 0..R.
  std::vector<std::vector<std::size_t>> advancing;
  std::vector<std::vector<std::size_t>> finishing;
  /// r_i: distinct internal nodes of the path collection for sink i.
  std::vector<std::size_t> internal_counts;
  /// Path collections the cuts were built from, one per sink.
  std::vector<PathCollection> collections;

  std::size_t R() const noexcept { return order.empty() ? 0 : order.size() - 1; }
  std::size_t m(std::size_t k) const { return advancing.at(k).size(); }
  std::size_t n(std::size_t k) const { return finishing.at(k).size(); }
  std::size_t internal_total() const;
};

/// Cut construction: at node i_k every sink whose cut meets In(i_k) moves
/// those slots to the next channel on their paths. Throws NetworkError if
/// the collections do not cover every sink exactly once or disagree with
/// the network.
CutSequenceSet build_cut_sequences(const Network& net, std::vector<PathCollection> collections);

/// |CUT_{t,k}^out| at the r_t + 1 nodes where the cut for `sink` advances.
std::vector<std::size_t> sink_cut_profile(const CutSequenceSet& seq, const Network& net,
                                          std::string_view sink);

/// Display name of a cut channel ("d1", or the channel id).
std::string cut_channel_name(const Network& net, const CutChannel& c);

/// Text listing of every CUT_{i,k}, its out-set, and M_k / N_k.
std::string explain_cuts(const CutSequenceSet& seq, const Network& net);

}  // namespace rlnc
