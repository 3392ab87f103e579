#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rlnc {

using NodeIndex = std::size_t;
using ChannelIndex = std::size_t;

struct Channel {
  std::string id;
  std::string tail;
  std::string head;

  friend bool operator==(const Channel&, const Channel&) = default;
};

/// Acyclic directed multigraph with one source and an ordered sink list.
///
/// The constructor only checks referential integrity (unique ids, known
/// endpoints, source and sinks present) and throws ParseError otherwise.
/// Acyclicity and reachability are reported by `validate_network`, so a
/// document describing a broken network can still be loaded and inspected.
///
/// Channel order is significant: every search in this library scans
/// channels in declaration order.
class Network {
 public:
  Network(std::string name, std::vector<std::string> nodes, std::string source,
          std::vector<std::string> sinks, std::vector<Channel> channels);

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& nodes() const noexcept { return nodes_; }
  const std::vector<Channel>& channels() const noexcept { return channels_; }
  const std::string& source() const noexcept { return nodes_[source_]; }
  std::vector<std::string> sinks() const;

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t channel_count() const noexcept { return channels_.size(); }
  NodeIndex source_index() const noexcept { return source_; }
  std::span<const NodeIndex> sink_indices() const noexcept { return sinks_; }

  std::optional<NodeIndex> find_node(std::string_view id) const;
  std::optional<ChannelIndex> find_channel(std::string_view id) const;
  /// Throws NetworkError for unknown ids.
  NodeIndex node_index(std::string_view id) const;
  ChannelIndex channel_index(std::string_view id) const;
  /// Throws NetworkError unless `id` names a sink; returns its position in the sink list.
  std::size_t sink_position(std::string_view id) const;

  NodeIndex tail(ChannelIndex c) const noexcept { return tails_[c]; }
  NodeIndex head(ChannelIndex c) const noexcept { return heads_[c]; }
  /// In(i) and Out(i), in channel declaration order.
  std::span<const ChannelIndex> in_channels(NodeIndex v) const noexcept { return in_[v]; }
  std::span<const ChannelIndex> out_channels(NodeIndex v) const noexcept { return out_[v]; }

  bool is_sink(NodeIndex v) const noexcept { return sink_flag_[v]; }
  /// J = V \ ({s} ∪ T), in node declaration order.
  std::vector<NodeIndex> internal_nodes() const;

  friend bool operator==(const Network& a, const Network& b) {
    return a.name_ == b.name_ && a.nodes_ == b.nodes_ && a.source_ == b.source_ &&
           a.sinks_ == b.sinks_ && a.channels_ == b.channels_;
  }

 private:
  std::string name_;
  std::vector<std::string> nodes_;
  std::vector<Channel> channels_;
  NodeIndex source_ = 0;
  std::vector<NodeIndex> sinks_;
  std::vector<bool> sink_flag_;
  std::vector<NodeIndex> tails_;
  std::vector<NodeIndex> heads_;
  std::vector<std::vector<ChannelIndex>> in_;
  std::vector<std::vector<ChannelIndex>> out_;
  std::unordered_map<std::string, NodeIndex> node_lookup_;
  std::unordered_map<std::string, ChannelIndex> channel_lookup_;
};

enum class ViolationKind { kCycle, kUnreachableSink, kSourceInChannel };

struct Violation {
  ViolationKind kind;
  std::string subject;  // node or channel id the violation is about
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool valid() const noexcept { return violations.empty(); }
};

const char* to_string(ViolationKind kind) noexcept;

ValidationReport validate_network(const Network& net);

/// Kahn's algorithm; among ready nodes the one declared first is emitted
/// first. Throws NetworkError when the graph has a cycle.
std::vector<NodeIndex> topological_order_indices(const Network& net);
std::vector<std::string> topological_order(const Network& net);

/// Maximum number of channel-disjoint s -> t paths. Throws NetworkError when
/// `sink` is not a sink.
int min_cut_capacity(const Network& net, std::string_view sink);

/// w channel-disjoint source-to-sink paths for one sink.
///
/// Only constructible through `make_path_collection`, which enforces path
/// contiguity, endpoints, channel-disjointness, and acyclic paths.
class PathCollection {
 public:
  NodeIndex sink() const noexcept { return sink_; }
  std::size_t rate() const noexcept { return paths_.size(); }
  const std::vector<std::vector<ChannelIndex>>& paths() const noexcept { return paths_; }
  /// Distinct intermediate nodes of all paths (neither s nor this sink), ascending index.
  const std::vector<NodeIndex>& internal_nodes() const noexcept { return internal_; }
  std::size_t internal_count() const noexcept { return internal_.size(); }

  std::vector<std::vector<std::string>> path_ids(const Network& net) const;
  std::vector<std::string> internal_node_ids(const Network& net) const;

  friend bool operator==(const PathCollection&, const PathCollection&) = default;

 private:
  friend PathCollection make_path_collection(const Network&, NodeIndex,
                                             std::vector<std::vector<ChannelIndex>>);
  NodeIndex sink_ = 0;
  std::vector<std::vector<ChannelIndex>> paths_;
  std::vector<NodeIndex> internal_;
};

/// Throws NetworkError when any path-collection invariant fails.
PathCollection make_path_collection(const Network& net, NodeIndex sink,
                                    std::vector<std::vector<ChannelIndex>> paths);
PathCollection make_path_collection(const Network& net, std::string_view sink,
                                    const std::vector<std::vector<std::string>>& paths);

/// Deterministic augmenting-path search (BFS scanning channels in
/// declaration order); paths are listed in order of their first channel.
/// Throws CapacityError when w > C_t.
PathCollection find_disjoint_paths(const Network& net, std::string_view sink, int w);

struct PathSelection {
  PathCollection collection;
  /// True when an exhaustive search proved the internal-node count minimal.
  bool certified = false;
  /// Search nodes visited by the exhaustive search.
  std::uint64_t examined = 0;
  /// "exhaustive", "min-cost-flow" or "first-found": which route produced `collection`.
  std::string method;
};

inline constexpr std::uint64_t kDefaultSearchBudget = 1'000'000;

/// Path collection minimising the number of distinct internal nodes.
///
/// Exhaustive branch-and-bound over collections of disjoint paths while the
/// budget lasts. Past the budget the result is the best of: the partial
/// search, a min-cost flow charging one unit per node traversal, and the
/// first-found collection. It never uses more internal nodes than
/// `find_disjoint_paths`.
PathSelection select_min_internal_paths(const Network& net, std::string_view sink, int w,
                                        std::uint64_t budget = kDefaultSearchBudget);

/// Network document: {"name", "nodes", "source", "sinks", "channels": [{"id","tail","head"}]}.
Network parse_network(std::string_view text);
std::string serialize_network(const Network& net);
Network load_network(const std::string& path);
void save_network(const Network& net, const std::string& path);

}  // namespace rlnc
