#include "rlnc/network.hpp"

#include <algorithm>
#include <queue>
#include <regex>
#include <set>

#include "rlnc/errors.hpp"

namespace rlnc {

namespace {

bool is_reserved_channel_id(const std::string& id) {
  static const std::regex reserved("d[0-9]+");
  return std::regex_match(id, reserved);
}

}  // namespace

Network::Network(std::string name, std::vector<std::string> nodes, std::string source,
                 std::vector<std::string> sinks, std::vector<Channel> channels)
    : name_(std::move(name)), nodes_(std::move(nodes)), channels_(std::move(channels)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].empty()) throw ParseError("/nodes/" + std::to_string(i), "empty node id");
    if (!node_lookup_.emplace(nodes_[i], i).second)
      throw ParseError("/nodes/" + std::to_string(i), "duplicate node id \"" + nodes_[i] + "\"");
  }
  if (source.empty()) throw ParseError("/source", "missing source");
  auto src = node_lookup_.find(source);
  if (src == node_lookup_.end()) throw ParseError("/source", "unknown node \"" + source + "\"");
  source_ = src->second;

  if (sinks.empty()) throw ParseError("/sinks", "at least one sink is required");
  sink_flag_.assign(nodes_.size(), false);
  for (std::size_t i = 0; i < sinks.size(); ++i) {
    const auto loc = "/sinks/" + std::to_string(i);
    auto it = node_lookup_.find(sinks[i]);
    if (it == node_lookup_.end()) throw ParseError(loc, "unknown node \"" + sinks[i] + "\"");
    if (it->second == source_) throw ParseError(loc, "the source cannot be a sink");
    if (sink_flag_[it->second]) throw ParseError(loc, "duplicate sink \"" + sinks[i] + "\"");
    sink_flag_[it->second] = true;
    sinks_.push_back(it->second);
  }

  in_.resize(nodes_.size());
  out_.resize(nodes_.size());
  for (std::size_t c = 0; c < channels_.size(); ++c) {
    const auto loc = "/channels/" + std::to_string(c);
    const Channel& ch = channels_[c];
    if (ch.id.empty()) throw ParseError(loc + "/id", "empty channel id");
    if (is_reserved_channel_id(ch.id))
      throw ParseError(loc + "/id", "channel id \"" + ch.id + "\" is reserved for imaginary source inputs");
    if (!channel_lookup_.emplace(ch.id, c).second)
      throw ParseError(loc + "/id", "duplicate channel id \"" + ch.id + "\"");
    auto t = node_lookup_.find(ch.tail);
    if (t == node_lookup_.end()) throw ParseError(loc + "/tail", "unknown node \"" + ch.tail + "\"");
    auto h = node_lookup_.find(ch.head);
    if (h == node_lookup_.end()) throw ParseError(loc + "/head", "unknown node \"" + ch.head + "\"");
    tails_.push_back(t->second);
    heads_.push_back(h->second);
    out_[t->second].push_back(c);
    in_[h->second].push_back(c);
  }
}

std::vector<std::string> Network::sinks() const {
  std::vector<std::string> out;
  for (auto v : sinks_) out.push_back(nodes_[v]);
  return out;
}

std::optional<NodeIndex> Network::find_node(std::string_view id) const {
  auto it = node_lookup_.find(std::string(id));
  if (it == node_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<ChannelIndex> Network::find_channel(std::string_view id) const {
  auto it = channel_lookup_.find(std::string(id));
  if (it == channel_lookup_.end()) return std::nullopt;
  return it->second;
}

NodeIndex Network::node_index(std::string_view id) const {
  if (auto v = find_node(id)) return *v;
  throw NetworkError("unknown node \"" + std::string(id) + "\"");
}

ChannelIndex Network::channel_index(std::string_view id) const {
  if (auto c = find_channel(id)) return *c;
  throw NetworkError("unknown channel \"" + std::string(id) + "\"");
}

std::size_t Network::sink_position(std::string_view id) const {
  auto v = find_node(id);
  if (v) {
    auto it = std::find(sinks_.begin(), sinks_.end(), *v);
    if (it != sinks_.end()) return static_cast<std::size_t>(it - sinks_.begin());
  }
  throw NetworkError("\"" + std::string(id) + "\" is not a sink");
}

std::vector<NodeIndex> Network::internal_nodes() const {
  std::vector<NodeIndex> out;
  for (NodeIndex v = 0; v < nodes_.size(); ++v)
    if (v != source_ && !sink_flag_[v]) out.push_back(v);
  return out;
}

const char* to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::kCycle:
      return "cycle";
    case ViolationKind::kUnreachableSink:
      return "unreachable_sink";
    case ViolationKind::kSourceInChannel:
      return "source_in_channel";
  }
  return "unknown";
}

namespace {

// Kahn's algorithm with declaration-order tie-breaking. Returns the nodes
// that could be ordered; fewer than |V| means a cycle.
std::vector<NodeIndex> kahn(const Network& net) {
  const std::size_t n = net.node_count();
  std::vector<std::size_t> indegree(n);
  for (NodeIndex v = 0; v < n; ++v) indegree[v] = net.in_channels(v).size();
  std::priority_queue<NodeIndex, std::vector<NodeIndex>, std::greater<>> ready;
  for (NodeIndex v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.push(v);
  std::vector<NodeIndex> order;
  order.reserve(n);
  while (!ready.empty()) {
    NodeIndex v = ready.top();
    ready.pop();
    order.push_back(v);
    for (ChannelIndex c : net.out_channels(v))
      if (--indegree[net.head(c)] == 0) ready.push(net.head(c));
  }
  return order;
}

}  // namespace

ValidationReport validate_network(const Network& net) {
  ValidationReport report;
  const auto order = kahn(net);
  if (order.size() != net.node_count()) {
    std::vector<bool> placed(net.node_count(), false);
    for (auto v : order) placed[v] = true;
    for (NodeIndex v = 0; v < net.node_count(); ++v)
      if (!placed[v]) {
        report.violations.push_back({ViolationKind::kCycle, net.nodes()[v],
                                     "node \"" + net.nodes()[v] + "\" lies on or behind a cycle"});
      }
  }
  for (ChannelIndex c : net.in_channels(net.source_index()))
    report.violations.push_back({ViolationKind::kSourceInChannel, net.channels()[c].id,
                                 "channel \"" + net.channels()[c].id + "\" enters the source"});

  std::vector<bool> seen(net.node_count(), false);
  std::vector<NodeIndex> stack{net.source_index()};
  seen[net.source_index()] = true;
  while (!stack.empty()) {
    NodeIndex v = stack.back();
    stack.pop_back();
    for (ChannelIndex c : net.out_channels(v))
      if (!seen[net.head(c)]) {
        seen[net.head(c)] = true;
        stack.push_back(net.head(c));
      }
  }
  for (NodeIndex t : net.sink_indices())
    if (!seen[t])
      report.violations.push_back({ViolationKind::kUnreachableSink, net.nodes()[t],
                                   "sink \"" + net.nodes()[t] + "\" is unreachable from the source"});
  return report;
}

std::vector<NodeIndex> topological_order_indices(const Network& net) {
  auto order = kahn(net);
  if (order.size() != net.node_count()) throw NetworkError("network contains a cycle");
  return order;
}

std::vector<std::string> topological_order(const Network& net) {
  std::vector<std::string> out;
  for (auto v : topological_order_indices(net)) out.push_back(net.nodes()[v]);
  return out;
}

PathCollection make_path_collection(const Network& net, NodeIndex sink,
                                    std::vector<std::vector<ChannelIndex>> paths) {
  if (sink >= net.node_count() || !net.is_sink(sink))
    throw NetworkError("path collection target is not a sink");
  const std::string& sink_id = net.nodes()[sink];
  std::vector<bool> used(net.channel_count(), false);
  std::set<NodeIndex> internal;
  for (std::size_t j = 0; j < paths.size(); ++j) {
    const auto& path = paths[j];
    const auto where = "path " + std::to_string(j + 1) + " to " + sink_id;
    if (path.empty()) throw NetworkError(where + " is empty");
    std::set<NodeIndex> visited{net.source_index()};
    NodeIndex at = net.source_index();
    for (ChannelIndex c : path) {
      if (c >= net.channel_count()) throw NetworkError(where + " references an unknown channel");
      const auto& id = net.channels()[c].id;
      if (net.tail(c) != at)
        throw NetworkError(where + " is not contiguous at channel \"" + id + "\"");
      if (used[c]) throw NetworkError("channel \"" + id + "\" is used by two paths to " + sink_id);
      used[c] = true;
      at = net.head(c);
      if (!visited.insert(at).second)
        throw NetworkError(where + " revisits node \"" + net.nodes()[at] + "\"");
      if (at != sink) internal.insert(at);
    }
    if (at != sink) throw NetworkError(where + " does not end at the sink");
  }
  PathCollection pc;
  pc.sink_ = sink;
  pc.paths_ = std::move(paths);
  pc.internal_.assign(internal.begin(), internal.end());
  return pc;
}

PathCollection make_path_collection(const Network& net, std::string_view sink,
                                    const std::vector<std::vector<std::string>>& paths) {
  net.sink_position(sink);
  std::vector<std::vector<ChannelIndex>> idx;
  for (const auto& path : paths) {
    auto& p = idx.emplace_back();
    for (const auto& id : path) p.push_back(net.channel_index(id));
  }
  return make_path_collection(net, net.node_index(sink), std::move(idx));
}

std::vector<std::vector<std::string>> PathCollection::path_ids(const Network& net) const {
  std::vector<std::vector<std::string>> out;
  for (const auto& path : paths_) {
    auto& p = out.emplace_back();
    for (auto c : path) p.push_back(net.channels()[c].id);
  }
  return out;
}

std::vector<std::string> PathCollection::internal_node_ids(const Network& net) const {
  std::vector<std::string> out;
  for (auto v : internal_) out.push_back(net.nodes()[v]);
  return out;
}

}  // namespace rlnc
