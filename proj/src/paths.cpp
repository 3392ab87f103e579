// Disjoint-path search: unit-capacity max flow, exhaustive minimisation of
// internal nodes, and the min-cost-flow fallback.

#include <algorithm>
#include <deque>
#include <limits>

#include "rlnc/errors.hpp"
#include "rlnc/network.hpp"

namespace rlnc {
namespace {

// Edmonds-Karp on unit capacities. BFS scans forward residual arcs in
// out-channel order, then backward arcs in in-channel order.
class UnitFlow {
 public:
  UnitFlow(const Network& net, NodeIndex s, NodeIndex t)
      : net_(net), s_(s), t_(t), flow_(net.channel_count(), 0) {}

  bool augment() {
    const std::size_t n = net_.node_count();
    constexpr ChannelIndex kNone = std::numeric_limits<ChannelIndex>::max();
    std::vector<ChannelIndex> via(n, kNone);
    std::vector<bool> forward(n, true);
    std::vector<bool> seen(n, false);
    std::deque<NodeIndex> queue{s_};
    seen[s_] = true;
    while (!queue.empty() && !seen[t_]) {
      const NodeIndex v = queue.front();
      queue.pop_front();
      for (ChannelIndex c : net_.out_channels(v)) {
        const NodeIndex h = net_.head(c);
        if (flow_[c] == 0 && !seen[h]) {
          seen[h] = true;
          via[h] = c;
          forward[h] = true;
          if (h == t_) break;
          queue.push_back(h);
        }
      }
      if (seen[t_]) break;
      for (ChannelIndex c : net_.in_channels(v)) {
        const NodeIndex tl = net_.tail(c);
        if (flow_[c] == 1 && !seen[tl]) {
          seen[tl] = true;
          via[tl] = c;
          forward[tl] = false;
          queue.push_back(tl);
        }
      }
    }
    if (!seen[t_]) return false;
    for (NodeIndex v = t_; v != s_;) {
      const ChannelIndex c = via[v];
      if (forward[v]) {
        flow_[c] = 1;
        v = net_.tail(c);
      } else {
        flow_[c] = 0;
        v = net_.head(c);
      }
    }
    ++value_;
    return true;
  }

  int value() const noexcept { return value_; }
  const std::vector<char>& flow() const noexcept { return flow_; }

 private:
  const Network& net_;
  NodeIndex s_;
  NodeIndex t_;
  std::vector<char> flow_;
  int value_ = 0;
};

// Splits an acyclic unit flow into paths, one per saturated source channel,
// following the first unused saturated out-channel at every node.
std::vector<std::vector<ChannelIndex>> decompose(const Network& net, NodeIndex t,
                                                 const std::vector<char>& flow) {
  std::vector<bool> used(net.channel_count(), false);
  std::vector<std::vector<ChannelIndex>> paths;
  for (ChannelIndex first : net.out_channels(net.source_index())) {
    if (!flow[first]) continue;
    std::vector<ChannelIndex> path{first};
    used[first] = true;
    NodeIndex at = net.head(first);
    while (at != t) {
      ChannelIndex next = std::numeric_limits<ChannelIndex>::max();
      for (ChannelIndex c : net.out_channels(at))
        if (flow[c] && !used[c]) {
          next = c;
          break;
        }
      if (next == std::numeric_limits<ChannelIndex>::max())
        throw NetworkError("flow decomposition failed at node \"" + net.nodes()[at] + "\"");
      used[next] = true;
      path.push_back(next);
      at = net.head(next);
    }
    paths.push_back(std::move(path));
  }
  return paths;
}

NodeIndex require_sink(const Network& net, std::string_view sink) {
  net.sink_position(sink);
  return net.node_index(sink);
}

int max_flow(const Network& net, NodeIndex t) {
  UnitFlow f(net, net.source_index(), t);
  while (f.augment()) {
  }
  return f.value();
}

// Successive shortest paths on the node-split graph: node v becomes
// v_in -> v_out with cost 1 per unit for intermediate nodes.
std::vector<char> min_traversal_flow(const Network& net, NodeIndex t, int w) {
  struct Arc {
    std::size_t to;
    int cap;
    long cost;
    std::size_t rev;
    ChannelIndex channel;  // max() for split arcs
  };
  const std::size_t n = 2 * net.node_count();
  constexpr ChannelIndex kSplit = std::numeric_limits<ChannelIndex>::max();
  std::vector<std::vector<Arc>> g(n);
  auto add = [&](std::size_t a, std::size_t b, int cap, long cost, ChannelIndex ch) {
    g[a].push_back({b, cap, cost, g[b].size(), ch});
    g[b].push_back({a, 0, -cost, g[a].size() - 1, ch});
  };
  const NodeIndex s = net.source_index();
  for (NodeIndex v = 0; v < net.node_count(); ++v)
    add(2 * v, 2 * v + 1, w, (v == s || v == t) ? 0 : 1, kSplit);
  for (ChannelIndex c = 0; c < net.channel_count(); ++c)
    add(2 * net.tail(c) + 1, 2 * net.head(c), 1, 0, c);

  const std::size_t src = 2 * s + 1;
  const std::size_t dst = 2 * t;
  constexpr long kInf = std::numeric_limits<long>::max() / 4;
  for (int unit = 0; unit < w; ++unit) {
    std::vector<long> dist(n, kInf);
    std::vector<std::pair<std::size_t, std::size_t>> parent(n, {n, 0});
    dist[src] = 0;
    // Bellman-Ford; residual arcs may carry negative cost.
    for (std::size_t round = 0; round < n; ++round) {
      bool changed = false;
      for (std::size_t a = 0; a < n; ++a) {
        if (dist[a] == kInf) continue;
        for (std::size_t i = 0; i < g[a].size(); ++i) {
          const Arc& arc = g[a][i];
          if (arc.cap > 0 && dist[a] + arc.cost < dist[arc.to]) {
            dist[arc.to] = dist[a] + arc.cost;
            parent[arc.to] = {a, i};
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (dist[dst] == kInf) break;
    for (std::size_t v = dst; v != src;) {
      auto [a, i] = parent[v];
      Arc& arc = g[a][i];
      arc.cap -= 1;
      g[arc.to][arc.rev].cap += 1;
      v = a;
    }
  }
  std::vector<char> flow(net.channel_count(), 0);
  for (std::size_t a = 0; a < n; ++a)
    for (const Arc& arc : g[a])
      if (arc.channel != kSplit && arc.cost == 0 && arc.to == 2 * net.head(arc.channel) &&
          a == 2 * net.tail(arc.channel) + 1 && arc.cap == 0)
        flow[arc.channel] = 1;
  return flow;
}

// Branch-and-bound over sets of w pairwise channel-disjoint s -> t paths.
class MinInternalSearch {
 public:
  MinInternalSearch(const Network& net, NodeIndex t, int w, std::uint64_t budget)
      : net_(net), t_(t), w_(w), budget_(budget) {}

  // Returns false when the budget ran out.
  bool run(std::size_t incumbent) {
    best_count_ = incumbent;
    if (!enumerate_paths()) return false;
    in_use_.assign(net_.channel_count(), false);
    node_hits_.assign(net_.node_count(), 0);
    return choose(0, 0);
  }

  std::uint64_t examined() const noexcept { return examined_; }
  const std::vector<std::vector<ChannelIndex>>& best() const noexcept { return best_; }

 private:
  bool enumerate_paths() {
    // Only step into nodes that can still reach t.
    reaches_.assign(net_.node_count(), false);
    std::vector<NodeIndex> stack{t_};
    reaches_[t_] = true;
    while (!stack.empty()) {
      NodeIndex v = stack.back();
      stack.pop_back();
      for (ChannelIndex c : net_.in_channels(v))
        if (!reaches_[net_.tail(c)]) {
          reaches_[net_.tail(c)] = true;
          stack.push_back(net_.tail(c));
        }
    }
    std::vector<ChannelIndex> current;
    return walk(net_.source_index(), current);
  }

  bool walk(NodeIndex at, std::vector<ChannelIndex>& current) {
    if (++examined_ > budget_) return false;
    if (at == t_) {
      paths_.push_back(current);
      std::vector<NodeIndex> inner;
      for (std::size_t k = 0; k + 1 < current.size(); ++k) inner.push_back(net_.head(current[k]));
      inner_.push_back(std::move(inner));
      return true;
    }
    for (ChannelIndex c : net_.out_channels(at)) {
      if (!reaches_[net_.head(c)]) continue;
      current.push_back(c);
      const bool ok = walk(net_.head(c), current);
      current.pop_back();
      if (!ok) return false;
    }
    return true;
  }

  bool choose(std::size_t start, int depth) {
    if (depth == w_) {
      if (distinct_ < best_count_) {
        best_count_ = distinct_;
        best_ = chosen_;
      }
      return true;
    }
    for (std::size_t i = start; i < paths_.size(); ++i) {
      if (++examined_ > budget_) return false;
      const auto& path = paths_[i];
      if (std::any_of(path.begin(), path.end(), [&](ChannelIndex c) { return in_use_[c]; }))
        continue;
      for (ChannelIndex c : path) in_use_[c] = true;
      for (NodeIndex v : inner_[i])
        if (node_hits_[v]++ == 0) ++distinct_;
      chosen_.push_back(path);
      bool ok = true;
      if (distinct_ < best_count_) ok = choose(i + 1, depth + 1);
      chosen_.pop_back();
      for (NodeIndex v : inner_[i])
        if (--node_hits_[v] == 0) --distinct_;
      for (ChannelIndex c : path) in_use_[c] = false;
      if (!ok) return false;
    }
    return true;
  }

  const Network& net_;
  NodeIndex t_;
  int w_;
  std::uint64_t budget_;
  std::uint64_t examined_ = 0;
  std::vector<bool> reaches_;
  std::vector<std::vector<ChannelIndex>> paths_;
  std::vector<std::vector<NodeIndex>> inner_;
  std::vector<bool> in_use_;
  std::vector<int> node_hits_;
  std::size_t distinct_ = 0;
  std::vector<std::vector<ChannelIndex>> chosen_;
  std::size_t best_count_ = 0;
  std::vector<std::vector<ChannelIndex>> best_;
};

void sort_by_first_channel(std::vector<std::vector<ChannelIndex>>& paths) {
  std::sort(paths.begin(), paths.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

}  // namespace

int min_cut_capacity(const Network& net, std::string_view sink) {
  return max_flow(net, require_sink(net, sink));
}

PathCollection find_disjoint_paths(const Network& net, std::string_view sink, int w) {
  const NodeIndex t = require_sink(net, sink);
  if (w < 1) throw NetworkError("rate must be positive");
  UnitFlow flow(net, net.source_index(), t);
  while (flow.value() < w && flow.augment()) {
  }
  if (flow.value() < w) throw CapacityError(std::string(sink), max_flow(net, t), w);
  return make_path_collection(net, t, decompose(net, t, flow.flow()));
}

PathSelection select_min_internal_paths(const Network& net, std::string_view sink, int w,
                                        std::uint64_t budget) {
  const NodeIndex t = require_sink(net, sink);
  PathCollection first = find_disjoint_paths(net, sink, w);

  MinInternalSearch search(net, t, w, budget);
  const bool complete = search.run(first.internal_count());

  PathSelection result{first, complete, search.examined(), complete ? "exhaustive" : "first-found"};
  if (!search.best().empty()) {
    auto paths = search.best();
    sort_by_first_channel(paths);
    result.collection = make_path_collection(net, t, std::move(paths));
    if (!complete) result.method = "exhaustive";
  }
  if (!complete) {
    auto mcf = make_path_collection(net, t, decompose(net, t, min_traversal_flow(net, t, w)));
    if (mcf.internal_count() < result.collection.internal_count()) {
      result.collection = std::move(mcf);
      result.method = "min-cost-flow";
    }
  }
  return result;
}

}  // namespace rlnc
