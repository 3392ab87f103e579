#include "rlnc/generators.hpp"

#include <set>
#include <string>
#include <vector>

#include "rlnc/errors.hpp"
#include "rlnc/gfield.hpp"

namespace rlnc {
namespace {

class ChannelNamer {
 public:
  std::string next() { return "e" + std::to_string(++count_); }

 private:
  int count_ = 0;
};

void add_stage(std::vector<Channel>& channels, ChannelNamer& names, const std::string& from,
               const std::string& to, int w) {
  for (int j = 0; j < w; ++j) channels.push_back({names.next(), from, to});
}

}  // namespace

Network gen_butterfly() {
  return Network("butterfly", {"s", "i1", "i2", "i3", "i4", "t1", "t2"}, "s", {"t1", "t2"},
                 {{"e1", "s", "i1"},
                  {"e2", "s", "i2"},
                  {"e3", "i1", "t1"},
                  {"e4", "i1", "i3"},
                  {"e5", "i2", "i3"},
                  {"e6", "i2", "t2"},
                  {"e7", "i3", "i4"},
                  {"e8", "i4", "t1"},
                  {"e9", "i4", "t2"}});
}

Network gen_plait(int w, int r) {
  if (w < 1 || r < 0) throw GeneratorError("plait needs w >= 1 and r >= 0");
  std::vector<std::string> nodes{"s"};
  for (int k = 1; k <= r; ++k) nodes.push_back("i" + std::to_string(k));
  nodes.push_back("t");
  std::vector<Channel> channels;
  ChannelNamer names;
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) add_stage(channels, names, nodes[k], nodes[k + 1], w);
  return Network("plait(" + std::to_string(w) + "," + std::to_string(r) + ")", nodes, "s", {"t"},
                 std::move(channels));
}

Network gen_plait_union(int w, int R, int l) {
  if (w < 1 || R < 0 || l < 1) throw GeneratorError("plait union needs w >= 1, R >= 0, l >= 1");
  std::vector<std::string> nodes{"s"};
  for (int k = 1; k <= R; ++k) nodes.push_back("i" + std::to_string(k));
  std::vector<std::string> sinks;
  for (int j = 1; j <= l; ++j) sinks.push_back("t" + std::to_string(j));
  nodes.insert(nodes.end(), sinks.begin(), sinks.end());

  std::vector<Channel> channels;
  ChannelNamer names;
  std::string at = "s";
  for (int k = 1; k <= R; ++k) {
    const std::string next = "i" + std::to_string(k);
    add_stage(channels, names, at, next, w);
    at = next;
  }
  add_stage(channels, names, at, sinks[0], w);
  for (int j = 1; j < l; ++j) add_stage(channels, names, "s", sinks[j], w);
  return Network("plait-union(" + std::to_string(w) + "," + std::to_string(R) + "," +
                     std::to_string(l) + ")",
                 std::move(nodes), "s", std::move(sinks), std::move(channels));
}

Network gen_layered_random(int layers, int width, int w, int sinks, std::uint64_t seed) {
  if (layers < 1 || width < 1 || w < 1 || sinks < 1)
    throw GeneratorError("random generator parameters must be positive");
  constexpr int kAttempts = 1000;
  SplitMix64 rng(seed);
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    std::vector<std::string> nodes{"s"};
    std::vector<std::vector<std::string>> layer_nodes{{"s"}};
    for (int k = 1; k <= layers; ++k) {
      auto& layer = layer_nodes.emplace_back();
      for (int j = 1; j <= width; ++j) {
        layer.push_back("v" + std::to_string(k) + "_" + std::to_string(j));
        nodes.push_back(layer.back());
      }
    }
    std::vector<std::string> sink_ids;
    for (int j = 1; j <= sinks; ++j) {
      sink_ids.push_back("t" + std::to_string(j));
      nodes.push_back(sink_ids.back());
    }

    std::vector<Channel> channels;
    ChannelNamer names;
    auto draw_inputs = [&](const std::string& node, const std::vector<std::string>& prev,
                           std::uint64_t count) {
      for (std::uint64_t i = 0; i < count; ++i)
        channels.push_back({names.next(), prev[uniform_below(rng, prev.size())], node});
    };
    for (int k = 1; k <= layers; ++k)
      for (const auto& v : layer_nodes[k])
        draw_inputs(v, layer_nodes[k - 1], 1 + uniform_below(rng, static_cast<std::uint64_t>(w) + 1));
    for (const auto& t : sink_ids)
      draw_inputs(t, layer_nodes.back(), static_cast<std::uint64_t>(w) + uniform_below(rng, 2));

    Network net("random(" + std::to_string(layers) + "," + std::to_string(width) + "," +
                    std::to_string(w) + "," + std::to_string(sinks) + "," + std::to_string(seed) + ")",
                nodes, "s", sink_ids, std::move(channels));
    bool ok = validate_network(net).valid();
    for (const auto& t : sink_ids)
      if (ok && min_cut_capacity(net, t) < w) ok = false;
    if (ok) return net;
  }
  throw GeneratorError("no instance with min-cut >= " + std::to_string(w) + " after " +
                       std::to_string(kAttempts) + " attempts; try a larger width");
}

std::optional<PlaitShape> match_plait_union(const Network& net, int w) {
  if (w < 1) return std::nullopt;
  const NodeIndex s = net.source_index();
  const std::size_t uw = static_cast<std::size_t>(w);
  PlaitShape shape;
  std::set<NodeIndex> seen{s};
  std::size_t expected_channels = 0;
  for (NodeIndex t : net.sink_indices()) {
    if (!net.out_channels(t).empty()) return std::nullopt;
    int stages = 0;
    NodeIndex at = t;
    while (at != s) {
      const auto ins = net.in_channels(at);
      if (ins.size() != uw) return std::nullopt;
      const NodeIndex prev = net.tail(ins.front());
      for (ChannelIndex c : ins)
        if (net.tail(c) != prev) return std::nullopt;
      expected_channels += uw;
      if (prev != s) {
        if (net.out_channels(prev).size() != uw || !seen.insert(prev).second) return std::nullopt;
        ++stages;
      }
      at = prev;
    }
    seen.insert(t);
    shape.stages.push_back(stages);
  }
  if (seen.size() != net.node_count() || expected_channels != net.channel_count())
    return std::nullopt;
  return shape;
}

}  // namespace rlnc
