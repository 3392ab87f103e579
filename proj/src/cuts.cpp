#include "rlnc/cuts.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "rlnc/errors.hpp"

namespace rlnc {

std::size_t CutSequenceSet::internal_total() const {
  return std::accumulate(internal_counts.begin(), internal_counts.end(), std::size_t{0});
}

namespace {

void check_identities(const CutSequenceSet& seq) {
  const std::size_t R = seq.R();
  const std::size_t l = seq.sinks.size();
  std::size_t sum_m = 0, sum_n = 0;
  for (std::size_t k = 0; k <= R; ++k) {
    sum_m += seq.m(k);
    sum_n += seq.n(k);
    if (seq.n(k) > seq.m(k)) throw std::logic_error("cut sequence: N_k not contained in M_k");
  }
  if (sum_n != l) throw std::logic_error("cut sequence: sum of n_k differs from sink count");
  if (sum_m != seq.internal_total() + l)
    throw std::logic_error("cut sequence: sum of m_k differs from sum of r_i + l");
  if (seq.m(R) != seq.n(R)) throw std::logic_error("cut sequence: m_R differs from n_R");
}

}  // namespace

CutSequenceSet build_cut_sequences(const Network& net, std::vector<PathCollection> collections) {
  const auto sinks = net.sink_indices();
  if (collections.size() != sinks.size())
    throw NetworkError("need exactly one path collection per sink");
  std::vector<PathCollection> by_sink;
  by_sink.reserve(sinks.size());
  for (NodeIndex t : sinks) {
    auto it = std::find_if(collections.begin(), collections.end(),
                           [t](const PathCollection& pc) { return pc.sink() == t; });
    if (it == collections.end())
      throw NetworkError("no path collection for sink \"" + net.nodes()[t] + "\"");
    by_sink.push_back(*it);
  }
  const std::size_t w = by_sink.front().rate();
  for (const auto& pc : by_sink) {
    if (pc.rate() != w) throw NetworkError("path collections disagree on the rate");
    // Re-validate against this network; collections may come from elsewhere.
    make_path_collection(net, pc.sink(), pc.paths());
  }

  const auto topo = topological_order_indices(net);
  std::vector<std::size_t> position(net.node_count());
  for (std::size_t i = 0; i < topo.size(); ++i) position[topo[i]] = i;

  std::vector<NodeIndex> inner;
  for (const auto& pc : by_sink)
    inner.insert(inner.end(), pc.internal_nodes().begin(), pc.internal_nodes().end());
  std::sort(inner.begin(), inner.end(),
            [&](NodeIndex a, NodeIndex b) { return position[a] < position[b]; });
  inner.erase(std::unique(inner.begin(), inner.end()), inner.end());

  CutSequenceSet seq;
  seq.rate = w;
  seq.order.push_back(net.source_index());
  seq.order.insert(seq.order.end(), inner.begin(), inner.end());
  seq.sinks.assign(sinks.begin(), sinks.end());
  const std::size_t R = seq.R();
  const std::size_t l = sinks.size();
  seq.cuts.resize(l);
  seq.out_size.resize(l);
  seq.advancing.resize(R + 1);
  seq.finishing.resize(R + 1);

  for (std::size_t i = 0; i < l; ++i) {
    const auto& paths = by_sink[i].paths();
    seq.internal_counts.push_back(by_sink[i].internal_count());
    // pos[j] = -1 while slot j still holds d_{j+1}.
    std::vector<long> pos(w, -1);
    auto current = [&](std::size_t j) -> CutChannel {
      if (pos[j] < 0) return {true, j + 1};
      return {false, paths[j][static_cast<std::size_t>(pos[j])]};
    };
    auto head_of = [&](std::size_t j) -> NodeIndex {
      return pos[j] < 0 ? net.source_index() : net.head(paths[j][static_cast<std::size_t>(pos[j])]);
    };
    auto snapshot = [&] {
      std::vector<CutChannel> cut;
      for (std::size_t j = 0; j < w; ++j) cut.push_back(current(j));
      return cut;
    };
    auto is_final = [&] {
      for (std::size_t j = 0; j < w; ++j)
        if (pos[j] + 1 != static_cast<long>(paths[j].size())) return false;
      return true;
    };

    seq.cuts[i].push_back(snapshot());
    for (std::size_t k = 0; k <= R; ++k) {
      const NodeIndex node = seq.order[k];
      std::size_t out = 0;
      bool advanced = false;
      for (std::size_t j = 0; j < w; ++j) {
        if (head_of(j) != node) {
          ++out;
          continue;
        }
        if (pos[j] + 1 >= static_cast<long>(paths[j].size()))
          throw NetworkError("path " + std::to_string(j + 1) + " to \"" + net.nodes()[sinks[i]] +
                             "\" has no channel after node \"" + net.nodes()[node] + "\"");
        ++pos[j];
        advanced = true;
      }
      seq.out_size[i].push_back(out);
      seq.cuts[i].push_back(snapshot());
      if (advanced) {
        seq.advancing[k].push_back(i);
        if (is_final()) seq.finishing[k].push_back(i);
      }
    }
    if (!is_final())
      throw NetworkError("cut sequence for \"" + net.nodes()[sinks[i]] +
                         "\" did not reach the last channels of its paths");
    seq.out_size[i].push_back(0);
  }
  seq.collections = std::move(by_sink);
  check_identities(seq);
  return seq;
}

std::vector<std::size_t> sink_cut_profile(const CutSequenceSet& seq, const Network& net,
                                          std::string_view sink) {
  const std::size_t i = net.sink_position(sink);
  if (i >= seq.sinks.size() || seq.sinks[i] != net.node_index(sink))
    throw NetworkError("sink \"" + std::string(sink) + "\" is not part of this cut sequence");
  std::vector<std::size_t> profile;
  for (std::size_t k = 0; k <= seq.R(); ++k) {
    const auto& adv = seq.advancing[k];
    if (std::find(adv.begin(), adv.end(), i) != adv.end()) profile.push_back(seq.out_size[i][k]);
  }
  return profile;
}

std::string cut_channel_name(const Network& net, const CutChannel& c) {
  if (c.imaginary) return "d" + std::to_string(c.index);
  return net.channels()[c.index].id;
}

std::string explain_cuts(const CutSequenceSet& seq, const Network& net) {
  std::ostringstream os;
  auto set_of = [&](const std::vector<CutChannel>& cut) {
    std::string s = "{";
    for (std::size_t j = 0; j < cut.size(); ++j) s += (j ? "," : "") + cut_channel_name(net, cut[j]);
    return s + "}";
  };
  auto sink_set = [&](const std::vector<std::size_t>& members) {
    if (members.empty()) return std::string("∅");
    std::string s = "{";
    for (std::size_t j = 0; j < members.size(); ++j)
      s += (j ? "," : "") + net.nodes()[seq.sinks[members[j]]];
    return s + "}";
  };

  os << "order:";
  for (std::size_t k = 0; k < seq.order.size(); ++k)
    os << (k ? " < " : " ") << "i" << k << "=" << net.nodes()[seq.order[k]];
  os << "\n";
  const std::size_t R = seq.R();
  for (std::size_t i = 0; i < seq.sinks.size(); ++i) {
    const NodeIndex stop = seq.sinks[i];
    for (std::size_t k = 0; k <= R + 1; ++k) {
      const auto& cut = seq.cuts[i][k];
      const NodeIndex at = k <= R ? seq.order[k] : stop;
      std::vector<CutChannel> out;
      for (const auto& c : cut) {
        const NodeIndex head = c.imaginary ? net.source_index() : net.head(c.index);
        if (head != at) out.push_back(c);
      }
      os << "CUT_{" << i + 1 << "," << k << "}=" << set_of(cut) << ", CUT_{" << i + 1 << "," << k
         << "}^out=" << (out.empty() ? "∅" : set_of(out)) << "\n";
    }
  }
  for (std::size_t k = 0; k <= R; ++k)
    os << "M_" << k << "=" << sink_set(seq.advancing[k]) << ", N_" << k << "="
       << sink_set(seq.finishing[k]) << "  (m_" << k << "=" << seq.m(k) << ", n_" << k << "="
       << seq.n(k) << ")\n";
  return os.str();
}

}  // namespace rlnc
