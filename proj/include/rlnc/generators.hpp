#pragma once

#include <cstdint>
#include <optional>

#include "rlnc/network.hpp"

namespace rlnc {

/// Butterfly network: nodes s, i1..i4, t1, t2 and channels e1..e9.
Network gen_butterfly();

/// Chain s -> i1 -> ... -> ir -> t with w parallel channels per stage.
/// Channels are named e1, e2, ... stage by stage.
Network gen_plait(int w, int r);

/// l plaits sharing the source: R internal nodes on the way to t1, none for
/// t2..tl. With l = 1 this is `gen_plait(w, R)` up to naming.
Network gen_plait_union(int w, int R, int l);

/// Random layered DAG whose every sink has min-cut at least w.
///
/// `layers` layers of `width` nodes between the source and `sinks` sinks.
/// Each layer node draws 1..w+1 in-channels from random nodes of the
/// previous layer; sinks draw w or w+1 from the last layer. Candidates failing the
/// capacity check are redrawn, up to a fixed number of attempts (then
/// GeneratorError). Deterministic in `seed`.
Network gen_layered_random(int layers, int width, int w, int sinks, std::uint64_t seed);

/// Shape of a union of plaits sharing one source, as produced by
/// `gen_plait_union` / `gen_plait`: internal node count per sink.
struct PlaitShape {
  std::vector<int> stages;  // internal nodes on each sink's chain, network sink order
};

/// Recognises networks made of w-channel chains from the source, one per
/// sink, with no other channels or nodes.
std::optional<PlaitShape> match_plait_union(const Network& net, int w);

}  // namespace rlnc
