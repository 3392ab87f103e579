#pragma once

#include <cstdint>
#include <json.hpp>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rlnc/cuts.hpp"
#include "rlnc/gfield.hpp"
#include "rlnc/network.hpp"
#include "rlnc/rational.hpp"

namespace rlnc {

/// Adjacent pair (d, e) carrying one local coefficient k_{d,e}. `in` may be
/// an imaginary source input.
struct AdjacentPair {
  CutChannel in;
  ChannelIndex out = 0;

  friend bool operator==(const AdjacentPair&, const AdjacentPair&) = default;
};

/// Coefficient pairs in enumeration order: by topological position of the
/// shared node, then in-channel (d1..dw before real channels, real channels
/// in declaration order), then out-channel declaration order.
std::vector<AdjacentPair> coefficient_pairs(const Network& net, int w);

/// Sum over nodes of |In(v)| |Out(v)| with |In(s)| = w.
std::uint64_t count_free_coefficients(const Network& net, int w);

/// Global kernels keyed by channel id, including d1..dw.
struct KernelAssignment {
  std::size_t rate = 0;
  std::map<std::string, std::vector<Element>> kernels;
};

/// Coefficients keyed by (in-channel id, out-channel id).
using CoefficientMap = std::map<std::pair<std::string, std::string>, Element>;

/// Single topological pass f_e = sum_d k_{d,e} f_d. Throws NetworkError
/// naming the first pair missing from `coefficients`.
KernelAssignment propagate_kernels(const Network& net, int w, const Field& field,
                                   const CoefficientMap& coefficients);

/// w x |In(t)| matrix of in-channel kernels, columns in channel declaration order.
MatrixGF decoding_matrix(const KernelAssignment& kernels, const Network& net,
                         std::string_view sink);

struct TrialOutcome {
  std::vector<std::size_t> ranks;  // per sink, network sink order
  std::vector<bool> sink_failed;
  bool network_failed = false;
};

/// Precompiled propagation plan for one (network, rate, field).
///
/// Kernels live in a flat buffer: real channel c occupies slot c, d_j slot
/// |E| + j - 1, each slot holding w values.
class Coder {
 public:
  Coder(const Network& net, int w, Field field);

  std::size_t coefficient_count() const noexcept { return pairs_.size(); }
  const std::vector<AdjacentPair>& pairs() const noexcept { return pairs_; }
  const Field& field() const noexcept { return field_; }
  int rate() const noexcept { return w_; }
  std::size_t sink_count() const noexcept { return sink_inputs_.size(); }

  /// Kernel buffer initialised with the imaginary unit vectors.
  std::vector<std::uint32_t> make_kernels() const;
  /// Recomputes kernels of every channel at propagation position >= `from`.
  void propagate(std::span<const std::uint32_t> coefficients, std::span<std::uint32_t> kernels,
                 std::size_t from = 0) const;
  /// Smallest propagation position affected by coefficients [pair, end).
  std::size_t dirty_from(std::size_t pair) const noexcept { return dirty_suffix_[pair]; }
  std::size_t sink_rank(std::size_t sink, std::span<const std::uint32_t> kernels,
                        std::vector<std::uint32_t>& scratch) const;
  TrialOutcome outcome(std::span<const std::uint32_t> kernels,
                       std::vector<std::uint32_t>& scratch) const;
  /// Draws every coefficient in pair order from `rng`, propagates, and ranks.
  TrialOutcome run(SplitMix64& rng) const;

 private:
  struct Term {
    std::size_t coefficient;
    std::size_t slot;
  };
  int w_;
  Field field_;
  std::size_t channel_count_;
  std::vector<AdjacentPair> pairs_;
  std::vector<ChannelIndex> propagation_;        // real channels in propagation order
  std::vector<std::vector<Term>> terms_;         // parallel to propagation_
  std::vector<std::size_t> dirty_suffix_;        // size pairs + 1
  std::vector<std::vector<std::size_t>> sink_inputs_;  // kernel slots per sink
};

TrialOutcome run_trial(const Network& net, int w, const Field& field, SplitMix64& rng);

/// Seed of trial `index`: mix(seed ^ mix(index + 0x9e3779b97f4a7c15)) with
/// mix the SplitMix64 finalizer.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) noexcept;

struct Proportion {
  std::uint64_t count = 0;
  double estimate = 0;
  double half_width = 0;
  double low = 0;
  double high = 0;
  /// "normal" or "wilson" (used when fewer than 5 successes or failures).
  std::string method;
};

/// 95% interval for count/trials.
Proportion proportion_interval(std::uint64_t count, std::uint64_t trials);

struct MonteCarloResult {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint32_t q = 0;
  int rate = 0;
  std::vector<std::string> sinks;
  std::vector<Proportion> sink_failure;
  Proportion network_failure;

  nlohmann::ordered_json to_json() const;
  /// One row per sink plus a "*" row for the network.
  std::string to_csv() const;
  friend bool operator==(const MonteCarloResult& a, const MonteCarloResult& b) {
    return a.to_json() == b.to_json();
  }
};

/// Throws std::invalid_argument when trials == 0. Result is independent of `workers`.
MonteCarloResult monte_carlo(const Network& net, int w, const Field& field, std::uint64_t trials,
                             std::uint64_t seed, unsigned workers = 1);

struct ExactResult {
  std::uint32_t q = 0;
  int rate = 0;
  std::uint64_t coefficients = 0;
  std::uint64_t total = 0;  // q^coefficients
  std::vector<std::string> sinks;
  std::vector<std::uint64_t> sink_failures;
  std::uint64_t network_failures = 0;
  std::vector<Rational> sink_probability;
  Rational network_probability;

  nlohmann::ordered_json to_json() const;
  std::string to_csv() const;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 100'000'000;

/// Counts failures over all q^K assignments. Assignment index N maps to
/// coefficient digits base q with pair 0 most significant, so the last pair
/// turns fastest. Throws EnumerationCapError when q^K > cap.
ExactResult enumerate_exact(const Network& net, int w, const Field& field,
                            std::uint64_t cap = kDefaultEnumerationCap, unsigned workers = 1);

/// Throws CapacityError naming the first sink with C_t < w.
void require_rate(const Network& net, int w);

}  // namespace rlnc
