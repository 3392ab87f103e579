#pragma once

#include <cstdint>
#include <functional>
#include <json.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rlnc/cuts.hpp"
#include "rlnc/network.hpp"
#include "rlnc/rational.hpp"

namespace rlnc {

/// One evaluated bound. `value` is the raw expression even when some factor
/// of the product falls outside [0, 1]; `valid` is false in that case and the
/// value must not be read as a probability.
struct BoundEntry {
  std::string id;
  std::string description;
  Rational value;
  bool valid = true;
  /// Set when the instance is known to meet this bound with equality.
  std::optional<bool> tight;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();

  double approx() const { return to_double(value); }
};

struct BoundReport {
  std::vector<BoundEntry> entries;

  const BoundEntry* find(std::string_view id) const;
  nlohmann::ordered_json to_json() const;
  /// Columns: bound_id,numerator,denominator,float,valid,inputs.
  std::string to_csv() const;
};

/// a = 1 - prod_{h=1}^{w} (1 - q^-h): probability a uniform w x w matrix is singular.
Rational compute_a(std::uint64_t q, std::uint64_t w);

/// prod_{i=1}^{n-k0} (1 - q^-i); throws std::invalid_argument when k0 > n.
Rational lemma1_probability(std::uint64_t q, std::uint64_t n, std::uint64_t k0);

/// 1 - (1-a)^l prod_{k=0}^{R-1} [1 - (m_k - n_k) a].
BoundEntry bound_network_cutwise(const CutSequenceSet& seq, std::uint64_t q);

/// 1 - (1-a)^l (1-la)^b (1-ua) with S = l b + u, 0 <= u < l. `id` names the
/// use: "thm2" (S = sum r_i), "thm3" (S = n), "cor1" (S = sum R_i).
BoundEntry bound_network_split(std::uint64_t S, std::uint64_t l, std::uint64_t q, std::uint64_t w,
                               std::string id = "thm2");

/// 1 - (1-a)^l (1-la)^m for m >= |J|.
BoundEntry bound_network_internal_count(std::uint64_t m, std::uint64_t l, std::uint64_t q,
                                        std::uint64_t w);

/// 1 - prod_k prod_{i=1}^{w - profile[k]} (1 - q^-i). Always valid.
BoundEntry bound_sink_cutwise(std::span<const std::size_t> profile, std::uint64_t q,
                              std::uint64_t w);

/// 1 - (1-a)^{base+1}; base is r, n or |J|. The same value is the worst-case
/// sink failure probability over networks with |J| = base, attained by plaits.
BoundEntry bound_sink_simple(std::uint64_t base, std::uint64_t q, std::uint64_t w,
                             std::string id = "thm7");

struct LowerBounds {
  std::vector<std::string> sinks;
  std::vector<int> capacities;
  std::vector<int> slack;  // delta_t = C_t - w
  std::vector<Rational> per_sink;
  int network_slack = 0;  // delta = min_t delta_t
  Rational network;
};

/// 1/q^{delta_t + 1} per sink and 1/q^{delta + 1} for the network. Throws
/// CapacityError when w exceeds some C_t.
LowerBounds lower_bounds(const Network& net, int w, std::uint64_t q);

struct AsymptoticConstants {
  std::uint64_t lambda;  // l + n
  std::uint64_t omega;   // l (1 + m)
};

AsymptoticConstants asymptotic_constants(std::uint64_t n, std::uint64_t l, std::uint64_t m);

struct SweepRow {
  std::uint64_t q;
  Rational bound;
  Rational scaled;  // q * bound
  bool valid;
};

/// Evaluates `bound(q)` at every field order and scales by q. Invalid
/// evaluations are kept as marked rows.
std::vector<SweepRow> asymptotic_sweep(const std::function<BoundEntry(std::uint64_t)>& bound,
                                       std::span<const std::uint64_t> field_orders);

nlohmann::ordered_json rational_json(const Rational& r);

}  // namespace rlnc
