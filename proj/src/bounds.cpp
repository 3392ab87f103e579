#include "rlnc/bounds.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

#include "rlnc/errors.hpp"

namespace rlnc {
namespace {

using nlohmann::ordered_json;

Rational inverse_power(std::uint64_t q, std::uint64_t h) {
  return Rational(BigInt(1), boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(h)));
}

// prod_{h=1}^{count} (1 - q^-h)
Rational full_rank_probability(std::uint64_t q, std::uint64_t count) {
  Rational p = 1;
  for (std::uint64_t h = 1; h <= count; ++h) p *= 1 - inverse_power(q, h);
  return p;
}

bool in_unit_interval(const Rational& x) { return x >= 0 && x <= 1; }

void require_field(std::uint64_t q) {
  if (q < 2) throw std::invalid_argument("field order must be at least 2");
}

std::string format_double(double v) {
  // Shortest text that reads back to the same double.
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

ordered_json rational_json(const Rational& r) {
  return ordered_json{{"numerator", numerator_string(r)},
                      {"denominator", denominator_string(r)},
                      {"float", to_double(r)}};
}

const BoundEntry* BoundReport::find(std::string_view id) const {
  for (const auto& e : entries)
    if (e.id == id) return &e;
  return nullptr;
}

ordered_json BoundReport::to_json() const {
  ordered_json out = ordered_json::array();
  for (const auto& e : entries) {
    ordered_json j;
    j["bound_id"] = e.id;
    j["description"] = e.description;
    j["numerator"] = numerator_string(e.value);
    j["denominator"] = denominator_string(e.value);
    j["float"] = e.approx();
    j["valid"] = e.valid;
    // Only a valid bound is presented as a probability.
    j["probability"] = e.valid ? ordered_json(e.approx()) : ordered_json(nullptr);
    if (e.tight) j["tight"] = *e.tight;
    j["inputs"] = e.inputs;
    out.push_back(std::move(j));
  }
  return out;
}

std::string BoundReport::to_csv() const {
  std::ostringstream os;
  os << "bound_id,numerator,denominator,float,valid,inputs\n";
  for (const auto& e : entries) {
    std::string inputs = e.inputs.dump();
    std::string quoted;
    for (char c : inputs) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
    os << e.id << ',' << numerator_string(e.value) << ',' << denominator_string(e.value) << ','
       << format_double(e.approx()) << ',' << (e.valid ? "true" : "false") << ",\"" << quoted
       << "\"\n";
  }
  return os.str();
}

Rational compute_a(std::uint64_t q, std::uint64_t w) {
  require_field(q);
  return 1 - full_rank_probability(q, w);
}

Rational lemma1_probability(std::uint64_t q, std::uint64_t n, std::uint64_t k0) {
  require_field(q);
  if (k0 > n) throw std::invalid_argument("subspace dimension exceeds ambient dimension");
  return full_rank_probability(q, n - k0);
}

BoundEntry bound_network_cutwise(const CutSequenceSet& seq, std::uint64_t q) {
  const std::uint64_t w = seq.rate;
  const std::uint64_t l = seq.sinks.size();
  const Rational a = compute_a(q, w);
  const std::size_t R = seq.R();
  Rational product = pow(1 - a, l);
  bool valid = true;
  ordered_json diffs = ordered_json::array();
  for (std::size_t k = 0; k < R; ++k) {
    const std::uint64_t d = seq.m(k) - seq.n(k);
    const Rational factor = 1 - Rational(d) * a;
    valid = valid && in_unit_interval(factor);
    product *= factor;
    diffs.push_back(d);
  }
  BoundEntry e;
  e.id = "thm1";
  e.description = "network failure, cut-sequence bound";
  e.value = 1 - product;
  e.valid = valid;
  e.inputs = {{"q", q}, {"w", w}, {"l", l}, {"R", R}, {"m_minus_n", diffs}};
  return e;
}

BoundEntry bound_network_split(std::uint64_t S, std::uint64_t l, std::uint64_t q, std::uint64_t w,
                               std::string id) {
  if (l < 1) throw std::invalid_argument("sink count must be positive");
  const Rational a = compute_a(q, w);
  const std::uint64_t b = S / l;
  const std::uint64_t u = S - l * b;
  const Rational grouped = 1 - Rational(l) * a;
  const Rational rest = 1 - Rational(u) * a;
  BoundEntry e;
  e.id = std::move(id);
  e.description = e.id == "thm3"   ? "network failure, bound from n >= sum r_i"
                  : e.id == "cor1" ? "network failure, minimal internal-node paths"
                                   : "network failure, bound from sum r_i";
  e.value = 1 - pow(1 - a, l) * pow(grouped, b) * rest;
  e.valid = (b == 0 || in_unit_interval(grouped)) && in_unit_interval(rest);
  e.inputs = {{"q", q}, {"w", w}, {"l", l}, {"S", S}, {"b", b}, {"u", u}};
  return e;
}

BoundEntry bound_network_internal_count(std::uint64_t m, std::uint64_t l, std::uint64_t q,
                                        std::uint64_t w) {
  if (l < 1) throw std::invalid_argument("sink count must be positive");
  const Rational a = compute_a(q, w);
  const Rational grouped = 1 - Rational(l) * a;
  BoundEntry e;
  e.id = "thm4";
  e.description = "network failure, bound from internal node count";
  e.value = 1 - pow(1 - a, l) * pow(grouped, m);
  e.valid = m == 0 || in_unit_interval(grouped);
  e.inputs = {{"q", q}, {"w", w}, {"l", l}, {"m", m}};
  return e;
}

BoundEntry bound_sink_cutwise(std::span<const std::size_t> profile, std::uint64_t q,
                              std::uint64_t w) {
  require_field(q);
  Rational product = 1;
  for (std::size_t out : profile) {
    if (out > w) throw std::invalid_argument("cut profile entry exceeds the rate");
    product *= full_rank_probability(q, w - out);
  }
  BoundEntry e;
  e.id = "thm6";
  e.description = "sink failure, cut-profile bound";
  e.value = 1 - product;
  e.valid = true;
  e.inputs = {{"q", q},
              {"w", w},
              {"r", profile.empty() ? 0 : profile.size() - 1},
              {"profile", std::vector<std::size_t>(profile.begin(), profile.end())}};
  return e;
}

BoundEntry bound_sink_simple(std::uint64_t base, std::uint64_t q, std::uint64_t w, std::string id) {
  const Rational a = compute_a(q, w);
  BoundEntry e;
  e.id = std::move(id);
  e.description = e.id == "thm8"   ? "sink failure, bound from n >= r"
                  : e.id == "thm9" ? "worst-case sink failure over |J| = m"
                                   : "sink failure, bound from r";
  e.value = 1 - pow(1 - a, base + 1);
  e.valid = true;
  e.inputs = {{"q", q}, {"w", w}, {"exponent_base", base}};
  return e;
}

LowerBounds lower_bounds(const Network& net, int w, std::uint64_t q) {
  require_field(q);
  LowerBounds lb;
  lb.network_slack = -1;
  for (const auto& t : net.sinks()) {
    const int c = min_cut_capacity(net, t);
    if (c < w) throw CapacityError(t, c, w);
    lb.sinks.push_back(t);
    lb.capacities.push_back(c);
    lb.slack.push_back(c - w);
    lb.per_sink.push_back(inverse_power(q, static_cast<std::uint64_t>(c - w + 1)));
    if (lb.network_slack < 0 || c - w < lb.network_slack) lb.network_slack = c - w;
  }
  lb.network = inverse_power(q, static_cast<std::uint64_t>(lb.network_slack + 1));
  return lb;
}

AsymptoticConstants asymptotic_constants(std::uint64_t n, std::uint64_t l, std::uint64_t m) {
  if (l < 1) throw std::invalid_argument("sink count must be positive");
  return {l + n, l * (1 + m)};
}

std::vector<SweepRow> asymptotic_sweep(const std::function<BoundEntry(std::uint64_t)>& bound,
                                       std::span<const std::uint64_t> field_orders) {
  std::vector<SweepRow> rows;
  for (std::uint64_t q : field_orders) {
    require_field(q);
    BoundEntry e = bound(q);
    rows.push_back({q, e.value, Rational(q) * e.value, e.valid});
  }
  return rows;
}

}  // namespace rlnc
