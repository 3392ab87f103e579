#include "rlnc/sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rlnc/errors.hpp"

namespace rlnc {
namespace {

using nlohmann::ordered_json;

constexpr double kZ95 = 1.959963984540054;

std::vector<std::size_t> topo_positions(const Network& net, std::vector<NodeIndex>& order) {
  order = topological_order_indices(net);
  std::vector<std::size_t> position(net.node_count());
  for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;
  return position;
}

std::string csv_double(double v) {
  // Shortest text that reads back to the same double.
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Runs body(worker, begin, end) over `workers` contiguous slices of [0, n).
template <typename Body>
void parallel_ranges(std::uint64_t n, unsigned workers, Body body) {
  workers = std::max(1u, workers);
  if (workers == 1 || n < 2) {
    body(0u, std::uint64_t{0}, n);
    return;
  }
  std::vector<std::thread> threads;
  const std::uint64_t chunk = n / workers;
  const std::uint64_t extra = n % workers;
  std::uint64_t begin = 0;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned k = 0; k < workers; ++k) {
    const std::uint64_t end = begin + chunk + (k < extra ? 1 : 0);
    threads.emplace_back([&, k, begin, end] {
      try {
        body(k, begin, end);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    });
    begin = end;
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct Tally {
  std::vector<std::uint64_t> sink;
  std::uint64_t network = 0;

  explicit Tally(std::size_t sinks) : sink(sinks, 0) {}
  void add(const TrialOutcome& o) {
    for (std::size_t i = 0; i < sink.size(); ++i) sink[i] += o.sink_failed[i] ? 1 : 0;
    network += o.network_failed ? 1 : 0;
  }
  void merge(const Tally& other) {
    for (std::size_t i = 0; i < sink.size(); ++i) sink[i] += other.sink[i];
    network += other.network;
  }
};

ordered_json proportion_json(const Proportion& p) {
  return ordered_json{{"failures", p.count},    {"estimate", p.estimate}, {"half_width", p.half_width},
                      {"ci_low", p.low},         {"ci_high", p.high},      {"interval", p.method}};
}

}  // namespace

std::vector<AdjacentPair> coefficient_pairs(const Network& net, int w) {
  if (w < 1) throw std::invalid_argument("rate must be positive");
  std::vector<NodeIndex> order;
  topo_positions(net, order);
  std::vector<AdjacentPair> pairs;
  for (NodeIndex v : order) {
    std::vector<CutChannel> ins;
    if (v == net.source_index()) {
      for (int j = 1; j <= w; ++j) ins.push_back({true, static_cast<std::size_t>(j)});
    } else {
      for (ChannelIndex c : net.in_channels(v)) ins.push_back({false, c});
    }
    for (const auto& d : ins)
      for (ChannelIndex e : net.out_channels(v)) pairs.push_back({d, e});
  }
  return pairs;
}

std::uint64_t count_free_coefficients(const Network& net, int w) {
  return coefficient_pairs(net, w).size();
}

Coder::Coder(const Network& net, int w, Field field)
    : w_(w), field_(std::move(field)), channel_count_(net.channel_count()) {
  pairs_ = coefficient_pairs(net, w);
  std::vector<NodeIndex> order;
  const auto position = topo_positions(net, order);

  propagation_.resize(net.channel_count());
  for (ChannelIndex c = 0; c < net.channel_count(); ++c) propagation_[c] = c;
  std::stable_sort(propagation_.begin(), propagation_.end(), [&](ChannelIndex a, ChannelIndex b) {
    return position[net.tail(a)] < position[net.tail(b)];
  });
  std::vector<std::size_t> channel_pos(net.channel_count());
  for (std::size_t i = 0; i < propagation_.size(); ++i) channel_pos[propagation_[i]] = i;

  terms_.resize(propagation_.size());
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    const auto& pair = pairs_[p];
    const std::size_t slot = pair.in.imaginary ? channel_count_ + pair.in.index - 1 : pair.in.index;
    terms_[channel_pos[pair.out]].push_back({p, slot});
  }
  dirty_suffix_.assign(pairs_.size() + 1, propagation_.size());
  for (std::size_t p = pairs_.size(); p-- > 0;)
    dirty_suffix_[p] = std::min(dirty_suffix_[p + 1], channel_pos[pairs_[p].out]);

  for (NodeIndex t : net.sink_indices()) {
    auto& slots = sink_inputs_.emplace_back();
    for (ChannelIndex c : net.in_channels(t)) slots.push_back(c);
  }
}

std::vector<std::uint32_t> Coder::make_kernels() const {
  std::vector<std::uint32_t> k((channel_count_ + static_cast<std::size_t>(w_)) * w_, 0);
  for (int j = 0; j < w_; ++j) k[(channel_count_ + j) * w_ + j] = 1;
  return k;
}

void Coder::propagate(std::span<const std::uint32_t> coefficients,
                      std::span<std::uint32_t> kernels, std::size_t from) const {
  const std::size_t w = static_cast<std::size_t>(w_);
  for (std::size_t pos = from; pos < propagation_.size(); ++pos) {
    std::uint32_t* out = &kernels[propagation_[pos] * w];
    std::fill(out, out + w, 0u);
    for (const Term& term : terms_[pos]) {
      const std::uint32_t k = coefficients[term.coefficient];
      if (k == 0) continue;
      const std::uint32_t* in = &kernels[term.slot * w];
      for (std::size_t r = 0; r < w; ++r)
        out[r] = field_.add_raw(out[r], field_.mul_raw(k, in[r]));
    }
  }
}

std::size_t Coder::sink_rank(std::size_t sink, std::span<const std::uint32_t> kernels,
                             std::vector<std::uint32_t>& scratch) const {
  const auto& inputs = sink_inputs_[sink];
  const std::size_t w = static_cast<std::size_t>(w_);
  const std::size_t cols = inputs.size();
  scratch.resize(w * cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t r = 0; r < w; ++r) scratch[r * cols + j] = kernels[inputs[j] * w + r];
  return rank_in_place(field_, scratch, w, cols);
}

TrialOutcome Coder::outcome(std::span<const std::uint32_t> kernels,
                            std::vector<std::uint32_t>& scratch) const {
  TrialOutcome o;
  for (std::size_t i = 0; i < sink_inputs_.size(); ++i) {
    const std::size_t rank = sink_rank(i, kernels, scratch);
    o.ranks.push_back(rank);
    const bool failed = rank < static_cast<std::size_t>(w_);
    o.sink_failed.push_back(failed);
    o.network_failed = o.network_failed || failed;
  }
  return o;
}

TrialOutcome Coder::run(SplitMix64& rng) const {
  std::vector<std::uint32_t> coefficients(pairs_.size());
  for (auto& k : coefficients) k = uniform_sample(field_, rng).value;
  auto kernels = make_kernels();
  propagate(coefficients, kernels);
  std::vector<std::uint32_t> scratch;
  return outcome(kernels, scratch);
}

KernelAssignment propagate_kernels(const Network& net, int w, const Field& field,
                                   const CoefficientMap& coefficients) {
  Coder coder(net, w, field);
  std::vector<std::uint32_t> values;
  for (const auto& pair : coder.pairs()) {
    const std::string in = cut_channel_name(net, pair.in);
    const std::string& out = net.channels()[pair.out].id;
    auto it = coefficients.find({in, out});
    if (it == coefficients.end())
      throw NetworkError("missing local coefficient for pair (" + in + ", " + out + ")");
    values.push_back(field.element(it->second.value).value);
  }
  auto kernels = coder.make_kernels();
  coder.propagate(values, kernels);

  KernelAssignment ka;
  ka.rate = static_cast<std::size_t>(w);
  const std::size_t uw = static_cast<std::size_t>(w);
  auto column = [&](std::size_t slot) {
    std::vector<Element> v;
    for (std::size_t r = 0; r < uw; ++r) v.push_back({kernels[slot * uw + r]});
    return v;
  };
  for (ChannelIndex c = 0; c < net.channel_count(); ++c) ka.kernels[net.channels()[c].id] = column(c);
  for (std::size_t j = 1; j <= uw; ++j)
    ka.kernels["d" + std::to_string(j)] = column(net.channel_count() + j - 1);
  return ka;
}

MatrixGF decoding_matrix(const KernelAssignment& kernels, const Network& net,
                         std::string_view sink) {
  net.sink_position(sink);
  const auto inputs = net.in_channels(net.node_index(sink));
  MatrixGF m(kernels.rate, inputs.size());
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    const auto& id = net.channels()[inputs[j]].id;
    auto it = kernels.kernels.find(id);
    if (it == kernels.kernels.end()) throw NetworkError("no kernel for channel \"" + id + "\"");
    for (std::size_t r = 0; r < kernels.rate; ++r) m.at(r, j) = it->second.at(r);
  }
  return m;
}

TrialOutcome run_trial(const Network& net, int w, const Field& field, SplitMix64& rng) {
  return Coder(net, w, field).run(rng);
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return SplitMix64::mix(seed ^ SplitMix64::mix(index + 0x9e3779b97f4a7c15ULL));
}

Proportion proportion_interval(std::uint64_t count, std::uint64_t trials) {
  if (trials == 0) throw std::invalid_argument("no trials");
  Proportion p;
  p.count = count;
  const double n = static_cast<double>(trials);
  const double est = static_cast<double>(count) / n;
  p.estimate = est;
  if (count < 5 || trials - count < 5) {
    const double z2 = kZ95 * kZ95;
    const double denom = 1 + z2 / n;
    const double center = (est + z2 / (2 * n)) / denom;
    const double hw = kZ95 / denom * std::sqrt(est * (1 - est) / n + z2 / (4 * n * n));
    p.method = "wilson";
    // The exact endpoints are 0 and 1 at the extremes; avoid rounding residue.
    p.low = count == 0 ? 0.0 : std::max(0.0, center - hw);
    p.high = count == trials ? 1.0 : std::min(1.0, center + hw);
    p.half_width = hw;
  } else {
    const double hw = kZ95 * std::sqrt(est * (1 - est) / n);
    p.method = "normal";
    p.low = std::max(0.0, est - hw);
    p.high = std::min(1.0, est + hw);
    p.half_width = hw;
  }
  return p;
}

void require_rate(const Network& net, int w) {
  if (w < 1) throw std::invalid_argument("rate must be positive");
  for (const auto& t : net.sinks()) {
    const int c = min_cut_capacity(net, t);
    if (c < w) throw CapacityError(t, c, w);
  }
}

MonteCarloResult monte_carlo(const Network& net, int w, const Field& field, std::uint64_t trials,
                             std::uint64_t seed, unsigned workers) {
  if (trials == 0) throw std::invalid_argument("trials must be at least 1");
  const Coder coder(net, w, field);
  workers = std::max(1u, workers);
  std::vector<Tally> tallies(workers, Tally(coder.sink_count()));
  parallel_ranges(trials, workers, [&](unsigned k, std::uint64_t begin, std::uint64_t end) {
    std::vector<std::uint32_t> coefficients(coder.coefficient_count());
    auto kernels = coder.make_kernels();
    std::vector<std::uint32_t> scratch;
    for (std::uint64_t i = begin; i < end; ++i) {
      SplitMix64 rng(trial_seed(seed, i));
      for (auto& c : coefficients) c = uniform_sample(field, rng).value;
      coder.propagate(coefficients, kernels);
      tallies[k].add(coder.outcome(kernels, scratch));
    }
  });
  Tally total(coder.sink_count());
  for (const auto& t : tallies) total.merge(t);

  MonteCarloResult r;
  r.trials = trials;
  r.seed = seed;
  r.q = field.order();
  r.rate = w;
  r.sinks = net.sinks();
  for (auto c : total.sink) r.sink_failure.push_back(proportion_interval(c, trials));
  r.network_failure = proportion_interval(total.network, trials);
  return r;
}

ExactResult enumerate_exact(const Network& net, int w, const Field& field, std::uint64_t cap,
                            unsigned workers) {
  const Coder coder(net, w, field);
  const std::uint64_t K = coder.coefficient_count();
  const std::uint64_t q = field.order();
  const BigInt required = boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(K));
  if (required > BigInt(cap)) throw EnumerationCapError(q, K, required.str(), cap);
  const std::uint64_t total = required.convert_to<std::uint64_t>();

  workers = std::max(1u, workers);
  std::vector<Tally> tallies(workers, Tally(coder.sink_count()));
  parallel_ranges(total, workers, [&](unsigned k, std::uint64_t begin, std::uint64_t end) {
    if (begin >= end) return;
    std::vector<std::uint32_t> digits(K, 0);
    std::uint64_t index = begin;
    for (std::size_t p = K; p-- > 0;) {
      digits[p] = static_cast<std::uint32_t>(index % q);
      index /= q;
    }
    auto kernels = coder.make_kernels();
    std::vector<std::uint32_t> scratch;
    coder.propagate(digits, kernels);
    for (std::uint64_t n = begin;;) {
      tallies[k].add(coder.outcome(kernels, scratch));
      if (++n == end) break;
      std::size_t p = K - 1;
      while (digits[p] == q - 1) digits[p--] = 0;
      ++digits[p];
      coder.propagate(digits, kernels, coder.dirty_from(p));
    }
  });
  Tally sum(coder.sink_count());
  for (const auto& t : tallies) sum.merge(t);

  ExactResult r;
  r.q = field.order();
  r.rate = w;
  r.coefficients = K;
  r.total = total;
  r.sinks = net.sinks();
  r.sink_failures = sum.sink;
  r.network_failures = sum.network;
  for (auto c : sum.sink) r.sink_probability.push_back(Rational(BigInt(c), BigInt(total)));
  r.network_probability = Rational(BigInt(sum.network), BigInt(total));
  return r;
}

ordered_json MonteCarloResult::to_json() const {
  ordered_json j;
  j["kind"] = "monte_carlo";
  j["q"] = q;
  j["rate"] = rate;
  j["trials"] = trials;
  j["seed"] = seed;
  j["confidence"] = 0.95;
  ordered_json per = ordered_json::array();
  for (std::size_t i = 0; i < sinks.size(); ++i) {
    ordered_json entry{{"sink", sinks[i]}};
    entry.update(proportion_json(sink_failure[i]));
    per.push_back(std::move(entry));
  }
  j["sinks"] = std::move(per);
  j["network"] = proportion_json(network_failure);
  return j;
}

std::string MonteCarloResult::to_csv() const {
  std::ostringstream os;
  os << "sink,trials,failures,estimate,half_width,ci_low,ci_high,interval\n";
  auto row = [&](const std::string& name, const Proportion& p) {
    os << name << ',' << trials << ',' << p.count << ',' << csv_double(p.estimate) << ','
       << csv_double(p.half_width) << ',' << csv_double(p.low) << ',' << csv_double(p.high) << ','
       << p.method << '\n';
  };
  for (std::size_t i = 0; i < sinks.size(); ++i) row(sinks[i], sink_failure[i]);
  row("*", network_failure);
  return os.str();
}

ordered_json ExactResult::to_json() const {
  auto prob = [](std::uint64_t count, const Rational& p) {
    return ordered_json{{"failures", count},
                        {"numerator", numerator_string(p)},
                        {"denominator", denominator_string(p)},
                        {"float", to_double(p)}};
  };
  ordered_json j;
  j["kind"] = "exact";
  j["q"] = q;
  j["rate"] = rate;
  j["coefficients"] = coefficients;
  j["assignments"] = total;
  ordered_json per = ordered_json::array();
  for (std::size_t i = 0; i < sinks.size(); ++i) {
    ordered_json entry{{"sink", sinks[i]}};
    entry.update(prob(sink_failures[i], sink_probability[i]));
    per.push_back(std::move(entry));
  }
  j["sinks"] = std::move(per);
  j["network"] = prob(network_failures, network_probability);
  return j;
}

std::string ExactResult::to_csv() const {
  std::ostringstream os;
  os << "sink,assignments,failures,numerator,denominator,float\n";
  auto row = [&](const std::string& name, std::uint64_t count, const Rational& p) {
    os << name << ',' << total << ',' << count << ',' << numerator_string(p) << ','
       << denominator_string(p) << ',' << csv_double(to_double(p)) << '\n';
  };
  for (std::size_t i = 0; i < sinks.size(); ++i) row(sinks[i], sink_failures[i], sink_probability[i]);
  row("*", network_failures, network_probability);
  return os.str();
}

}  // namespace rlnc
