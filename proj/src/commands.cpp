#include "rlnc/commands.hpp"

#include <sstream>
#include <stdexcept>

#include "rlnc/bounds.hpp"
#include "rlnc/cuts.hpp"
#include "rlnc/generators.hpp"

namespace rlnc {
namespace {

using nlohmann::ordered_json;

std::string describe(const ValidationReport& report) {
  std::string msg = "invalid network:";
  for (const auto& v : report.violations) msg += " " + v.message + ";";
  return msg;
}

void require_valid(const Network& net) {
  auto report = validate_network(net);
  if (!report.valid()) throw ValidationFailed(std::move(report));
}

Field require_field(std::uint64_t q) {
  if (!Field::supported(q))
    throw UnsupportedField("unsupported field order " + std::to_string(q) +
                           " (need a prime or power of two <= 65536)");
  return Field::of_order(static_cast<std::uint32_t>(q));
}

void require_positive_rate(int w) {
  if (w < 1) throw UsageError("--rate must be at least 1");
}

ordered_json lower_json(const LowerBounds& lb) {
  ordered_json per = ordered_json::array();
  for (std::size_t i = 0; i < lb.sinks.size(); ++i) {
    auto j = rational_json(lb.per_sink[i]);
    j["sink"] = lb.sinks[i];
    j["min_cut"] = lb.capacities[i];
    j["delta"] = lb.slack[i];
    per.push_back(std::move(j));
  }
  auto net = rational_json(lb.network);
  net["delta"] = lb.network_slack;
  return ordered_json{{"sinks", std::move(per)}, {"network", std::move(net)}};
}

BoundEntry lower_entry(std::string id, const Rational& value, int delta, std::uint64_t q) {
  BoundEntry e;
  e.id = std::move(id);
  e.description = "lower bound";
  e.value = value;
  e.inputs = {{"q", q}, {"delta", delta}};
  return e;
}

std::string csv_with_comments(const std::string& csv, const std::string& listing) {
  std::string out;
  std::istringstream lines(listing);
  for (std::string line; std::getline(lines, line);) out += "# " + line + "\n";
  return out + csv;
}

}  // namespace

ValidationFailed::ValidationFailed(ValidationReport report)
    : Error(describe(report)), report_(std::move(report)) {}

Analysis cmd_analyze(const RunConfig& config, const Network& net) {
  require_valid(net);
  require_positive_rate(config.rate);
  const Field field = require_field(config.field);
  const std::uint64_t q = field.order();
  const int w = config.rate;
  require_rate(net, w);

  const auto sinks = net.sinks();
  const std::uint64_t l = sinks.size();
  std::vector<PathCollection> first;
  for (const auto& t : sinks) first.push_back(find_disjoint_paths(net, t, w));

  std::vector<PathCollection> chosen = first;
  std::vector<PathSelection> selections;
  if (config.paths == PathStrategy::kMinInternal) {
    chosen.clear();
    for (const auto& t : sinks) {
      selections.push_back(select_min_internal_paths(net, t, w, config.budget));
      chosen.push_back(selections.back().collection);
    }
  }
  const CutSequenceSet seq = build_cut_sequences(net, chosen);

  std::uint64_t first_total = 0;
  for (const auto& pc : first) first_total += pc.internal_count();
  const std::uint64_t chosen_total = seq.internal_total();
  const std::uint64_t J = net.internal_nodes().size();
  std::uint64_t relay_sinks = 0;
  for (auto t : net.sink_indices()) relay_sinks += net.out_channels(t).empty() ? 0 : 1;
  const std::uint64_t m = config.m.value_or(J + relay_sinks);
  if (m < J + relay_sinks) throw UsageError("--m must be at least the internal node count");
  if (config.n && *config.n < first_total)
    throw UsageError("--n is smaller than the sum of internal node counts (" +
                     std::to_string(first_total) + ")");

  const auto shape = match_plait_union(net, w);
  bool single_chain = false;
  if (shape) {
    int with_stages = 0;
    for (int st : shape->stages) with_stages += st > 0 ? 1 : 0;
    single_chain = with_stages <= 1;
  }

  BoundReport report;
  {
    BoundEntry e = bound_network_cutwise(seq, q);
    if (single_chain) e.tight = true;
    report.entries.push_back(std::move(e));
  }
  report.entries.push_back(bound_network_split(first_total, l, q, w, "thm2"));
  if (config.n) report.entries.push_back(bound_network_split(*config.n, l, q, w, "thm3"));
  if (config.paths == PathStrategy::kMinInternal) {
    BoundEntry e = bound_network_split(chosen_total, l, q, w, "cor1");
    bool certified = true;
    for (const auto& s : selections) certified = certified && s.certified;
    e.inputs["certified"] = certified;
    report.entries.push_back(std::move(e));
  }
  report.entries.push_back(bound_network_internal_count(m, l, q, w));
  {
    BoundEntry e = bound_sink_simple(m, q, w, "thm9");
    e.inputs["l"] = l;
    report.entries.push_back(std::move(e));
  }
  for (std::size_t i = 0; i < sinks.size(); ++i) {
    const auto profile = sink_cut_profile(seq, net, sinks[i]);
    BoundEntry six = bound_sink_cutwise(profile, q, w);
    BoundEntry seven = bound_sink_simple(seq.internal_counts[i], q, w, "thm7");
    BoundEntry eight = bound_sink_simple(m, q, w, "thm8");
    if (shape) six.tight = seven.tight = true;
    for (BoundEntry* e : {&six, &seven, &eight}) {
      e->id += ":" + sinks[i];
      e->inputs["sink"] = sinks[i];
      report.entries.push_back(*e);
    }
    if (config.n) {
      BoundEntry e = bound_sink_simple(*config.n, q, w, "thm8");
      e.id = "thm8n:" + sinks[i];
      e.inputs["sink"] = sinks[i];
      report.entries.push_back(std::move(e));
    }
  }
  const LowerBounds lb = lower_bounds(net, w, q);
  for (std::size_t i = 0; i < lb.sinks.size(); ++i)
    report.entries.push_back(lower_entry("lower:" + lb.sinks[i], lb.per_sink[i], lb.slack[i], q));
  report.entries.push_back(lower_entry("lower", lb.network, lb.network_slack, q));

  ordered_json out;
  out["kind"] = "analysis";
  out["network"] = net.name();
  out["q"] = q;
  out["rate"] = w;
  out["path_strategy"] = config.paths == PathStrategy::kMinInternal ? "min-internal" : "first-found";
  ordered_json min_cut = ordered_json::object();
  for (std::size_t i = 0; i < sinks.size(); ++i) min_cut[sinks[i]] = lb.capacities[i];
  out["topology"] = {{"nodes", net.node_count()},
                     {"channels", net.channel_count()},
                     {"sinks", sinks},
                     {"internal_nodes", J},
                     {"min_cut", min_cut}};
  ordered_json paths = ordered_json::array();
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    ordered_json p{{"sink", sinks[i]},
                   {"paths", chosen[i].path_ids(net)},
                   {"internal_nodes", chosen[i].internal_node_ids(net)},
                   {"r", chosen[i].internal_count()}};
    if (!selections.empty()) {
      p["certified"] = selections[i].certified;
      p["method"] = selections[i].method;
      p["examined"] = selections[i].examined;
      p["first_found_r"] = first[i].internal_count();
    }
    paths.push_back(std::move(p));
  }
  out["paths"] = std::move(paths);

  ordered_json order = ordered_json::array();
  for (auto v : seq.order) order.push_back(net.nodes()[v]);
  std::vector<std::size_t> ms, ns;
  for (std::size_t k = 0; k <= seq.R(); ++k) {
    ms.push_back(seq.m(k));
    ns.push_back(seq.n(k));
  }
  ordered_json profiles = ordered_json::object();
  for (const auto& t : sinks) profiles[t] = sink_cut_profile(seq, net, t);
  out["cuts"] = {{"order", order}, {"R", seq.R()},          {"sum_r", chosen_total},
                 {"m", ms},        {"n", ns},               {"profiles", profiles}};
  out["a"] = rational_json(compute_a(q, w));
  out["bounds"] = report.to_json();
  out["lower_bounds"] = lower_json(lb);
  const auto consts = asymptotic_constants(config.n.value_or(first_total), l, m);
  out["asymptotic"] = {{"Lambda", consts.lambda}, {"Omega", consts.omega}};
  Analysis analysis;
  if (config.explain) {
    analysis.listing = explain_cuts(seq, net);
    std::vector<std::string> lines;
    std::istringstream text(analysis.listing);
    for (std::string line; std::getline(text, line);) lines.push_back(line);
    out["explain"] = lines;
  }
  analysis.json = std::move(out);
  analysis.bounds = std::move(report);
  return analysis;
}

MonteCarloResult cmd_simulate(const RunConfig& config, const Network& net) {
  require_valid(net);
  require_positive_rate(config.rate);
  if (config.trials < 1) throw UsageError("--trials must be at least 1");
  const Field field = require_field(config.field);
  require_rate(net, config.rate);
  return monte_carlo(net, config.rate, field, config.trials, config.seed, config.workers);
}

ExactResult cmd_enumerate(const RunConfig& config, const Network& net) {
  require_valid(net);
  require_positive_rate(config.rate);
  const Field field = require_field(config.field);
  require_rate(net, config.rate);
  return enumerate_exact(net, config.rate, field, config.cap, config.workers);
}

Network cmd_generate(const RunConfig& config) {
  try {
    if (config.family == "butterfly") return gen_butterfly();
    if (config.family == "plait") return gen_plait(config.plait_w, config.plait_r);
    if (config.family == "plait-union")
      return gen_plait_union(config.plait_w, config.union_R, config.union_l);
    if (config.family == "random") {
      require_positive_rate(config.rate);
      return gen_layered_random(config.layers, config.width, config.rate, config.sinks, config.seed);
    }
  } catch (const GeneratorError& e) {
    throw UsageError(e.what());
  }
  throw UsageError("unknown family \"" + config.family +
                   "\" (expected butterfly, plait, plait-union or random)");
}

ordered_json generate_summary(const Network& net) {
  ordered_json min_cut = ordered_json::object();
  for (const auto& t : net.sinks()) min_cut[t] = min_cut_capacity(net, t);
  return {{"kind", "network_summary"},
          {"name", net.name()},
          {"nodes", net.node_count()},
          {"channels", net.channel_count()},
          {"internal_nodes", net.internal_nodes().size()},
          {"min_cut", min_cut},
          {"valid", validate_network(net).valid()}};
}

ordered_json cmd_sweep(const RunConfig& config) {
  if (config.network_path.empty()) return cmd_sweep(config, nullptr);
  const Network net = load_network(config.network_path);
  return cmd_sweep(config, &net);
}

ordered_json cmd_sweep(const RunConfig& config, const Network* source) {
  if (config.fields.empty()) throw UsageError("--fields must list at least one field order");
  for (auto q : config.fields) require_field(q);

  std::uint64_t n = 0, l = 1, m = 0, r = 0;
  int w = config.rate;
  int delta = 0;
  if (source) {
    const Network& net = *source;
    require_valid(net);
    require_positive_rate(w);
    require_rate(net, w);
    l = net.sinks().size();
    m = net.internal_nodes().size();
    int min_delta = -1;
    for (const auto& t : net.sinks()) {
      const auto pc = find_disjoint_paths(net, t, w);
      n += pc.internal_count();
      r = std::max<std::uint64_t>(r, pc.internal_count());
      const int d = min_cut_capacity(net, t) - w;
      if (min_delta < 0 || d < min_delta) min_delta = d;
    }
    delta = min_delta;
  }
  if (config.n) n = *config.n;
  if (config.l) l = *config.l;
  if (config.m) m = *config.m;
  if (config.r) r = *config.r;
  if (config.delta) delta = *config.delta;
  if (config.bound != "lower") require_positive_rate(w);
  if (l < 1) throw UsageError("--l must be at least 1");
  if (delta < 0) throw UsageError("--delta must be nonnegative");

  const std::string& b = config.bound;
  std::function<BoundEntry(std::uint64_t)> fn;
  ordered_json inputs;
  std::uint64_t limit = 0;
  if (b == "thm2" || b == "thm3") {
    fn = [&](std::uint64_t q) { return bound_network_split(n, l, q, w, b); };
    inputs = {{"n", n}, {"l", l}, {"w", w}};
    limit = asymptotic_constants(n, l, m).lambda;
  } else if (b == "thm4") {
    fn = [&](std::uint64_t q) { return bound_network_internal_count(m, l, q, w); };
    inputs = {{"m", m}, {"l", l}, {"w", w}};
    limit = asymptotic_constants(n, l, m).omega;
  } else if (b == "thm7" || b == "thm8") {
    const std::uint64_t base = b == "thm7" ? r : (config.n ? n : m);
    fn = [&, base](std::uint64_t q) { return bound_sink_simple(base, q, w, b); };
    inputs = {{"exponent_base", base}, {"w", w}};
    limit = base + 1;
  } else if (b == "lower") {
    fn = [&](std::uint64_t q) {
      BoundEntry e;
      e.id = "lower";
      e.value = Rational(BigInt(1), boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(delta + 1)));
      return e;
    };
    inputs = {{"delta", delta}};
    limit = delta == 0 ? 1 : 0;
  } else {
    throw UsageError("unknown bound \"" + b + "\" (expected thm2, thm3, thm4, thm7, thm8 or lower)");
  }

  ordered_json rows = ordered_json::array();
  for (const auto& row : asymptotic_sweep(fn, config.fields)) {
    rows.push_back({{"q", row.q},
                    {"bound", rational_json(row.bound)},
                    {"scaled", rational_json(row.scaled)},
                    {"valid", row.valid}});
  }
  return {{"kind", "sweep"}, {"bound", b}, {"inputs", inputs}, {"limit", limit}, {"rows", rows}};
}

CommandOutput run_command(const RunConfig& config) {
  CommandOutput result;
  const bool csv = config.format == OutputFormat::kCsv;
  auto fail = [&](int code, ordered_json err) {
    result.exit_code = code;
    result.err = err.dump() + "\n";
  };
  try {
    const std::string& cmd = config.command;
    if (cmd == "generate") {
      const Network net = cmd_generate(config);
      if (config.out_path.empty()) {
        result.out = serialize_network(net);
      } else {
        save_network(net, config.out_path);
        result.out = generate_summary(net).dump(2) + "\n";
      }
      return result;
    }
    if (cmd == "sweep") {
      const auto table = cmd_sweep(config);
      if (!csv) {
        result.out = table.dump(2) + "\n";
      } else {
        std::ostringstream os;
        os << "q,numerator,denominator,float,scaled_numerator,scaled_denominator,scaled_float,valid,limit\n";
        for (const auto& row : table["rows"])
          os << row["q"].get<std::uint64_t>() << ',' << row["bound"]["numerator"].get<std::string>()
             << ',' << row["bound"]["denominator"].get<std::string>() << ','
             << row["bound"]["float"].dump() << ',' << row["scaled"]["numerator"].get<std::string>()
             << ',' << row["scaled"]["denominator"].get<std::string>() << ','
             << row["scaled"]["float"].dump() << ',' << (row["valid"].get<bool>() ? "true" : "false")
             << ',' << table["limit"].get<std::uint64_t>() << '\n';
        result.out = os.str();
      }
      return result;
    }
    if (cmd != "analyze" && cmd != "simulate" && cmd != "enumerate")
      throw UsageError("unknown command \"" + cmd + "\"");
    if (config.network_path.empty()) throw UsageError("--network is required");
    const Network net = load_network(config.network_path);
    if (cmd == "analyze") {
      const auto analysis = cmd_analyze(config, net);
      result.out = csv ? csv_with_comments(analysis.bounds.to_csv(), analysis.listing)
                       : analysis.json.dump(2) + "\n";
    } else if (cmd == "simulate") {
      const auto r = cmd_simulate(config, net);
      result.out = csv ? r.to_csv() : r.to_json().dump(2) + "\n";
    } else {
      const auto r = cmd_enumerate(config, net);
      result.out = csv ? r.to_csv() : r.to_json().dump(2) + "\n";
    }
  } catch (const CapacityError& e) {
    fail(kExitCapacity, {{"error", e.kind()},
                         {"message", e.what()},
                         {"sink", e.sink()},
                         {"capacity", e.capacity()},
                         {"rate", e.rate()}});
  } catch (const EnumerationCapError& e) {
    fail(kExitCapacity,
         {{"error", e.kind()}, {"message", e.what()}, {"required", e.required()}, {"cap", config.cap}});
  } catch (const ValidationFailed& e) {
    ordered_json violations = ordered_json::array();
    for (const auto& v : e.report().violations)
      violations.push_back({{"kind", to_string(v.kind)}, {"subject", v.subject}, {"message", v.message}});
    fail(kExitUsage, {{"error", e.kind()}, {"message", e.what()}, {"violations", violations}});
  } catch (const ParseError& e) {
    fail(kExitUsage, {{"error", e.kind()}, {"message", e.what()}, {"location", e.location()}});
  } catch (const Error& e) {
    fail(kExitUsage, {{"error", e.kind()}, {"message", e.what()}});
  } catch (const std::invalid_argument& e) {
    fail(kExitUsage, {{"error", "usage"}, {"message", e.what()}});
  }
  return result;
}

}  // namespace rlnc
