#pragma once

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "rlnc/bounds.hpp"
#include "rlnc/errors.hpp"
#include "rlnc/network.hpp"
#include "rlnc/sim.hpp"

namespace rlnc {

enum class PathStrategy { kFirstFound, kMinInternal };
enum class OutputFormat { kJson, kCsv };

/// Everything a CLI invocation can set. Fields irrelevant to `command` are ignored.
struct RunConfig {
  std::string command;  // analyze | simulate | enumerate | generate | sweep
  std::string network_path;
  int rate = 0;
  std::uint32_t field = 2;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  PathStrategy paths = PathStrategy::kFirstFound;
  OutputFormat format = OutputFormat::kJson;
  std::uint64_t cap = kDefaultEnumerationCap;
  std::uint64_t budget = kDefaultSearchBudget;
  bool explain = false;
  std::optional<std::uint64_t> n;  // upper bound on sum r_i (analyze, sweep)
  std::optional<std::uint64_t> m;  // upper bound on |J| (analyze, sweep)

  // generate
  std::string family;  // butterfly | plait | plait-union | random
  int plait_w = 2;
  int plait_r = 1;
  int union_R = 1;
  int union_l = 2;
  int layers = 2;
  int width = 3;
  int sinks = 2;
  std::string out_path;

  // sweep
  std::string bound = "thm3";  // thm2 | thm3 | thm4 | thm7 | thm8 | lower
  std::vector<std::uint64_t> fields;
  std::optional<std::uint64_t> l;
  std::optional<std::uint64_t> r;
  std::optional<int> delta;
};

/// Raised for invalid flag combinations; maps to exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "usage"; }
};

/// Invalid network (cycle, unreachable sink, ...); maps to exit code 2.
class ValidationFailed : public Error {
 public:
  explicit ValidationFailed(ValidationReport report);
  const ValidationReport& report() const noexcept { return report_; }
  const char* kind() const noexcept override { return "validation"; }

 private:
  ValidationReport report_;
};

struct CommandOutput {
  int exit_code = 0;
  std::string out;  // stdout
  std::string err;  // stderr (error JSON on failure)
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCapacity = 3;

struct Analysis {
  nlohmann::ordered_json json;  // full report
  BoundReport bounds;           // every bound entry, also embedded in `json`
  std::string listing;          // cut listing, filled when config.explain
};

Analysis cmd_analyze(const RunConfig& config, const Network& net);
MonteCarloResult cmd_simulate(const RunConfig& config, const Network& net);
ExactResult cmd_enumerate(const RunConfig& config, const Network& net);
/// Builds the requested family; summary JSON describes it.
Network cmd_generate(const RunConfig& config);
nlohmann::ordered_json generate_summary(const Network& net);
nlohmann::ordered_json cmd_sweep(const RunConfig& config);
/// Same, with network-derived inputs taken from `net` when non-null.
nlohmann::ordered_json cmd_sweep(const RunConfig& config, const Network* net);

/// Runs one command end to end, formatting output and mapping errors to
/// exit codes (0 ok, 2 usage/validation, 3 capacity/cap) with an error JSON
/// object on stderr.
CommandOutput run_command(const RunConfig& config);

}  // namespace rlnc
