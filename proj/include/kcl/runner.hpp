#pragma once

/// @file runner.hpp
/// Scenario replay producing per-millisecond contingency timelines, timeline
/// reports, and exact-versus-heuristic benchmarking.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kcl/cascade.hpp"
#include "kcl/engine.hpp"
#include "kcl/scenario.hpp"
#include "kcl/solvers.hpp"

namespace kcl {

struct TimelineRecord {
  std::int64_t t_ms = 0;
  std::vector<IdSet> sets;
  std::size_t set_count = 0;
  DamageReport damage;  // of the first solver set; zero when there is none
  std::size_t candidates = 0;
  std::int64_t wall_ns = 0;
  std::string note;

  friend bool operator==(const TimelineRecord&, const TimelineRecord&) = default;
};

class RunnerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  /// Wall time makes output vary between runs, so it is opt-in.
  bool measure_time = false;
};

/// Replays the scenario against `net`. One record per millisecond of the
/// query window: an in-flight cascade advances one round, the list is
/// recorded, then events scheduled at that time are applied. Records
/// therefore show the list before an event at the event's own time.
std::vector<TimelineRecord> run_scenario(const Scenario& sc, const JointNetwork& net,
                                         const RunOptions& options = {});

/// Loads the scenario's network (relative paths resolve against
/// `base_dir`) and replays it. Throws RunnerError with diagnostics.
std::vector<TimelineRecord> run_scenario(const Scenario& sc,
                                         const std::filesystem::path& base_dir,
                                         const RunOptions& options = {});

enum class ReportFormat : std::uint8_t { kCsv, kJson };

std::string emit_report(const std::vector<TimelineRecord>& records, ReportFormat format);
/// Inverse of the JSON report. Throws RunnerError on malformed input.
std::vector<TimelineRecord> parse_report_json(const std::string& text);

struct SolverRun {
  bool skipped = false;
  std::string error;  // solver failure, if any
  std::optional<ContingencyList> list;
  std::size_t candidates = 0;
  std::int64_t wall_ns = 0;
};

struct BenchRecord {
  int k = 0;
  Mode mode = Mode::kMiim;
  std::size_t pool_size = 0;
  SolverRun exact;
  SolverRun heuristic;
  /// Exact damage minus heuristic damage, when both ran.
  std::optional<DamageReport> gap;
};

/// Runs both solvers on identical inputs. The exact solver is skipped when
/// C(pool, k) exceeds `exact_cap`.
BenchRecord bench_solvers(const JointNetwork& net, int k, Mode mode,
                          Objective objective = Objective::kFailed,
                          std::uint64_t exact_cap = 5'000'000);

std::string bench_to_json(const BenchRecord& record);

/// Binomial coefficient, saturating at UINT64_MAX.
std::uint64_t choose(std::uint64_t n, std::uint64_t k) noexcept;

/// Reads a whole file. Throws RunnerError when it cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace kcl
