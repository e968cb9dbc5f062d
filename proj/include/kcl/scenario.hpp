#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kcl/algebra.hpp"
#include "kcl/cascade.hpp"

namespace kcl {

/// Entities failing together at a simulated time (1 ms per cascade round).
struct FailureEvent {
  std::int64_t time_ms = 0;
  IdSet entity_ids;

  friend bool operator==(const FailureEvent&, const FailureEvent&) = default;
};

enum class SolverKind : std::uint8_t { kExact, kHeuristic };

std::string_view to_string(SolverKind solver) noexcept;
std::optional<SolverKind> solver_from_string(std::string_view text) noexcept;

struct Scenario {
  std::string network_path;  // empty when the file has no `network` line
  Mode mode = Mode::kMiim;
  int k = 1;
  SolverKind solver = SolverKind::kHeuristic;
  Objective objective = Objective::kFailed;
  std::vector<FailureEvent> events;  // non-decreasing time
  std::int64_t query_begin = 0;
  std::int64_t query_end = 0;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

}  // namespace kcl
