#pragma once

/// @file engine.hpp
/// Event-driven, self-updating contingency list. A failure event runs the
/// cascade to steady state, removes every failed entity (with its relations
/// and edges) from the working network, and recomputes the list on what is
/// left. Between events, communication vertices cut off from live or
/// unlisted neighbors are flagged as critical singletons.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kcl/cascade.hpp"
#include "kcl/network.hpp"
#include "kcl/scenario.hpp"
#include "kcl/solvers.hpp"

namespace kcl {

struct EngineConfig {
  ContingencyQuery query;
  SolverKind solver = SolverKind::kHeuristic;
};

/// Runs the configured solver.
SolveResult solve(const JointNetwork& net, const EngineConfig& config);

class EngineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EngineState {
  JointNetwork original;
  GraphAbstraction original_graph;
  JointNetwork network;  // live entities only
  StateTable states;     // over `network`
  GraphAbstraction graph;
  ContingencyList current_list;
  std::size_t candidates_evaluated = 0;
  std::string list_note;  // set when the solver could not produce a list
  IdSet isolated;         // communication vertices flagged between events
  std::vector<std::pair<std::int64_t, std::string>> failed_history;

  /// Entities of the original network no longer present.
  IdSet failed() const;
  /// Solver sets followed by one singleton per isolated vertex.
  std::vector<IdSet> reported_sets() const;
};

EngineState initial_engine_state(const JointNetwork& net, const EngineConfig& config);

struct EventOutcome {
  EngineState state;
  std::vector<std::string> warnings;
};

/// With an event: clamp its live entities, cascade to steady state, prune,
/// and refresh the list. Without one: re-apply the isolation rules. Ids that
/// already failed are reported as warnings; ids never declared throw
/// EngineError.
EventOutcome handle_event(const EngineState& st, const std::optional<FailureEvent>& ev,
                          const EngineConfig& config);

/// Prunes the entities at state 0 in `table` (a state table over
/// st.network), records them at `time_ms`, and refreshes the list.
EngineState settle_into(const EngineState& st, const StateTable& table,
                        std::int64_t time_ms, const EngineConfig& config);

/// Communication vertices of `current` whose power-side edges (in the
/// original graph) all lead to failed entities, or whose communication-side
/// edges all do; likewise for edges that all lead to members of the list.
/// Applied until no vertex is added.
IdSet isolated_comm_vertices(const GraphAbstraction& original,
                             const GraphAbstraction& current, const IdSet& failed,
                             const ContingencyList& list);

/// A cascade advanced one synchronous round at a time over a fixed network.
class CascadeInProgress {
 public:
  CascadeInProgress(const JointNetwork& net, StateTable start, Mode mode);

  /// Adds entities to the clamp and drops them to 0 immediately.
  void fail(const IdSet& ids);
  /// One round; returns false when nothing changed (steady state).
  bool advance();

  const IdSet& clamp() const noexcept { return clamp_; }
  StateTable states() const { return model_.to_table(states_); }
  IdSet failed() const;

 private:
  CascadeModel model_;
  CascadeModel::Vector states_;
  std::vector<bool> clamp_mask_;
  IdSet clamp_;
};

}  // namespace kcl
