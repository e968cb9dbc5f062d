#pragma once

/// @file solvers.hpp
/// K-contingency search: the exhaustive oracle, the decision query, and the
/// coloring heuristic for K = 1, K = 2 and K >= 3.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kcl/cascade.hpp"
#include "kcl/network.hpp"

namespace kcl {

enum class CandidateScope : std::uint8_t { kNodesOnly, kIncludeEdgeEntities };

struct ContingencyQuery {
  int k = 1;
  std::optional<int> s;  // decision threshold
  Mode mode = Mode::kMiim;
  Objective objective = Objective::kFailed;
  CandidateScope scope = CandidateScope::kNodesOnly;
};

/// Every tied K-set reaching the best damage, sorted by entity id. `damage`
/// is the replay of the first set.
struct ContingencyList {
  int k = 0;
  std::vector<IdSet> best_sets;
  DamageReport damage;

  friend bool operator==(const ContingencyList&, const ContingencyList&) = default;
};

std::string to_json(const ContingencyList& list);

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The query asks for more entities than the candidate pool holds, or the
/// heuristic graph ran out before it could assemble K entities.
class InfeasibleQuery : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Cascade damage of failure sets, memoized per set. `evaluated()` counts the
/// distinct sets simulated.
class DamageEvaluator {
 public:
  DamageEvaluator(const JointNetwork& net, Mode mode) : model_(net, mode) {}

  DamageReport operator()(const IdSet& failed);
  std::size_t evaluated() const noexcept { return cache_.size(); }
  const CascadeModel& model() const noexcept { return model_; }

 private:
  CascadeModel model_;
  std::map<IdSet, DamageReport> cache_;
};

struct SolveResult {
  ContingencyList list;
  std::size_t candidates_evaluated = 0;
};

std::vector<std::string> eligible_candidates(const JointNetwork& net,
                                             CandidateScope scope);

/// Simulates every K-subset of the candidate pool and keeps all argmax sets.
/// Throws InfeasibleQuery when K exceeds the pool.
SolveResult exact_k_list(const JointNetwork& net, const ContingencyQuery& q);

/// True iff some K-set leaves at least S entities failed at steady state.
bool decide_k_s(const JointNetwork& net, const ContingencyQuery& q);

/// Result of one heuristic stage; `graph` carries the colors after the stage.
struct HeuristicResult {
  ContingencyList list;
  GraphAbstraction graph;
  std::size_t candidates_evaluated = 0;
};

/// Neighbors of pendant power vertices (or, without pendants, the
/// minimum-degree power vertices) are tried one at a time; the most damaging
/// become red and form the list.
HeuristicResult heuristic_k1(const GraphAbstraction& g, const JointNetwork& net,
                             Mode mode, Objective objective = Objective::kFailed);
HeuristicResult heuristic_k1(const GraphAbstraction& g, DamageEvaluator& eval,
                             Objective objective);

/// Pairs red vertices with generator/PMU buses, and pairs the neighbors of
/// degree-two power vertices; keeps the most damaging pairs of either kind.
/// Requires red vertices from heuristic_k1.
HeuristicResult heuristic_k2(const GraphAbstraction& g, const JointNetwork& net,
                             Mode mode, Objective objective = Objective::kFailed);
HeuristicResult heuristic_k2(const GraphAbstraction& g, DamageEvaluator& eval,
                             Objective objective);

/// K >= 3: accumulates best pairs from a shrinking copy of the power graph,
/// combines floor(K/2) disjoint pairs, and for odd K adds the best red
/// singleton found on the graph without the chosen entities. Throws
/// InfeasibleQuery when the graph runs out first.
HeuristicResult heuristic_k(const GraphAbstraction& g, const JointNetwork& net,
                            int k, Mode mode, Objective objective = Objective::kFailed);
HeuristicResult heuristic_k(const GraphAbstraction& g, DamageEvaluator& eval, int k,
                            Objective objective);

/// Graph abstraction, base colors, then the stage matching q.k.
SolveResult heuristic_list(const JointNetwork& net, const ContingencyQuery& q);

}  // namespace kcl
