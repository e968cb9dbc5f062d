#pragma once

/// @file cascade.hpp
/// Synchronous cascade propagation to steady state, damage accounting, and
/// the between-steady-states pruning of failed entities.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kcl/algebra.hpp"
#include "kcl/network.hpp"

namespace kcl {

/// Total mapping from entity id to state.
class StateTable {
 public:
  using Map = std::map<std::string, State, std::less<>>;

  StateTable() = default;
  explicit StateTable(Map values) : values_(std::move(values)) {}

  /// Every entity of the network at full operation.
  static StateTable all_full(const JointNetwork& net);

  State at(std::string_view id) const;
  std::optional<State> get(std::string_view id) const;
  void set(std::string_view id, State s);
  bool contains(std::string_view id) const { return values_.contains(id); }
  std::size_t size() const noexcept { return values_.size(); }
  const Map& values() const noexcept { return values_; }

  IdSet ids_at(State s) const;
  StateLookup lookup() const;

  friend bool operator==(const StateTable&, const StateTable&) = default;

 private:
  Map values_;
};

enum class Objective : std::uint8_t {
  kFailed,   ///< failed count first, then state deficit
  kDeficit,  ///< state deficit first, then failed count
};

std::string_view to_string(Objective objective) noexcept;
std::optional<Objective> objective_from_string(std::string_view text) noexcept;

struct DamageReport {
  int failed_count = 0;   ///< entities at state 0
  int state_deficit = 0;  ///< sum over entities of (2 - state)
  int rounds_to_steady = 0;

  friend bool operator==(const DamageReport&, const DamageReport&) = default;
};

/// Orders damage under an objective; greater means more damage. Rounds to
/// steady state never take part.
std::strong_ordering compare_damage(const DamageReport& a, const DamageReport& b,
                                    Objective objective) noexcept;

inline bool same_damage(const DamageReport& a, const DamageReport& b) noexcept {
  return a.failed_count == b.failed_count && a.state_deficit == b.state_deficit;
}

struct CascadeTrace {
  /// rounds[0] is the starting table with the clamp applied; rounds[r] is the
  /// table after r synchronous rounds.
  std::vector<StateTable> rounds;
  bool steady = false;
  IdSet clamp_set;

  friend bool operator==(const CascadeTrace&, const CascadeTrace&) = default;
};

class CascadeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Network compiled to index form for repeated cascade runs. A relation that
/// references its own entity has that literal dropped; under IIM, new_XOR
/// connectives are read as AND.
class CascadeModel {
 public:
  CascadeModel(const JointNetwork& net, Mode mode);

  Mode mode() const noexcept { return mode_; }
  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  /// Throws CascadeError for an unknown id.
  std::size_t index_of(std::string_view id) const;

  using Vector = std::vector<State>;

  /// One synchronous round: related entities take min(own, relation value),
  /// clamped entities drop to 0, everything reads the input vector with the
  /// clamp already applied.
  Vector step(const Vector& states, const std::vector<bool>& clamp) const;

  /// Rounds from `start` (clamp applied first) until a fixpoint. Returns the
  /// fixpoint and the number of rounds that changed something.
  std::pair<Vector, int> settle(Vector start, const std::vector<bool>& clamp) const;

  /// Damage of failing exactly the given entities from full operation.
  DamageReport damage_of_failure(const std::vector<std::size_t>& failed) const;

  StateTable to_table(const Vector& states) const;
  Vector from_table(const StateTable& table) const;

 private:
  struct Node {
    Expr::Kind kind;
    std::size_t entity;        // kRef
    std::size_t first_child;   // connectives: range into child_index_
    std::size_t child_count;
  };

  std::size_t compile(const Expr& expr);
  State eval(std::size_t node, const Vector& states) const;

  Mode mode_;
  std::vector<std::string> ids_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<Node> nodes_;
  std::vector<std::size_t> child_index_;
  std::vector<std::optional<std::size_t>> root_;  // per entity
};

/// Table-level single round; `clamp` entities are forced to 0.
StateTable step_once(const JointNetwork& net, const StateTable& states,
                     const IdSet& clamp, Mode mode);

/// Iterates step_once from full operation with the initial failures clamped
/// until two consecutive tables agree. Throws CascadeError for unknown ids.
CascadeTrace run_cascade(const JointNetwork& net, const IdSet& initial_failures,
                         Mode mode);

/// Throws CascadeError for a trace that has not reached steady state.
DamageReport damage_of(const CascadeTrace& trace);
DamageReport damage_of_table(const StateTable& table, int rounds_to_steady);

/// Removes the failed entities, their relations and incident edges, prunes
/// failed references from every surviving relation, and repeats for any
/// survivor whose relation pruned away entirely.
JointNetwork apply_self_update(const JointNetwork& net, const IdSet& failed);

/// Same closure, returning the full set of removed entities.
IdSet self_update_closure(const JointNetwork& net, const IdSet& failed);

std::string trace_to_csv(const CascadeTrace& trace);
std::string trace_to_json(const CascadeTrace& trace);

}  // namespace kcl
