#pragma once

/// @file algebra.hpp
/// Three-valued dependency algebra (min-AND, max-OR, new_XOR) and the
/// binary AND/OR subset, plus evaluation and pruning of dependency
/// expression trees.

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kcl {

/// Operational level of an entity.
enum class State : std::uint8_t {
  kDown = 0,     ///< no operation
  kReduced = 1,  ///< reduced operation
  kFull = 2,     ///< full operation
};

inline constexpr int to_int(State s) noexcept { return static_cast<int>(s); }

/// Throws std::invalid_argument unless value is 0, 1 or 2.
State state_from_int(int value);

using IdSet = std::set<std::string, std::less<>>;

enum class Mode : std::uint8_t {
  kMiim,  ///< three-valued, all three connectives
  kIim,   ///< binary {0,2}, AND/OR only
};

std::string_view to_string(Mode mode) noexcept;
std::optional<Mode> mode_from_string(std::string_view text) noexcept;

class AlgebraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

State min_and(State a, State b) noexcept;
State max_or(State a, State b) noexcept;

/// All inputs equal -> that value, otherwise reduced. Throws AlgebraError on
/// an empty input list.
State new_xor(const std::vector<State>& inputs);

/// Dependency expression. Connective nodes own their children by value.
struct Expr {
  enum class Kind : std::uint8_t { kRef, kMinAnd, kMaxOr, kNewXor };

  Kind kind = Kind::kRef;
  std::string id;               ///< kRef only
  std::vector<Expr> children;   ///< connectives only

  static Expr ref(std::string entity);
  static Expr min_and(std::vector<Expr> children);
  static Expr max_or(std::vector<Expr> children);
  static Expr new_xor(std::vector<Expr> children);

  bool is_ref() const noexcept { return kind == Kind::kRef; }

  friend bool operator==(const Expr&, const Expr&) = default;
};

/// Entity ids referenced anywhere in the expression, sorted.
IdSet referenced_ids(const Expr& expr);

bool contains_new_xor(const Expr& expr) noexcept;

/// Rewrites every new_XOR node as min-AND. This is the binary reading of a
/// three-valued relation: the reduced-operation outcome becomes a failure.
Expr project_to_iim(const Expr& expr);

/// Returns nullopt when the id is unknown.
using StateLookup = std::function<std::optional<State>(std::string_view)>;

/// Bottom-up evaluation. Throws AlgebraError when a reference cannot be
/// resolved, when a connective has no children, or when IIM mode meets a
/// new_XOR node or a reduced input.
State eval_expr(const Expr& expr, const StateLookup& lookup, Mode mode);

/// Removes references to failed entities. Connectives left without children
/// disappear; connectives left with one child collapse to that child.
std::optional<Expr> prune_expr(const Expr& expr, const IdSet& failed);

/// Step-by-step reduction of an expression: the first row is the expression
/// with every reference replaced by its state, each following row reduces all
/// innermost connectives, and the last row is a single value.
std::vector<std::string> reduction_trace(const Expr& expr,
                                         const StateLookup& lookup, Mode mode);

}  // namespace kcl
