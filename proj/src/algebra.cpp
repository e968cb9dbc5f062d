#include "kcl/algebra.hpp"

#include <algorithm>
#include <utility>
#include <variant>

namespace kcl {

State state_from_int(int value) {
  if (value < 0 || value > 2) {
    throw std::invalid_argument("state value out of range: " +
                                std::to_string(value));
  }
  return static_cast<State>(value);
}

std::string_view to_string(Mode mode) noexcept {
  return mode == Mode::kMiim ? "miim" : "iim";
}

std::optional<Mode> mode_from_string(std::string_view text) noexcept {
  if (text == "miim") return Mode::kMiim;
  if (text == "iim") return Mode::kIim;
  return std::nullopt;
}

State min_and(State a, State b) noexcept { return std::min(a, b); }

State max_or(State a, State b) noexcept { return std::max(a, b); }

State new_xor(const std::vector<State>& inputs) {
  if (inputs.empty()) throw AlgebraError("new_XOR requires at least one input");
  const State first = inputs.front();
  for (State s : inputs) {
    if (s != first) return State::kReduced;
  }
  return first;
}

Expr Expr::ref(std::string entity) {
  Expr e;
  e.kind = Kind::kRef;
  e.id = std::move(entity);
  return e;
}

namespace {

Expr make_connective(Expr::Kind kind, std::vector<Expr> children) {
  Expr e;
  e.kind = kind;
  e.children = std::move(children);
  return e;
}

const char* connective_name(Expr::Kind kind) {
  switch (kind) {
    case Expr::Kind::kMinAnd: return "min-AND";
    case Expr::Kind::kMaxOr: return "max-OR";
    case Expr::Kind::kNewXor: return "new_XOR";
    case Expr::Kind::kRef: break;
  }
  return "reference";
}

State combine(Expr::Kind kind, const std::vector<State>& values) {
  if (values.empty()) {
    throw AlgebraError(std::string(connective_name(kind)) +
                       " node has no children");
  }
  switch (kind) {
    case Expr::Kind::kMinAnd:
      return *std::min_element(values.begin(), values.end());
    case Expr::Kind::kMaxOr:
      return *std::max_element(values.begin(), values.end());
    case Expr::Kind::kNewXor:
      return new_xor(values);
    case Expr::Kind::kRef:
      break;
  }
  throw AlgebraError("reference node cannot combine values");
}

void collect_ids(const Expr& expr, IdSet& out) {
  if (expr.is_ref()) {
    out.insert(expr.id);
    return;
  }
  for (const Expr& child : expr.children) collect_ids(child, out);
}

}  // namespace

Expr Expr::min_and(std::vector<Expr> children) {
  return make_connective(Kind::kMinAnd, std::move(children));
}

Expr Expr::max_or(std::vector<Expr> children) {
  return make_connective(Kind::kMaxOr, std::move(children));
}

Expr Expr::new_xor(std::vector<Expr> children) {
  return make_connective(Kind::kNewXor, std::move(children));
}

IdSet referenced_ids(const Expr& expr) {
  IdSet ids;
  collect_ids(expr, ids);
  return ids;
}

bool contains_new_xor(const Expr& expr) noexcept {
  if (expr.kind == Expr::Kind::kNewXor) return true;
  return std::any_of(expr.children.begin(), expr.children.end(),
                     [](const Expr& c) { return contains_new_xor(c); });
}

Expr project_to_iim(const Expr& expr) {
  if (expr.is_ref()) return expr;
  std::vector<Expr> children;
  children.reserve(expr.children.size());
  for (const Expr& child : expr.children) children.push_back(project_to_iim(child));
  const Expr::Kind kind =
      expr.kind == Expr::Kind::kNewXor ? Expr::Kind::kMinAnd : expr.kind;
  return make_connective(kind, std::move(children));
}

State eval_expr(const Expr& expr, const StateLookup& lookup, Mode mode) {
  if (expr.is_ref()) {
    const std::optional<State> s = lookup(expr.id);
    if (!s) throw AlgebraError("unresolved entity reference " + expr.id);
    if (mode == Mode::kIim && *s == State::kReduced) {
      throw AlgebraError("entity " + expr.id +
                         " has reduced state under IIM evaluation");
    }
    return *s;
  }
  if (mode == Mode::kIim && expr.kind == Expr::Kind::kNewXor) {
    throw AlgebraError("new_XOR is not available under IIM evaluation");
  }
  std::vector<State> values;
  values.reserve(expr.children.size());
  for (const Expr& child : expr.children) {
    values.push_back(eval_expr(child, lookup, mode));
  }
  return combine(expr.kind, values);
}

std::optional<Expr> prune_expr(const Expr& expr, const IdSet& failed) {
  if (expr.is_ref()) {
    if (failed.contains(expr.id)) return std::nullopt;
    return expr;
  }
  std::vector<Expr> kept;
  kept.reserve(expr.children.size());
  for (const Expr& child : expr.children) {
    if (auto pruned = prune_expr(child, failed)) kept.push_back(std::move(*pruned));
  }
  if (kept.empty()) return std::nullopt;
  if (kept.size() == 1) return std::move(kept.front());
  return make_connective(expr.kind, std::move(kept));
}

namespace {

// Partially reduced expression: either a value or a connective over
// partially reduced children.
struct Reduced {
  Expr::Kind kind = Expr::Kind::kRef;
  State value = State::kFull;
  std::vector<Reduced> children;
};

Reduced substitute(const Expr& expr, const StateLookup& lookup, Mode mode) {
  Reduced r;
  r.kind = expr.kind;
  if (expr.is_ref()) {
    const std::optional<State> s = lookup(expr.id);
    if (!s) throw AlgebraError("unresolved entity reference " + expr.id);
    r.value = *s;
    return r;
  }
  if (expr.children.empty()) {
    throw AlgebraError(std::string(connective_name(expr.kind)) +
                       " node has no children");
  }
  if (mode == Mode::kIim && expr.kind == Expr::Kind::kNewXor) {
    throw AlgebraError("new_XOR is not available under IIM evaluation");
  }
  for (const Expr& child : expr.children) {
    r.children.push_back(substitute(child, lookup, mode));
  }
  return r;
}

bool all_values(const Reduced& r) {
  return std::all_of(r.children.begin(), r.children.end(),
                     [](const Reduced& c) { return c.kind == Expr::Kind::kRef; });
}

Reduced reduce_innermost(const Reduced& r) {
  if (r.kind == Expr::Kind::kRef) return r;
  if (all_values(r)) {
    std::vector<State> values;
    for (const Reduced& c : r.children) values.push_back(c.value);
    Reduced out;
    out.value = combine(r.kind, values);
    return out;
  }
  Reduced out;
  out.kind = r.kind;
  for (const Reduced& c : r.children) out.children.push_back(reduce_innermost(c));
  return out;
}

char glyph(Expr::Kind kind) {
  switch (kind) {
    case Expr::Kind::kMinAnd: return '.';
    case Expr::Kind::kMaxOr: return '+';
    case Expr::Kind::kNewXor: return '^';
    case Expr::Kind::kRef: break;
  }
  return '?';
}

std::string render(const Reduced& r, bool nested) {
  if (r.kind == Expr::Kind::kRef) return std::to_string(to_int(r.value));
  std::string out;
  if (nested) out += '(';
  for (std::size_t i = 0; i < r.children.size(); ++i) {
    if (i > 0) {
      out += ' ';
      out += glyph(r.kind);
      out += ' ';
    }
    out += render(r.children[i], true);
  }
  if (nested) out += ')';
  return out;
}

}  // namespace

std::vector<std::string> reduction_trace(const Expr& expr,
                                         const StateLookup& lookup, Mode mode) {
  Reduced current = substitute(expr, lookup, mode);
  std::vector<std::string> rows{render(current, false)};
  while (current.kind != Expr::Kind::kRef) {
    current = reduce_innermost(current);
    rows.push_back(render(current, false));
  }
  return rows;
}

}  // namespace kcl
