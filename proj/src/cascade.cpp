#include "kcl/cascade.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace kcl {

StateTable StateTable::all_full(const JointNetwork& net) {
  Map values;
  for (const auto& [id, e] : net.entities()) values.emplace(id, State::kFull);
  return StateTable(std::move(values));
}

State StateTable::at(std::string_view id) const {
  auto it = values_.find(id);
  if (it == values_.end()) {
    throw CascadeError("state table has no entry for " + std::string(id));
  }
  return it->second;
}

std::optional<State> StateTable::get(std::string_view id) const {
  auto it = values_.find(id);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

void StateTable::set(std::string_view id, State s) {
  values_.insert_or_assign(std::string(id), s);
}

IdSet StateTable::ids_at(State s) const {
  IdSet out;
  for (const auto& [id, v] : values_) {
    if (v == s) out.insert(id);
  }
  return out;
}

StateLookup StateTable::lookup() const {
  return [this](std::string_view id) { return get(id); };
}

std::string_view to_string(Objective objective) noexcept {
  return objective == Objective::kFailed ? "failed" : "deficit";
}

std::optional<Objective> objective_from_string(std::string_view text) noexcept {
  if (text == "failed") return Objective::kFailed;
  if (text == "deficit") return Objective::kDeficit;
  return std::nullopt;
}

std::strong_ordering compare_damage(const DamageReport& a, const DamageReport& b,
                                    Objective objective) noexcept {
  if (objective == Objective::kFailed) {
    if (auto c = a.failed_count <=> b.failed_count; c != 0) return c;
    return a.state_deficit <=> b.state_deficit;
  }
  if (auto c = a.state_deficit <=> b.state_deficit; c != 0) return c;
  return a.failed_count <=> b.failed_count;
}

CascadeModel::CascadeModel(const JointNetwork& net, Mode mode) : mode_(mode) {
  ids_ = net.all_ids();
  for (std::size_t i = 0; i < ids_.size(); ++i) index_.emplace(ids_[i], i);
  root_.assign(ids_.size(), std::nullopt);
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    const Expr* idr = net.idr(ids_[i]);
    if (!idr) continue;
    std::optional<Expr> effective = prune_expr(*idr, IdSet{ids_[i]});
    if (!effective) continue;
    if (mode == Mode::kIim) effective = project_to_iim(*effective);
    root_[i] = compile(*effective);
  }
}

std::size_t CascadeModel::index_of(std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw CascadeError("unknown entity " + std::string(id));
  return it->second;
}

std::size_t CascadeModel::compile(const Expr& expr) {
  if (expr.is_ref()) {
    nodes_.push_back({Expr::Kind::kRef, index_of(expr.id), 0, 0});
    return nodes_.size() - 1;
  }
  if (expr.children.empty()) {
    throw CascadeError("relation contains an empty connective");
  }
  std::vector<std::size_t> children;
  children.reserve(expr.children.size());
  for (const Expr& child : expr.children) children.push_back(compile(child));
  const std::size_t first = child_index_.size();
  child_index_.insert(child_index_.end(), children.begin(), children.end());
  nodes_.push_back({expr.kind, 0, first, children.size()});
  return nodes_.size() - 1;
}

State CascadeModel::eval(std::size_t node_index, const Vector& states) const {
  const Node& node = nodes_[node_index];
  if (node.kind == Expr::Kind::kRef) return states[node.entity];
  const auto begin = child_index_.begin() + static_cast<std::ptrdiff_t>(node.first_child);
  State acc = eval(*begin, states);
  bool all_same = true;
  const State first = acc;
  for (auto it = begin + 1; it != begin + static_cast<std::ptrdiff_t>(node.child_count);
       ++it) {
    const State v = eval(*it, states);
    switch (node.kind) {
      case Expr::Kind::kMinAnd: acc = min_and(acc, v); break;
      case Expr::Kind::kMaxOr: acc = max_or(acc, v); break;
      default: all_same = all_same && v == first; break;
    }
  }
  if (node.kind == Expr::Kind::kNewXor) return all_same ? first : State::kReduced;
  return acc;
}

CascadeModel::Vector CascadeModel::step(const Vector& states,
                                        const std::vector<bool>& clamp) const {
  // Clamped entities read as 0 in the same round they are clamped.
  Vector in = states;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (clamp[i]) in[i] = State::kDown;
  }
  Vector next = in;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (!clamp[i] && root_[i]) next[i] = std::min(in[i], eval(*root_[i], in));
  }
  return next;
}

std::pair<CascadeModel::Vector, int> CascadeModel::settle(
    Vector start, const std::vector<bool>& clamp) const {
  for (std::size_t i = 0; i < start.size(); ++i) {
    if (clamp[i]) start[i] = State::kDown;
  }
  // Every changing round lowers some entity by at least one level.
  const int bound = 2 * static_cast<int>(start.size());
  int rounds = 0;
  for (;;) {
    Vector next = step(start, clamp);
    if (next == start) return {std::move(start), rounds};
    start = std::move(next);
    if (++rounds > bound) throw CascadeError("cascade exceeded its round bound");
  }
}

namespace {

DamageReport damage_of_vector(const CascadeModel::Vector& states, int rounds) {
  DamageReport d;
  d.rounds_to_steady = rounds;
  for (State s : states) {
    if (s == State::kDown) ++d.failed_count;
    d.state_deficit += 2 - to_int(s);
  }
  return d;
}

}  // namespace

DamageReport CascadeModel::damage_of_failure(
    const std::vector<std::size_t>& failed) const {
  std::vector<bool> clamp(ids_.size(), false);
  for (std::size_t i : failed) clamp.at(i) = true;
  auto [final_states, rounds] = settle(Vector(ids_.size(), State::kFull), clamp);
  return damage_of_vector(final_states, rounds);
}

StateTable CascadeModel::to_table(const Vector& states) const {
  StateTable::Map values;
  for (std::size_t i = 0; i < ids_.size(); ++i) values.emplace(ids_[i], states[i]);
  return StateTable(std::move(values));
}

CascadeModel::Vector CascadeModel::from_table(const StateTable& table) const {
  Vector out(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) out[i] = table.at(ids_[i]);
  return out;
}

namespace {

std::vector<bool> clamp_mask(const CascadeModel& model, const IdSet& ids) {
  std::vector<bool> mask(model.size(), false);
  for (const std::string& id : ids) mask[model.index_of(id)] = true;
  return mask;
}

}  // namespace

StateTable step_once(const JointNetwork& net, const StateTable& states,
                     const IdSet& clamp, Mode mode) {
  const CascadeModel model(net, mode);
  return model.to_table(model.step(model.from_table(states), clamp_mask(model, clamp)));
}

CascadeTrace run_cascade(const JointNetwork& net, const IdSet& initial_failures,
                         Mode mode) {
  const CascadeModel model(net, mode);
  const std::vector<bool> clamp = clamp_mask(model, initial_failures);
  CascadeTrace trace;
  trace.clamp_set = initial_failures;

  CascadeModel::Vector current(model.size(), State::kFull);
  for (std::size_t i = 0; i < current.size(); ++i) {
    if (clamp[i]) current[i] = State::kDown;
  }
  trace.rounds.push_back(model.to_table(current));
  const std::size_t bound = 2 * model.size() + 2;
  while (trace.rounds.size() <= bound) {
    CascadeModel::Vector next = model.step(current, clamp);
    trace.rounds.push_back(model.to_table(next));
    if (next == current) {
      trace.steady = true;
      return trace;
    }
    current = std::move(next);
  }
  throw CascadeError("cascade exceeded its round bound");
}

DamageReport damage_of_table(const StateTable& table, int rounds_to_steady) {
  DamageReport d;
  d.rounds_to_steady = rounds_to_steady;
  for (const auto& [id, s] : table.values()) {
    if (s == State::kDown) ++d.failed_count;
    d.state_deficit += 2 - to_int(s);
  }
  return d;
}

DamageReport damage_of(const CascadeTrace& trace) {
  if (!trace.steady || trace.rounds.size() < 2) {
    throw CascadeError("damage requires a trace at steady state");
  }
  return damage_of_table(trace.rounds.back(),
                         static_cast<int>(trace.rounds.size()) - 2);
}

IdSet self_update_closure(const JointNetwork& net, const IdSet& failed) {
  IdSet removed;
  for (const std::string& id : failed) {
    if (net.contains(id)) removed.insert(id);
  }
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& [id, expr] : net.idrs()) {
      if (removed.contains(id)) continue;
      // A relation made only of its own literal behaves as no relation.
      const std::optional<Expr> effective = prune_expr(expr, IdSet{id});
      if (effective && !prune_expr(*effective, removed)) {
        removed.insert(id);
        grew = true;
      }
    }
  }
  return removed;
}

JointNetwork apply_self_update(const JointNetwork& net, const IdSet& failed) {
  const IdSet removed = self_update_closure(net, failed);
  JointNetwork out = net;
  out.erase(removed);
  for (const auto& [id, expr] : net.idrs()) {
    if (removed.contains(id)) continue;
    // Non-empty: the closure removed every entity whose relation vanished.
    out.set_idr(id, *prune_expr(expr, removed));
  }
  return out;
}

std::string trace_to_csv(const CascadeTrace& trace) {
  std::ostringstream out;
  out << "round,entity,state\n";
  for (std::size_t r = 0; r < trace.rounds.size(); ++r) {
    for (const auto& [id, s] : trace.rounds[r].values()) {
      out << r << ',' << id << ',' << to_int(s) << '\n';
    }
  }
  return out.str();
}

std::string trace_to_json(const CascadeTrace& trace) {
  nlohmann::ordered_json rounds = nlohmann::ordered_json::array();
  for (const StateTable& table : trace.rounds) {
    nlohmann::ordered_json row = nlohmann::ordered_json::object();
    for (const auto& [id, s] : table.values()) row[id] = to_int(s);
    rounds.push_back(std::move(row));
  }
  return rounds.dump(2) + "\n";
}

}  // namespace kcl
