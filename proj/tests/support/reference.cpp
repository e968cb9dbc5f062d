#include "reference.hpp"

#include <algorithm>
#include <bit>

namespace kcl::testing {

int ref_eval(const Expr& e, const RefStates& s, Mode mode) {
  if (e.kind == Expr::Kind::kRef) return s.at(e.id);
  std::vector<int> v;
  for (const Expr& c : e.children) v.push_back(ref_eval(c, s, mode));
  const int lo = *std::min_element(v.begin(), v.end());
  const int hi = *std::max_element(v.begin(), v.end());
  switch (e.kind) {
    case Expr::Kind::kMinAnd: return lo;
    case Expr::Kind::kMaxOr: return hi;
    default:
      if (mode == Mode::kIim) return lo;
      return lo == hi ? lo : 1;
  }
}

namespace {

RefStates start_states(const JointNetwork& net, const IdSet& failed) {
  RefStates s;
  for (const auto& [id, entity] : net.entities()) s[id] = failed.contains(id) ? 0 : 2;
  return s;
}

int updated(const JointNetwork& net, const IdSet& failed, const RefStates& s,
            const std::string& id, Mode mode) {
  if (failed.contains(id)) return 0;
  const auto it = net.idrs().find(id);
  if (it == net.idrs().end()) return s.at(id);
  return std::min(s.at(id), ref_eval(it->second, s, mode));
}

}  // namespace

RefCascade ref_cascade(const JointNetwork& net, const IdSet& failed, Mode mode) {
  RefCascade out;
  out.rounds.push_back(start_states(net, failed));
  while (true) {
    const RefStates& cur = out.rounds.back();
    RefStates next;
    for (const auto& [id, v] : cur) next[id] = updated(net, failed, cur, id, mode);
    const bool same = next == cur;
    out.rounds.push_back(std::move(next));
    if (same) break;
  }
  out.final_states = out.rounds.back();
  return out;
}

RefStates ref_fixpoint_in_place(const JointNetwork& net, const IdSet& failed, Mode mode,
                                const std::vector<std::string>& order) {
  RefStates s = start_states(net, failed);
  for (bool changed = true; changed;) {
    changed = false;
    for (const std::string& id : order) {
      const int v = updated(net, failed, s, id, mode);
      if (v != s[id]) {
        s[id] = v;
        changed = true;
      }
    }
  }
  return s;
}

DamageReport ref_damage(const JointNetwork& net, const IdSet& failed, Mode mode) {
  const RefCascade c = ref_cascade(net, failed, mode);
  DamageReport d;
  for (const auto& [id, v] : c.final_states) {
    if (v == 0) ++d.failed_count;
    d.state_deficit += 2 - v;
  }
  d.rounds_to_steady = static_cast<int>(c.rounds.size()) - 2;
  return d;
}

RefList ref_k_list(const JointNetwork& net, int k, Mode mode, Objective objective) {
  std::vector<std::string> pool;
  for (const auto& [id, e] : net.entities()) {
    const bool channel = e.kind == EntityKind::kTransmissionLine ||
                         e.kind == EntityKind::kTransformer ||
                         e.kind == EntityKind::kPowerSupplyLine;
    if (!channel) pool.push_back(id);
  }
  const auto key = [objective](const DamageReport& d) {
    return objective == Objective::kFailed ? std::pair(d.failed_count, d.state_deficit)
                                           : std::pair(d.state_deficit, d.failed_count);
  };
  RefList best;
  bool any = false;
  const std::size_t n = pool.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != k) continue;
    IdSet set;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) set.insert(pool[i]);
    }
    const DamageReport d = ref_damage(net, set, mode);
    if (!any || key(d) > key(best.damage)) {
      best = {{set}, d};
      any = true;
    } else if (key(d) == key(best.damage)) {
      best.sets.push_back(set);
    }
  }
  std::sort(best.sets.begin(), best.sets.end());
  if (!best.sets.empty()) best.damage = ref_damage(net, best.sets.front(), mode);
  return best;
}

}  // namespace kcl::testing

namespace kcl::testing {

namespace {

std::optional<Expr> ref_prune(const Expr& e, const IdSet& gone) {
  if (e.kind == Expr::Kind::kRef) {
    if (gone.contains(e.id)) return std::nullopt;
    return e;
  }
  std::vector<Expr> kept;
  for (const Expr& c : e.children) {
    if (auto p = ref_prune(c, gone)) kept.push_back(std::move(*p));
  }
  if (kept.empty()) return std::nullopt;
  if (kept.size() == 1) return kept.front();
  Expr out = e;
  out.children = std::move(kept);
  return out;
}

}  // namespace

JointNetwork ref_pruned_network(const JointNetwork& net, const IdSet& failed) {
  IdSet gone = failed;
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& [id, expr] : net.idrs()) {
      if (!gone.contains(id) && !ref_prune(expr, gone)) {
        gone.insert(id);
        grew = true;
      }
    }
  }
  JointNetwork out;
  for (const auto& [id, e] : net.entities()) {
    if (!gone.contains(id)) out.add_entity(id, e);
  }
  for (const Edge& e : net.edges()) {
    const bool touches = gone.contains(e.a) || gone.contains(e.b) ||
                         (e.bound_entity && gone.contains(*e.bound_entity));
    if (!touches) out.add_edge(e);
  }
  for (const auto& [id, expr] : net.idrs()) {
    if (gone.contains(id)) continue;
    if (auto p = ref_prune(expr, gone)) out.set_idr(id, std::move(*p));
  }
  return out;
}

}  // namespace kcl::testing
