#include "kcl/engine.hpp"

namespace kcl {

SolveResult solve(const JointNetwork& net, const EngineConfig& config) {
  return config.solver == SolverKind::kExact ? exact_k_list(net, config.query)
                                             : heuristic_list(net, config.query);
}

IdSet EngineState::failed() const {
  IdSet out;
  for (const auto& [id, e] : original.entities()) {
    if (!network.contains(id)) out.insert(id);
  }
  return out;
}

std::vector<IdSet> EngineState::reported_sets() const {
  std::vector<IdSet> sets = current_list.best_sets;
  for (const std::string& v : isolated) sets.push_back(IdSet{v});
  return sets;
}

namespace {

bool all_in(const std::vector<std::string>& ids, const IdSet& set) {
  if (ids.empty()) return false;
  for (const std::string& id : ids) {
    if (!set.contains(id)) return false;
  }
  return true;
}

void mark_red(GraphAbstraction& g, const IdSet& ids) {
  for (const std::string& id : ids) {
    if (g.has_vertex(id)) g.set_overlay(id, Color::kRed);
  }
}

void refresh(EngineState& st, const EngineConfig& config) {
  st.list_note.clear();
  try {
    SolveResult r = solve(st.network, config);
    st.current_list = std::move(r.list);
    st.candidates_evaluated = r.candidates_evaluated;
  } catch (const SolverError& e) {
    st.current_list = ContingencyList{config.query.k, {}, {}};
    st.candidates_evaluated = 0;
    st.list_note = e.what();
  }
  st.graph = classify_base_colors(build_graph_abstraction(st.network), st.network);
  for (const IdSet& set : st.current_list.best_sets) mark_red(st.graph, set);
  st.isolated =
      isolated_comm_vertices(st.original_graph, st.graph, st.failed(), st.current_list);
  mark_red(st.graph, st.isolated);
}

}  // namespace

IdSet isolated_comm_vertices(const GraphAbstraction& original,
                             const GraphAbstraction& current, const IdSet& failed,
                             const ContingencyList& list) {
  IdSet listed;
  for (const IdSet& set : list.best_sets) listed.insert(set.begin(), set.end());
  IdSet isolated;
  for (bool grew = true; grew;) {
    grew = false;
    IdSet listed_or_isolated = listed;
    listed_or_isolated.insert(isolated.begin(), isolated.end());
    for (const std::string& v : current.comm_vertices()) {
      if (isolated.contains(v)) continue;
      const bool cut_off = all_in(original.pc_neighbors(v), failed) ||
                           all_in(original.cc_neighbors(v), failed) ||
                           all_in(current.pc_neighbors(v), listed) ||
                           all_in(current.cc_neighbors(v), listed_or_isolated);
      if (cut_off) {
        isolated.insert(v);
        grew = true;
      }
    }
  }
  return isolated;
}

EngineState initial_engine_state(const JointNetwork& net, const EngineConfig& config) {
  EngineState st;
  st.original = net;
  st.original_graph = build_graph_abstraction(net);
  st.network = net;
  st.states = StateTable::all_full(net);
  refresh(st, config);
  return st;
}

EngineState settle_into(const EngineState& st, const StateTable& table,
                        std::int64_t time_ms, const EngineConfig& config) {
  const IdSet removed = self_update_closure(st.network, table.ids_at(State::kDown));
  EngineState out = st;
  out.network = apply_self_update(st.network, removed);
  StateTable::Map survivors;
  for (const auto& [id, s] : table.values()) {
    if (!removed.contains(id)) survivors.emplace(id, s);
  }
  out.states = StateTable(std::move(survivors));
  for (const std::string& id : removed) out.failed_history.emplace_back(time_ms, id);
  refresh(out, config);
  return out;
}

EventOutcome handle_event(const EngineState& st, const std::optional<FailureEvent>& ev,
                          const EngineConfig& config) {
  EventOutcome outcome{st, {}};
  if (!ev) {
    EngineState& out = outcome.state;
    out.isolated = isolated_comm_vertices(out.original_graph, out.graph, out.failed(),
                                          out.current_list);
    mark_red(out.graph, out.isolated);
    return outcome;
  }
  IdSet live;
  for (const std::string& id : ev->entity_ids) {
    if (!st.original.contains(id)) throw EngineError("unknown entity " + id);
    if (!st.network.contains(id)) {
      outcome.warnings.push_back("entity " + id + " has already failed; ignored");
    } else {
      live.insert(id);
    }
  }
  if (live.empty()) return outcome;

  CascadeInProgress cascade(st.network, st.states, config.query.mode);
  cascade.fail(live);
  while (cascade.advance()) {
  }
  outcome.state = settle_into(st, cascade.states(), ev->time_ms, config);
  return outcome;
}

CascadeInProgress::CascadeInProgress(const JointNetwork& net, StateTable start,
                                     Mode mode)
    : model_(net, mode),
      states_(model_.from_table(start)),
      clamp_mask_(model_.size(), false) {}

void CascadeInProgress::fail(const IdSet& ids) {
  for (const std::string& id : ids) {
    const std::size_t i = model_.index_of(id);
    clamp_mask_[i] = true;
    states_[i] = State::kDown;
    clamp_.insert(id);
  }
}

bool CascadeInProgress::advance() {
  CascadeModel::Vector next = model_.step(states_, clamp_mask_);
  if (next == states_) return false;
  states_ = std::move(next);
  return true;
}

IdSet CascadeInProgress::failed() const {
  IdSet out;
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (states_[i] == State::kDown) out.insert(model_.ids()[i]);
  }
  return out;
}

}  // namespace kcl
