#include <numeric>

#include "argmax.hpp"
#include "kcl/solvers.hpp"

namespace kcl {

namespace {

bool is_marker_base(Color c) {
  return c == Color::kYellow || c == Color::kBlue || c == Color::kGreen;
}

IdSet pink_candidates(const GraphAbstraction& g) {
  IdSet pink;
  const IdSet pendants = pendant_vertices(g);
  if (!pendants.empty()) {
    for (const std::string& p : pendants) {
      for (const std::string& n : g.pp_neighbors(p)) pink.insert(n);
    }
    return pink;
  }
  std::size_t min_degree = SIZE_MAX;
  for (const std::string& v : g.power_vertices()) {
    min_degree = std::min(min_degree, g.pp_degree(v));
  }
  for (const std::string& v : g.power_vertices()) {
    if (g.pp_degree(v) == min_degree) pink.insert(v);
  }
  return pink;
}

IdSet grey_candidates(const GraphAbstraction& g) {
  IdSet grey;
  for (const std::string& v : g.power_vertices()) {
    if (g.pp_degree(v) != 2) continue;
    for (const std::string& n : g.pp_neighbors(v)) grey.insert(n);
  }
  return grey;
}

IdSet members_of(const std::vector<IdSet>& sets) {
  IdSet out;
  for (const IdSet& s : sets) out.insert(s.begin(), s.end());
  return out;
}

std::size_t evaluated_since(const DamageEvaluator& eval, std::size_t before) {
  return eval.evaluated() - before;
}

}  // namespace

HeuristicResult heuristic_k1(const GraphAbstraction& g, DamageEvaluator& eval,
                             Objective objective) {
  if (g.power_vertices().empty()) {
    throw InfeasibleQuery("graph has no power vertices");
  }
  const std::size_t before = eval.evaluated();
  GraphAbstraction work = g;
  for (const std::string& v : work.vertices_with_color(Color::kRed)) {
    if (work.power_vertices().contains(v)) work.clear_overlay(v);
  }

  const IdSet pink = pink_candidates(work);
  for (const std::string& v : pink) work.set_overlay(v, Color::kPink);

  detail::ArgmaxSets best(objective);
  for (const std::string& v : pink) {
    const IdSet single{v};
    best.offer(single, eval(single));
  }

  work.clear_overlays(Color::kPink);
  ContingencyList list = best.finish(1);
  for (const IdSet& s : list.best_sets) work.set_overlay(*s.begin(), Color::kRed);
  return {std::move(list), std::move(work), evaluated_since(eval, before)};
}

HeuristicResult heuristic_k2(const GraphAbstraction& g, DamageEvaluator& eval,
                             Objective objective) {
  IdSet reds;
  for (const std::string& v : g.vertices_with_color(Color::kRed)) {
    if (g.power_vertices().contains(v)) reds.insert(v);
  }
  if (reds.empty()) throw SolverError("pair search needs red vertices");
  const std::size_t before = eval.evaluated();
  GraphAbstraction work = g;

  detail::ArgmaxSets list1(objective);
  for (const std::string& r : reds) {
    for (const std::string& x : work.power_vertices()) {
      if (x == r || !is_marker_base(work.base_color(x))) continue;
      const IdSet pair{r, x};
      list1.offer(pair, eval(pair));
    }
  }

  const IdSet grey = grey_candidates(work);
  std::map<std::string, Color, std::less<>> prior;
  for (const std::string& v : grey) {
    prior.emplace(v, work.color(v));
    work.set_overlay(v, Color::kGrey);
  }
  detail::ArgmaxSets list2(objective);
  const std::vector<std::string> grey_list(grey.begin(), grey.end());
  for (std::size_t i = 0; i < grey_list.size(); ++i) {
    for (std::size_t j = i + 1; j < grey_list.size(); ++j) {
      const IdSet pair{grey_list[i], grey_list[j]};
      list2.offer(pair, eval(pair));
    }
  }
  for (const auto& [v, c] : prior) {
    if (c == work.base_color(v)) {
      work.clear_overlay(v);
    } else {
      work.set_overlay(v, c);
    }
  }

  if (list1.empty() && list2.empty()) {
    throw InfeasibleQuery("no candidate pairs in the power graph");
  }
  detail::ArgmaxSets combined(objective);
  for (const detail::ArgmaxSets* part : {&list1, &list2}) {
    if (part->empty()) continue;
    for (const IdSet& pair : part->sets()) combined.offer(pair, eval(pair));
  }
  return {combined.finish(2), std::move(work), evaluated_since(eval, before)};
}

HeuristicResult heuristic_k(const GraphAbstraction& g, DamageEvaluator& eval, int k,
                            Objective objective) {
  if (k < 3) throw SolverError("pair accumulation needs k >= 3");
  const std::size_t before = eval.evaluated();
  const std::size_t pairs_needed = static_cast<std::size_t>(k / 2);

  GraphAbstraction shrinking = g;
  std::vector<IdSet> accumulated;
  std::vector<IdSet> best_unions;
  while (best_unions.empty()) {
    std::vector<IdSet> round;
    try {
      const HeuristicResult singles = heuristic_k1(shrinking, eval, objective);
      round = heuristic_k2(singles.graph, eval, objective).list.best_sets;
    } catch (const SolverError&) {
      throw InfeasibleQuery("insufficient graph for K=" + std::to_string(k));
    }
    shrinking = shrinking.without(members_of(round));
    for (IdSet& pair : round) {
      if (std::find(accumulated.begin(), accumulated.end(), pair) == accumulated.end()) {
        accumulated.push_back(std::move(pair));
      }
    }
    // Enough pairs once twice their count reaches k.
    if (2 * accumulated.size() < static_cast<std::size_t>(k)) continue;

    detail::ArgmaxSets unions(objective);
    std::vector<std::size_t> idx(pairs_needed);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    do {
      IdSet combined;
      std::size_t total = 0;
      for (std::size_t i : idx) {
        combined.insert(accumulated[i].begin(), accumulated[i].end());
        total += accumulated[i].size();
      }
      if (combined.size() != total) continue;  // overlapping pairs
      unions.offer(combined, eval(combined));
    } while (detail::next_combination(idx, accumulated.size()));
    best_unions = unions.sets();
  }

  if (k % 2 == 0) {
    detail::ArgmaxSets result(objective);
    for (const IdSet& s : best_unions) result.offer(s, eval(s));
    return {result.finish(k), g, evaluated_since(eval, before)};
  }

  GraphAbstraction reduced = g.without(members_of(best_unions));
  reduced.clear_overlays(Color::kRed);
  HeuristicResult singles;
  try {
    singles = heuristic_k1(reduced, eval, objective);
  } catch (const SolverError&) {
    throw InfeasibleQuery("insufficient graph for K=" + std::to_string(k));
  }
  detail::ArgmaxSets result(objective);
  for (const IdSet& base : best_unions) {
    for (const IdSet& single : singles.list.best_sets) {
      IdSet combined = base;
      combined.insert(single.begin(), single.end());
      result.offer(combined, eval(combined));
    }
  }
  return {result.finish(k), g, evaluated_since(eval, before)};
}

HeuristicResult heuristic_k1(const GraphAbstraction& g, const JointNetwork& net,
                             Mode mode, Objective objective) {
  DamageEvaluator eval(net, mode);
  return heuristic_k1(g, eval, objective);
}

HeuristicResult heuristic_k2(const GraphAbstraction& g, const JointNetwork& net,
                             Mode mode, Objective objective) {
  DamageEvaluator eval(net, mode);
  return heuristic_k2(g, eval, objective);
}

HeuristicResult heuristic_k(const GraphAbstraction& g, const JointNetwork& net,
                            int k, Mode mode, Objective objective) {
  DamageEvaluator eval(net, mode);
  return heuristic_k(g, eval, k, objective);
}

SolveResult heuristic_list(const JointNetwork& net, const ContingencyQuery& q) {
  if (q.k < 1) throw SolverError("k must be positive");
  if (static_cast<std::size_t>(q.k) > net.node_ids().size()) {
    throw InfeasibleQuery("k=" + std::to_string(q.k) + " exceeds the " +
                          std::to_string(net.node_ids().size()) +
                          " eligible candidates");
  }
  const GraphAbstraction g =
      classify_base_colors(build_graph_abstraction(net), net);
  DamageEvaluator eval(net, q.mode);
  HeuristicResult singles = heuristic_k1(g, eval, q.objective);
  if (q.k == 1) return {std::move(singles.list), eval.evaluated()};
  if (q.k == 2) {
    return {heuristic_k2(singles.graph, eval, q.objective).list, eval.evaluated()};
  }
  return {heuristic_k(singles.graph, eval, q.k, q.objective).list, eval.evaluated()};
}

}  // namespace kcl
