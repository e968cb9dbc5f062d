#include <numeric>

#include "argmax.hpp"
#include "json.hpp"
#include "kcl/solvers.hpp"

namespace kcl {

std::string to_json(const ContingencyList& list) {
  nlohmann::ordered_json j;
  j["k"] = list.k;
  j["best_sets"] = nlohmann::ordered_json::array();
  for (const IdSet& set : list.best_sets) {
    j["best_sets"].push_back(std::vector<std::string>(set.begin(), set.end()));
  }
  j["damage"] = {{"failed_count", list.damage.failed_count},
                 {"state_deficit", list.damage.state_deficit},
                 {"rounds_to_steady", list.damage.rounds_to_steady}};
  return j.dump();
}

DamageReport DamageEvaluator::operator()(const IdSet& failed) {
  if (auto it = cache_.find(failed); it != cache_.end()) return it->second;
  std::vector<std::size_t> indices;
  indices.reserve(failed.size());
  for (const std::string& id : failed) indices.push_back(model_.index_of(id));
  const DamageReport d = model_.damage_of_failure(indices);
  cache_.emplace(failed, d);
  return d;
}

std::vector<std::string> eligible_candidates(const JointNetwork& net,
                                             CandidateScope scope) {
  return scope == CandidateScope::kIncludeEdgeEntities ? net.all_ids()
                                                       : net.node_ids();
}

SolveResult exact_k_list(const JointNetwork& net, const ContingencyQuery& q) {
  const std::vector<std::string> pool = eligible_candidates(net, q.scope);
  if (q.k < 1) throw SolverError("k must be positive");
  if (static_cast<std::size_t>(q.k) > pool.size()) {
    throw InfeasibleQuery("k=" + std::to_string(q.k) + " exceeds the " +
                          std::to_string(pool.size()) + " eligible candidates");
  }
  const CascadeModel model(net, q.mode);
  std::vector<std::size_t> pool_index(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) pool_index[i] = model.index_of(pool[i]);

  detail::ArgmaxSets best(q.objective);
  std::vector<std::size_t> idx(static_cast<std::size_t>(q.k));
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::vector<std::size_t> failed(idx.size());
  std::size_t evaluated = 0;
  do {
    for (std::size_t i = 0; i < idx.size(); ++i) failed[i] = pool_index[idx[i]];
    const DamageReport d = model.damage_of_failure(failed);
    ++evaluated;
    if (best.best() && compare_damage(d, *best.best(), q.objective) < 0) continue;
    IdSet set;
    for (std::size_t i : idx) set.insert(pool[i]);
    best.offer(set, d);
  } while (detail::next_combination(idx, pool.size()));

  return {best.finish(q.k), evaluated};
}

bool decide_k_s(const JointNetwork& net, const ContingencyQuery& q) {
  if (!q.s) throw SolverError("decision query needs a threshold s");
  ContingencyQuery by_count = q;
  by_count.objective = Objective::kFailed;
  const SolveResult r = exact_k_list(net, by_count);
  return r.list.damage.failed_count >= *q.s;
}

}  // namespace kcl
