#pragma once

// Internal helpers shared by the solvers.

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "kcl/solvers.hpp"

namespace kcl::detail {

/// Keeps every set tied at the best damage seen so far.
class ArgmaxSets {
 public:
  explicit ArgmaxSets(Objective objective) : objective_(objective) {}

  void offer(const IdSet& set, const DamageReport& damage) {
    if (!best_ || compare_damage(damage, *best_, objective_) > 0) {
      best_ = damage;
      entries_.clear();
    } else if (compare_damage(damage, *best_, objective_) < 0) {
      return;
    }
    entries_.emplace_back(set, damage);
  }

  bool empty() const noexcept { return entries_.empty(); }
  const std::optional<DamageReport>& best() const noexcept { return best_; }

  std::vector<IdSet> sets() const {
    std::vector<IdSet> out;
    for (const auto& [set, d] : sorted()) out.push_back(set);
    return out;
  }

  ContingencyList finish(int k) const {
    ContingencyList list;
    list.k = k;
    const auto entries = sorted();
    for (const auto& [set, d] : entries) list.best_sets.push_back(set);
    if (!entries.empty()) list.damage = entries.front().second;
    return list;
  }

 private:
  std::vector<std::pair<IdSet, DamageReport>> sorted() const {
    auto entries = entries_;
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    entries.erase(std::unique(entries.begin(), entries.end(),
                              [](const auto& a, const auto& b) {
                                return a.first == b.first;
                              }),
                  entries.end());
    return entries;
  }

  Objective objective_;
  std::optional<DamageReport> best_;
  std::vector<std::pair<IdSet, DamageReport>> entries_;
};

/// Advances `idx` (strictly increasing, values < n) to the next
/// lexicographic combination. Returns false after the last one.
inline bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace kcl::detail
