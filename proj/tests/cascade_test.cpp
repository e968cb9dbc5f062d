#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "fuzz.hpp"
#include "json.hpp"
#include "kcl/cascade.hpp"
#include "reference.hpp"

namespace kcl {
namespace {

using testing::net_a;

std::map<std::string, int> as_ints(const StateTable& t) {
  std::map<std::string, int> out;
  for (const auto& [id, s] : t.values()) out[id] = to_int(s);
  return out;
}

TEST(Step, NetAFirstRound) {
  const JointNetwork net = net_a();
  const StateTable next = step_once(net, StateTable::all_full(net), {"P1"}, Mode::kMiim);
  EXPECT_EQ(as_ints(next), (std::map<std::string, int>{
                               {"P1", 0}, {"C1", 0}, {"P2", 0}, {"P3", 2}, {"C2", 2}}));
}

TEST(Step, HealthyTableIsFixed) {
  const JointNetwork net = net_a();
  const StateTable full = StateTable::all_full(net);
  EXPECT_EQ(step_once(net, full, {}, Mode::kMiim), full);
  EXPECT_EQ(step_once(net, full, {}, Mode::kIim), full);
}

TEST(Step, ExampleFragmentReducesUnderMiim) {
  ParseResult<JointNetwork> r = parse_network(
      "[entities]\nCi substation_entity\nCj substation_entity\nCk substation_entity\n"
      "Cl substation_entity\nPa bus\nPb bus\n"
      "[idrs]\nCi <- ((Cj . Pa) + (Ck . Pb)) ^ Cl\n");
  ASSERT_TRUE(r.ok());
  const CascadeTrace miim = run_cascade(*r.value, {"Cl"}, Mode::kMiim);
  EXPECT_EQ(miim.rounds.back().at("Ci"), State::kReduced);
  const CascadeTrace iim = run_cascade(*r.value, {"Cl"}, Mode::kIim);
  EXPECT_EQ(iim.rounds.back().at("Ci"), State::kDown);
}

TEST(Cascade, NetAFailP1) {
  const CascadeTrace t = run_cascade(net_a(), {"P1"}, Mode::kMiim);
  ASSERT_TRUE(t.steady);
  EXPECT_EQ(t.rounds[1].ids_at(State::kDown), (IdSet{"C1", "P1", "P2"}));
  EXPECT_EQ(t.rounds[2].ids_at(State::kDown), (IdSet{"C1", "C2", "P1", "P2", "P3"}));
  const DamageReport d = damage_of(t);
  EXPECT_EQ(d, (DamageReport{5, 10, 2}));
}

TEST(Cascade, NetAFailP2) {
  const CascadeTrace t = run_cascade(net_a(), {"P2"}, Mode::kMiim);
  EXPECT_EQ(as_ints(t.rounds.back()), (std::map<std::string, int>{
                                          {"P1", 2}, {"C1", 2}, {"P2", 0}, {"P3", 2}, {"C2", 1}}));
  EXPECT_EQ(damage_of(t), (DamageReport{1, 3, 1}));
}

TEST(Cascade, NoFailure) {
  const CascadeTrace t = run_cascade(net_a(), {}, Mode::kMiim);
  EXPECT_EQ(t.rounds.size(), 2u);
  EXPECT_EQ(damage_of(t), (DamageReport{0, 0, 0}));
}

TEST(Cascade, Errors) {
  EXPECT_THROW(run_cascade(net_a(), {"Q7"}, Mode::kMiim), CascadeError);
  CascadeTrace partial = run_cascade(net_a(), {"P1"}, Mode::kMiim);
  partial.steady = false;
  EXPECT_THROW(damage_of(partial), CascadeError);
}

TEST(Cascade, SubstitutionDiffersFromPruning) {
  // A ^ B with A failed: during a cascade A reads as 0, after pruning B alone remains.
  ParseResult<JointNetwork> r =
      parse_network("[entities]\nA bus\nB bus\nX bus\n[idrs]\nX <- A ^ B\n");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(run_cascade(*r.value, {"A"}, Mode::kMiim).rounds.back().at("X"), State::kReduced);
  const JointNetwork pruned = apply_self_update(*r.value, {"A"});
  EXPECT_EQ(*pruned.idr("X"), Expr::ref("B"));
  EXPECT_EQ(run_cascade(pruned, {}, Mode::kMiim).rounds.back().at("X"), State::kFull);
}

TEST(Cascade, SelfLiteralIgnored) {
  ParseResult<JointNetwork> r =
      parse_network("[entities]\nA bus\nB bus\n[idrs]\nA <- A . B\nB <- B\n");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(damage_of(run_cascade(*r.value, {"B"}, Mode::kMiim)).failed_count, 2);
  EXPECT_EQ(damage_of(run_cascade(*r.value, {}, Mode::kMiim)).failed_count, 0);
}

TEST(SelfUpdate, NetACases) {
  const JointNetwork net = net_a();
  const JointNetwork without_p3 = apply_self_update(net, {"P3"});
  EXPECT_EQ(without_p3.size(), 4u);
  EXPECT_EQ(without_p3.idr("P3"), nullptr);
  EXPECT_EQ(without_p3.idrs().size(), 3u);
  EXPECT_EQ(*without_p3.idr("C2"), *net.idr("C2"));

  EXPECT_EQ(self_update_closure(net, {"P1"}), (IdSet{"C1", "C2", "P1", "P2", "P3"}));
  EXPECT_EQ(apply_self_update(net, {"P1"}).size(), 0u);
  EXPECT_EQ(apply_self_update(net, {}), net);
}

TEST(SelfUpdate, Idempotent) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const JointNetwork net = testing::random_network(rng);
    const std::vector<std::string> ids = net.all_ids();
    IdSet failed{ids[rng() % ids.size()]};
    const JointNetwork once = apply_self_update(net, failed);
    EXPECT_EQ(apply_self_update(once, {}), once);
    for (const auto& [id, expr] : once.idrs()) {
      for (const std::string& ref : referenced_ids(expr)) EXPECT_TRUE(once.contains(ref));
    }
  }
}

TEST(Cascade, MatchesReferenceOnFuzz) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 300; ++i) {
    const JointNetwork net = testing::random_network(rng);
    const std::vector<std::string> ids = net.all_ids();
    IdSet failed;
    for (const std::string& id : ids) {
      if (rng() % 4 == 0) failed.insert(id);
    }
    for (Mode mode : {Mode::kMiim, Mode::kIim}) {
      const CascadeTrace t = run_cascade(net, failed, mode);
      const testing::RefCascade ref = testing::ref_cascade(net, failed, mode);
      ASSERT_EQ(t.rounds.size(), ref.rounds.size());
      for (std::size_t r = 0; r < t.rounds.size(); ++r) {
        ASSERT_EQ(as_ints(t.rounds[r]), ref.rounds[r]);
      }
      EXPECT_EQ(damage_of(t), testing::ref_damage(net, failed, mode));
    }
  }
}

TEST(Damage, DeficitBounds) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    const JointNetwork net = testing::random_network(rng);
    const std::vector<std::string> ids = net.all_ids();
    const DamageReport d =
        damage_of(run_cascade(net, {ids[rng() % ids.size()]}, Mode::kMiim));
    const int n = static_cast<int>(net.size());
    EXPECT_GE(d.state_deficit, 2 * d.failed_count);
    EXPECT_LE(d.state_deficit, 2 * d.failed_count + (n - d.failed_count));
  }
}

TEST(Damage, Ordering) {
  const DamageReport a{3, 6, 1};
  const DamageReport b{2, 9, 4};
  EXPECT_TRUE(compare_damage(a, b, Objective::kFailed) > 0);
  EXPECT_TRUE(compare_damage(a, b, Objective::kDeficit) < 0);
  EXPECT_TRUE(compare_damage(a, DamageReport{3, 6, 9}, Objective::kFailed) == 0);
}

TEST(Export, CsvAndJson) {
  const CascadeTrace t = run_cascade(net_a(), {"P2"}, Mode::kMiim);
  const std::string csv = trace_to_csv(t);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "round,entity,state");
  EXPECT_NE(csv.find("1,C2,1\n"), std::string::npos);
  const auto j = nlohmann::json::parse(trace_to_json(t));
  ASSERT_EQ(j.size(), t.rounds.size());
  EXPECT_EQ(j[1]["C2"], 1);
}

}  // namespace
}  // namespace kcl
