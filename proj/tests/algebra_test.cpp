#include <gtest/gtest.h>

#include "kcl/algebra.hpp"
#include "kcl/dsl.hpp"

namespace kcl {
namespace {

constexpr State kAll[] = {State::kDown, State::kReduced, State::kFull};

Expr parse(std::string_view text) { return *parse_expr(text).value; }

StateLookup lookup_of(std::map<std::string, State, std::less<>> m) {
  return [m = std::move(m)](std::string_view id) -> std::optional<State> {
    auto it = m.find(id);
    if (it == m.end()) return std::nullopt;
    return it->second;
  };
}

TEST(Operators, TruthTableRows) {
  // Input 1, input 2, min-AND, max-OR, new XOR.
  const int rows[9][5] = {{2, 2, 2, 2, 2}, {2, 1, 1, 2, 1}, {2, 0, 0, 2, 1},
                          {1, 2, 1, 2, 1}, {1, 1, 1, 1, 1}, {1, 0, 0, 1, 1},
                          {0, 2, 0, 2, 1}, {0, 1, 0, 1, 1}, {0, 0, 0, 0, 0}};
  for (const auto& r : rows) {
    const State a = state_from_int(r[0]);
    const State b = state_from_int(r[1]);
    EXPECT_EQ(to_int(min_and(a, b)), r[2]) << r[0] << "," << r[1];
    EXPECT_EQ(to_int(max_or(a, b)), r[3]) << r[0] << "," << r[1];
    EXPECT_EQ(to_int(new_xor({a, b})), r[4]) << r[0] << "," << r[1];
  }
}

TEST(Operators, MinMaxLaws) {
  for (State a : kAll) {
    EXPECT_EQ(min_and(a, a), a);
    EXPECT_EQ(max_or(a, a), a);
    for (State b : kAll) {
      EXPECT_EQ(min_and(a, b), min_and(b, a));
      EXPECT_EQ(max_or(a, b), max_or(b, a));
      for (State c : kAll) {
        EXPECT_EQ(min_and(min_and(a, b), c), min_and(a, min_and(b, c)));
        EXPECT_EQ(max_or(max_or(a, b), c), max_or(a, max_or(b, c)));
      }
    }
  }
}

void check_xor_fold(std::vector<State>& seq, std::size_t len) {
  if (seq.size() == len) {
    State folded = seq.front();
    for (std::size_t i = 1; i < seq.size(); ++i) folded = new_xor({folded, seq[i]});
    ASSERT_EQ(folded, new_xor(seq));
    return;
  }
  for (State s : kAll) {
    seq.push_back(s);
    check_xor_fold(seq, len);
    seq.pop_back();
  }
}

TEST(Operators, XorLeftFoldMatchesNary) {
  for (std::size_t len = 1; len <= 4; ++len) {
    std::vector<State> seq;
    check_xor_fold(seq, len);
  }
}

TEST(Operators, XorEdgeCases) {
  EXPECT_EQ(new_xor({State::kReduced}), State::kReduced);
  EXPECT_THROW(new_xor({}), AlgebraError);
  EXPECT_EQ(new_xor({State::kFull, State::kFull, State::kDown}), State::kReduced);
}

TEST(Operators, Monotone) {
  for (State a : kAll) {
    for (State a2 : kAll) {
      if (a > a2) continue;
      for (State b : kAll) {
        for (State b2 : kAll) {
          if (b > b2) continue;
          EXPECT_LE(min_and(a, b), min_and(a2, b2));
          EXPECT_LE(max_or(a, b), max_or(a2, b2));
          EXPECT_LE(new_xor({a, b}), new_xor({a2, b2}));
        }
      }
    }
  }
}

TEST(Eval, ExampleRelationUnderBothModes) {
  const auto states = lookup_of({{"Cj", State::kFull},
                                 {"Pa", State::kFull},
                                 {"Ck", State::kFull},
                                 {"Pb", State::kFull},
                                 {"Cl", State::kDown}});
  EXPECT_EQ(eval_expr(parse("((Cj . Pa) + (Ck . Pb)) ^ Cl"), states, Mode::kMiim),
            State::kReduced);
  EXPECT_EQ(eval_expr(parse("((Cj . Pa) + (Ck . Pb)) . Cl"), states, Mode::kIim),
            State::kDown);
}

TEST(Eval, Errors) {
  const auto states = lookup_of({{"a", State::kFull}, {"r", State::kReduced}});
  EXPECT_EQ(eval_expr(Expr::ref("a"), states, Mode::kMiim), State::kFull);
  try {
    eval_expr(parse("a . zz"), states, Mode::kMiim);
    FAIL() << "expected an unresolved reference";
  } catch (const AlgebraError& e) {
    EXPECT_NE(std::string(e.what()).find("zz"), std::string::npos);
  }
  EXPECT_THROW(eval_expr(parse("a ^ a"), states, Mode::kIim), AlgebraError);
  EXPECT_THROW(eval_expr(Expr::ref("r"), states, Mode::kIim), AlgebraError);
  EXPECT_THROW(eval_expr(Expr::min_and({}), states, Mode::kMiim), AlgebraError);
}

TEST(Eval, IimStaysBinary) {
  const Expr e = parse("(a . b) + c . (a + b)");
  for (State a : {State::kDown, State::kFull}) {
    for (State b : {State::kDown, State::kFull}) {
      for (State c : {State::kDown, State::kFull}) {
        const State v = eval_expr(e, lookup_of({{"a", a}, {"b", b}, {"c", c}}), Mode::kIim);
        EXPECT_NE(v, State::kReduced);
      }
    }
  }
}

TEST(Eval, MonotoneInLookup) {
  const Expr e = parse("(a ^ b) + (a . c) ^ (b + c)");
  const auto eval = [&](int a, int b, int c) {
    return eval_expr(e,
                     lookup_of({{"a", state_from_int(a)},
                                {"b", state_from_int(b)},
                                {"c", state_from_int(c)}}),
                     Mode::kMiim);
  };
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      for (int c = 0; c < 3; ++c) {
        if (a < 2) EXPECT_LE(eval(a, b, c), eval(a + 1, b, c));
        if (b < 2) EXPECT_LE(eval(a, b, c), eval(a, b + 1, c));
        if (c < 2) EXPECT_LE(eval(a, b, c), eval(a, b, c + 1));
      }
    }
  }
}

TEST(Prune, DropsFailedReferences) {
  const Expr e = parse("((Cj . Pa) + (Ck . Pb)) ^ Cl");
  EXPECT_EQ(prune_expr(e, {"Cl"}), parse("(Cj . Pa) + (Ck . Pb)"));
  EXPECT_EQ(prune_expr(e, {}), e);
  EXPECT_EQ(prune_expr(Expr::ref("Cl"), {"Cl"}), std::nullopt);
  EXPECT_EQ(prune_expr(e, {"Cj", "Pa"}), parse("(Ck . Pb) ^ Cl"));
  EXPECT_EQ(prune_expr(e, {"Cj", "Pa", "Ck", "Pb", "Cl"}), std::nullopt);
  const std::optional<Expr> p = prune_expr(e, {"Pa", "Pb"});
  ASSERT_TRUE(p);
  EXPECT_FALSE(referenced_ids(*p).contains("Pa"));
  EXPECT_FALSE(referenced_ids(*p).contains("Pb"));
}

TEST(Projection, XorBecomesAnd) {
  const Expr e = parse("((Cj . Pa) + (Ck . Pb)) ^ Cl");
  EXPECT_TRUE(contains_new_xor(e));
  const Expr p = project_to_iim(e);
  EXPECT_FALSE(contains_new_xor(p));
  EXPECT_EQ(p, parse("((Cj . Pa) + (Ck . Pb)) . Cl"));
}

TEST(Trace, ReducesInnermostFirst) {
  const auto states = lookup_of({{"Cj", State::kFull},
                                 {"Pa", State::kFull},
                                 {"Ck", State::kFull},
                                 {"Pb", State::kFull},
                                 {"Cl", State::kDown}});
  const std::vector<std::string> miim = {"((2 . 2) + (2 . 2)) ^ 0", "(2 + 2) ^ 0", "2 ^ 0",
                                         "1"};
  EXPECT_EQ(reduction_trace(parse("((Cj . Pa) + (Ck . Pb)) ^ Cl"), states, Mode::kMiim),
            miim);
  EXPECT_EQ(reduction_trace(Expr::ref("Cl"), states, Mode::kMiim),
            std::vector<std::string>{"0"});
}

}  // namespace
}  // namespace kcl
