#include <algorithm>
#include <random>

#include "doctest.h"
#include "mel/ilp.hpp"
#include "test_support.hpp"

using namespace mel;

namespace {

struct Fixture {
  KnowledgeBase kb = parse_kb("A SUBCLASSOF B\nB SUBCLASSOF C\nA SUBCLASSOF C\n");
  Universe u = Universe::for_kb(kb);
  GroundAtom p = phi(kb.deterministic[0].statement, u);
  GroundAtom q = phi(kb.deterministic[1].statement, u);
  GroundAtom r = phi(kb.deterministic[2].statement, u);
};

ViolatedClause clause(std::vector<GroundAtom> pos, std::vector<GroundAtom> neg, Weight w) {
  ViolatedClause g;
  g.positive = std::move(pos);
  g.negative = std::move(neg);
  g.weight = w;
  g.template_id = "T";
  return g;
}

}  // namespace

TEST_CASE("hard unit clause becomes x >= 1") {
  Fixture f;
  VariableRegistry vars(f.u);
  auto cs = translate_clause(clause({f.p}, {}, Weight::infinite()), vars);
  REQUIRE(cs.size() == 1);
  std::size_t x = *vars.find(f.p);
  CHECK(cs[0] == LinearConstraint{{{x, 1}}, Relation::GreaterEqual, 1});
  CHECK(vars.program().objective.empty());
}

TEST_CASE("positive soft clause bounds its indicator from above") {
  Fixture f;
  VariableRegistry vars(f.u);
  auto cs = translate_clause(clause({f.p}, {f.q}, Weight(Rational(4, 5))), vars);
  REQUIRE(cs.size() == 1);
  std::size_t xp = *vars.find(f.p), xq = *vars.find(f.q);
  REQUIRE(vars.program().objective.size() == 1);
  auto [z, w] = vars.program().objective[0];
  CHECK(w == Rational(4, 5));
  // x_p + (1 - x_q) >= z
  CHECK(cs[0] == LinearConstraint{{{xp, 1}, {xq, -1}, {z, -1}}, Relation::GreaterEqual, -1});
  CHECK(vars.program().variables[z] == "z_0");
}

TEST_CASE("negative soft clause bounds its indicator from below") {
  Fixture f;
  VariableRegistry vars(f.u);
  auto cs = translate_clause(clause({f.p, f.q}, {}, Weight(Rational(-1, 2))), vars);
  REQUIRE(cs.size() == 1);
  std::size_t xp = *vars.find(f.p), xq = *vars.find(f.q);
  auto [z, w] = vars.program().objective[0];
  CHECK(w == Rational(-1, 2));
  // x_p + x_q <= 2 z
  CHECK(cs[0] == LinearConstraint{{{xp, 1}, {xq, 1}, {z, -2}}, Relation::LessEqual, 0});
}

TEST_CASE("zero-weight clauses contribute nothing") {
  Fixture f;
  VariableRegistry vars(f.u);
  CHECK(translate_clause(clause({f.p}, {f.q}, Weight(Rational(0))), vars).empty());
  CHECK(vars.program().variables.empty());
}

TEST_CASE("fixed-true atoms become constants") {
  Fixture f;
  TruthAssignment fixed;
  fixed.insert(f.q);
  VariableRegistry vars(f.u, &fixed);
  // q -> p with q fixed: x_p >= 1
  auto cs = translate_clause(clause({f.p}, {f.q}, Weight::infinite()), vars);
  REQUIRE(cs.size() == 1);
  CHECK(cs[0] == LinearConstraint{{{*vars.find(f.p), 1}}, Relation::GreaterEqual, 1});
  CHECK_FALSE(vars.find(f.q).has_value());
  // satisfied by a fixed positive literal
  CHECK(translate_clause(clause({f.q}, {f.p}, Weight::infinite()), vars).empty());
  // nothing left to satisfy
  CHECK_THROWS_AS(translate_clause(clause({}, {f.q}, Weight::infinite()), vars), IncoherentError);
}

TEST_CASE("translated clauses agree with clause semantics") {
  Fixture f;
  std::vector<GroundAtom> atoms{f.p, f.q, f.r};
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<GroundAtom> pos, neg;
    for (const auto& a : atoms) {
      int k = std::uniform_int_distribution<int>(0, 2)(rng);
      if (k == 1) pos.push_back(a);
      if (k == 2) neg.push_back(a);
    }
    int wk = std::uniform_int_distribution<int>(-3, 3)(rng);
    Weight w = wk == 3 ? Weight::infinite() : Weight(Rational(wk, 2));
    VariableRegistry vars(f.u);
    std::vector<LinearConstraint> cs;
    try {
      cs = translate_clause(clause(pos, neg, w), vars);
    } catch (const IncoherentError&) {
      CHECK((pos.empty() && neg.empty()));
      continue;
    }
    const IlpProgram& prog = vars.program();
    std::size_t n = prog.variables.size();
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
      std::vector<std::uint8_t> v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = (mask >> i) & 1U;
      bool clause_true = false;
      for (const auto& a : pos) clause_true |= v[*vars.find(a)] == 1;
      for (const auto& a : neg) clause_true |= v[*vars.find(a)] == 0;
      bool ok = std::all_of(cs.begin(), cs.end(), [&](const LinearConstraint& c) { return satisfies(c, v); });
      if (w.is_infinite()) {
        CHECK(ok == clause_true);
      } else if (!prog.objective.empty()) {
        std::uint8_t z = v[prog.objective[0].first];
        // positive: z may be 1 only if the clause holds; negative: z must be
        // 1 whenever it holds.
        if (w.value() > 0) CHECK(ok == (z == 0 || clause_true));
        if (w.value() < 0) CHECK(ok == (z == 1 || !clause_true));
      }
    }
  }
}

TEST_CASE("solve: forced optimum") {
  IlpProgram p;
  std::size_t x = p.add_variable("x");
  std::size_t z = p.add_variable("z");
  p.objective.emplace_back(z, Rational(1));
  p.constraints.push_back({{{x, 1}, {z, -1}}, Relation::GreaterEqual, 0});
  p.constraints.push_back({{{x, 1}}, Relation::GreaterEqual, 1});
  auto s = solve(p);
  CHECK(s.values == std::vector<std::uint8_t>{1, 1});
  CHECK(s.objective == Rational(1));
}

TEST_CASE("solve: empty program") {
  auto s = solve(IlpProgram{});
  CHECK(s.values.empty());
  CHECK(s.objective == Rational(0));
}

TEST_CASE("solve prefers the lexicographically smallest optimum") {
  IlpProgram p;
  for (int i = 0; i < 4; ++i) p.add_variable("v" + std::to_string(i));
  // exactly one of the four must be set; all are worth the same
  p.constraints.push_back({{{0, 1}, {1, 1}, {2, 1}, {3, 1}}, Relation::GreaterEqual, 1});
  p.constraints.push_back({{{0, 1}, {1, 1}, {2, 1}, {3, 1}}, Relation::LessEqual, 1});
  auto s = solve(p);
  CHECK(s.values == std::vector<std::uint8_t>{0, 0, 0, 1});
}

TEST_CASE("solve matches exhaustive enumeration on clause-shaped programs") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 100; ++i) {
    IlpProgram p = testing::random_clause_program(rng);
    auto expected = testing::enumerate(p);
    CAPTURE(to_lp_text(p));
    if (!expected.best) {
      CHECK_THROWS_AS(solve(p), InfeasibleError);
      continue;
    }
    auto s = solve(p);
    CHECK(s.objective == *expected.best);
    CHECK(s.values == expected.first_optimum);
    CHECK(objective_value(p, s.values) == s.objective);
  }
}

TEST_CASE("solve matches exhaustive enumeration on general programs") {
  std::mt19937_64 rng(77);
  int infeasible = 0;
  for (int i = 0; i < 300; ++i) {
    IlpProgram p = testing::random_general_program(rng);
    auto expected = testing::enumerate(p);
    CAPTURE(to_lp_text(p));
    CHECK(feasible(p) == expected.best.has_value());
    if (!expected.best) {
      ++infeasible;
      try {
        solve(p);
        FAIL("expected infeasible");
      } catch (const InfeasibleError& e) {
        // The reported subset is infeasible and irreducible.
        IlpProgram core;
        core.variables = p.variables;
        for (std::size_t c : e.constraints()) core.constraints.push_back(p.constraints.at(c));
        CHECK_FALSE(testing::enumerate(core).best.has_value());
        for (std::size_t drop = 0; drop < core.constraints.size(); ++drop) {
          IlpProgram smaller = core;
          smaller.constraints.erase(smaller.constraints.begin() + static_cast<long>(drop));
          CHECK(testing::enumerate(smaller).best.has_value());
        }
      }
      continue;
    }
    auto s = solve(p);
    CHECK(s.objective == *expected.best);
    CHECK(s.values == expected.first_optimum);
  }
  CHECK(infeasible > 5);
}

TEST_CASE("constraint order does not change the solution") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 60; ++i) {
    IlpProgram p = testing::random_clause_program(rng, 12, 30);
    if (!feasible(p)) continue;
    auto s = solve(p);
    IlpProgram shuffled = p;
    std::shuffle(shuffled.constraints.begin(), shuffled.constraints.end(), rng);
    std::shuffle(shuffled.objective.begin(), shuffled.objective.end(), rng);
    auto t = solve(shuffled);
    CHECK(t.values == s.values);
    CHECK(t.objective == s.objective);
  }
}

TEST_CASE("LP text lists objective, constraints and binaries") {
  IlpProgram p;
  std::size_t x = p.add_variable("x_a");
  std::size_t z0 = p.add_variable("z_0");
  std::size_t z1 = p.add_variable("z_1");
  p.objective = {{z0, Rational(4, 5)}, {z1, Rational(-1, 2)}};
  p.constraints.push_back({{{x, 1}, {z0, -1}}, Relation::GreaterEqual, 0});
  p.constraints.push_back({{{x, 1}, {z1, -1}}, Relation::LessEqual, 0});
  CHECK(to_lp_text(p) ==
        "OBJECTIVE\n"
        "  maximize: 0.8 z_0 - 0.5 z_1\n"
        "CONSTRAINTS\n"
        "  c0: x_a - z_0 >= 0\n"
        "  c1: x_a - z_1 <= 0\n"
        "BINARY\n"
        "  x_a\n"
        "  z_0\n"
        "  z_1\n");
}
