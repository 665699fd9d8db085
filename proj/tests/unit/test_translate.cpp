#include <algorithm>

#include "doctest.h"
#include "mel/translate.hpp"
#include "test_support.hpp"

using namespace mel;

namespace {

KnowledgeBase kb_of(std::vector<NormalStatement> statements) {
  KnowledgeBase kb;
  for (auto& s : statements) {
    declare_names(s, kb.signature);
    kb.deterministic.push_back({std::move(s), Weight::infinite()});
  }
  return kb;
}

std::size_t count_prefix(const std::vector<ClauseTemplate>& ts, const std::string& prefix) {
  return static_cast<std::size_t>(std::count_if(ts.begin(), ts.end(), [&](const ClauseTemplate& t) {
    return t.id.rfind(prefix, 0) == 0;
  }));
}

}  // namespace

TEST_CASE("phi maps statements to their predicates") {
  DatatypeRestriction le3{CompareOp::LessEqual, Rational(3)};
  auto kb = kb_of({FeatureRestriction{Concept::named("A"), "F", le3},
                   ConceptAssertion{Concept::named("C"), "a"},
                   Subsumption{Concept::top(), Concept::top()}});
  Universe u = Universe::for_kb(kb);

  GroundAtom ex = phi(kb.deterministic[0].statement, u);
  CHECK(ex.predicate == Predicate::RsupEx);
  CHECK(format_atom(ex, u) == "rsupEx(A,F,<=,3)");

  GroundAtom inst = phi(kb.deterministic[1].statement, u);
  CHECK(inst.predicate == Predicate::Inst);
  CHECK(format_atom(inst, u) == "inst(a,C)");

  GroundAtom top = phi(kb.deterministic[2].statement, u);
  CHECK(format_atom(top, u) == "sub(TOP,TOP)");
}

TEST_CASE("phi_inverse recovers statements") {
  DatatypeRestriction le3{CompareOp::LessEqual, Rational(3)};
  auto kb = kb_of({FeatureSubsumption{"age", le3, Concept::named("Toddler")},
                   Subsumption{Concept::named("A"), Concept::named("A")},
                   RoleComposition{"R1", "R2", "R"}});
  Universe u = Universe::for_kb(kb);
  for (const auto& ws : kb.deterministic) {
    GroundAtom a = phi(ws.statement, u);
    CHECK(phi_inverse(a, u) == ws.statement);
  }
  CHECK(format_statement(kb.deterministic[0].statement) == "age SOME (<=, 3) SUBCLASSOF Toddler");
  CHECK(format_statement(kb.deterministic[2].statement) == "ROLECHAIN R1 R2 SUBROLEOF R");
}

TEST_CASE("phi rejects unknown names and phi_inverse rejects eval atoms") {
  auto kb = kb_of({Subsumption{Concept::named("A"), Concept::named("B")}});
  Universe u = Universe::for_kb(kb);
  CHECK_THROWS_AS(phi(Subsumption{Concept::named("A"), Concept::named("Z")}, u), ValidationError);

  auto dk = kb_of({FeatureRestriction{Concept::named("A"), "F", {CompareOp::Equal, Rational(1)}}});
  Universe du = Universe::for_kb(dk);
  GroundAtom e{Predicate::Eval, {du.op(CompareOp::Equal), *du.find_value(Rational(1)),
                                 du.op(CompareOp::Equal), *du.find_value(Rational(1)), 0}};
  CHECK_THROWS_AS(phi_inverse(e, du), ValidationError);
}

TEST_CASE("phi is a bijection on random knowledge bases") {
  testing::RandomKb gen(5, {});
  for (int i = 0; i < 300; ++i) {
    KnowledgeBase kb = gen.next();
    Universe u = Universe::for_kb(kb);
    std::vector<GroundAtom> images;
    for (const auto* part : {&kb.deterministic, &kb.uncertain}) {
      for (const auto& ws : *part) {
        GroundAtom a = phi(ws.statement, u);
        CHECK(well_typed(a, u));
        CHECK(phi_inverse(a, u) == ws.statement);
        CHECK(phi(phi_inverse(a, u), u) == a);
        images.push_back(a);
      }
    }
    // Distinct statements map to distinct atoms.
    std::vector<NormalStatement> statements;
    for (const auto* part : {&kb.deterministic, &kb.uncertain}) {
      for (const auto& ws : *part) statements.push_back(ws.statement);
    }
    for (std::size_t x = 0; x < statements.size(); ++x) {
      for (std::size_t y = x + 1; y < statements.size(); ++y) {
        CHECK((statements[x] == statements[y]) == (images[x] == images[y]));
      }
    }
  }
}

TEST_CASE("every well-typed stored atom over a small universe round-trips") {
  auto kb = kb_of({Subsumption{Concept::named("A"), Concept::named("B")},
                   RoleAssertion{"r", "a", "b"},
                   FeatureRestriction{Concept::named("A"), "f", {CompareOp::Less, Rational(2)}}});
  Universe u = Universe::for_kb(kb);
  std::size_t checked = 0;
  for (std::size_t p = 0; p + 1 < kPredicateCount; ++p) {
    auto pred = static_cast<Predicate>(p);
    std::size_t n = arity(pred);
    std::vector<ConstId> all;
    for (ConstId c = 0; c < static_cast<ConstId>(u.size()); ++c) all.push_back(c);
    std::vector<std::size_t> idx(n, 0);
    while (true) {
      GroundAtom a{pred, {}};
      for (std::size_t i = 0; i < n; ++i) a.args[i] = all[idx[i]];
      bool named = true;
      for (std::size_t i = 0; i < n; ++i) {
        if (u.sort(a.args[i]) == Sort::Individual && u.is_witness(a.args[i])) named = false;
      }
      if (named && well_typed(a, u)) {
        CHECK(phi(phi_inverse(a, u), u) == a);
        ++checked;
      }
      std::size_t i = 0;
      while (i < n && ++idx[i] == all.size()) idx[i++] = 0;
      if (i == n) break;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("unique-name facts: one per unordered pair of individuals") {
  Signature one;
  one.individuals = {"john"};
  auto t1 = rule_templates(one);
  CHECK(count_prefix(t1, "UNA[") == 0);
  CHECK(count_prefix(t1, "NOM[") == 1);

  Signature two;
  two.individuals = {"a", "b"};
  auto t2 = rule_templates(two);
  REQUIRE(count_prefix(t2, "UNA[") == 1);
  auto it = std::find_if(t2.begin(), t2.end(), [](const ClauseTemplate& t) { return t.id == "UNA[a,b]"; });
  REQUIRE(it != t2.end());
  CHECK(format_template(*it) == "UNA[a,b]: -> int({a},{b},BOT)");

  Signature four;
  four.individuals = {"a", "b", "c", "d"};
  CHECK(count_prefix(rule_templates(four), "UNA[") == 6);
}

TEST_CASE("completion templates are hard and render readably") {
  auto ts = rule_templates(Signature{});
  for (const auto& t : ts) CHECK(t.weight.is_infinite());
  auto f13 = std::find_if(ts.begin(), ts.end(), [](const ClauseTemplate& t) { return t.id == "F13"; });
  REQUIRE(f13 != ts.end());
  CHECK(format_template(*f13) ==
        "F13: rsupEx(c,f,o1,v1) & rsubEx(f,o2,v2,d) & eval(o1,v1,o2,v2) -> sub(c,d)");
  auto coh = std::find_if(ts.begin(), ts.end(), [](const ClauseTemplate& t) { return t.id == "COH"; });
  REQUIRE(coh != ts.end());
  CHECK(format_template(*coh) == "COH: sub(c,BOT) & c != BOT -> FALSE");
  for (int i = 1; i <= 27; ++i) {
    std::string id = "F" + std::to_string(i);
    CHECK(std::any_of(ts.begin(), ts.end(), [&](const ClauseTemplate& t) { return t.id == id; }));
  }
}
