#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>

#include "doctest.h"
#include "mel/normalizer.hpp"
#include "test_support.hpp"

using namespace mel;

namespace {

ConceptExpr atom(const char* n) { return ConceptExpr::atomic(n); }

Signature sig_of(std::initializer_list<const char*> concepts, std::initializer_list<const char*> roles = {},
                 std::initializer_list<const char*> features = {},
                 std::initializer_list<const char*> individuals = {}) {
  Signature s;
  for (auto* c : concepts) s.concepts.insert(c);
  for (auto* r : roles) s.roles.insert(r);
  for (auto* f : features) s.features.insert(f);
  for (auto* a : individuals) s.individuals.insert(a);
  return s;
}

// Finite interpretation over at most 32 elements; concept extensions are
// bitmasks.
struct Interpretation {
  int size = 0;
  std::map<std::string, std::uint32_t> concepts;
  std::map<std::string, std::vector<std::uint32_t>> roles;  // successors per element
  std::map<std::string, std::vector<std::optional<int>>> features;
  std::map<std::string, int> individuals;
  std::map<std::string, ConceptExpr> concept_defs;          // fresh concept meanings
  std::map<std::string, std::vector<std::string>> role_defs;  // fresh role meanings

  std::uint32_t all() const { return size == 32 ? ~0U : (1U << size) - 1; }

  static bool satisfies(int x, const DatatypeRestriction& r) {
    Rational v(x);
    switch (r.op) {
      case CompareOp::Less:
        return v < r.value;
      case CompareOp::LessEqual:
        return v <= r.value;
      case CompareOp::Greater:
        return v > r.value;
      case CompareOp::GreaterEqual:
        return v >= r.value;
      case CompareOp::Equal:
        return v == r.value;
    }
    return false;
  }

  std::vector<std::uint32_t> role(const std::string& r) const {
    if (auto it = role_defs.find(r); it != role_defs.end()) {
      std::vector<std::uint32_t> acc = role(it->second[0]);
      for (std::size_t i = 1; i < it->second.size(); ++i) acc = compose(acc, role(it->second[i]));
      return acc;
    }
    return roles.at(r);
  }

  std::vector<std::uint32_t> compose(const std::vector<std::uint32_t>& a,
                                     const std::vector<std::uint32_t>& b) const {
    std::vector<std::uint32_t> out(static_cast<std::size_t>(size), 0);
    for (int x = 0; x < size; ++x) {
      for (int y = 0; y < size; ++y) {
        if (a[static_cast<std::size_t>(x)] >> y & 1U) out[static_cast<std::size_t>(x)] |= b[static_cast<std::size_t>(y)];
      }
    }
    return out;
  }

  std::uint32_t named(const std::string& n) const {
    if (n == kTop) return all();
    if (n == kBottom) return 0;
    if (auto it = concept_defs.find(n); it != concept_defs.end()) return ext(it->second);
    return concepts.at(n);
  }

  std::uint32_t ext(const Concept& c) const {
    return c.nominal ? 1U << individuals.at(c.name) : named(c.name);
  }

  std::uint32_t feature_ext(const std::string& f, const DatatypeRestriction& r) const {
    std::uint32_t out = 0;
    const auto& values = features.at(f);
    for (int x = 0; x < size; ++x) {
      if (values[static_cast<std::size_t>(x)] && satisfies(*values[static_cast<std::size_t>(x)], r)) out |= 1U << x;
    }
    return out;
  }

  std::uint32_t exists(const std::vector<std::uint32_t>& rel, std::uint32_t filler) const {
    std::uint32_t out = 0;
    for (int x = 0; x < size; ++x) {
      if (rel[static_cast<std::size_t>(x)] & filler) out |= 1U << x;
    }
    return out;
  }

  std::uint32_t ext(const ConceptExpr& e) const {
    switch (e.kind) {
      case ConceptExpr::Kind::Atomic:
        return named(e.name);
      case ConceptExpr::Kind::Nominal:
        return 1U << individuals.at(e.name);
      case ConceptExpr::Kind::And: {
        std::uint32_t m = all();
        for (const auto& op : e.operands) m &= ext(op);
        return m;
      }
      case ConceptExpr::Kind::Exists:
        return exists(role(e.name), ext(e.operands[0]));
      case ConceptExpr::Kind::FeatureExists:
        return feature_ext(e.name, e.restriction);
    }
    return 0;
  }

  static bool within(std::uint32_t a, std::uint32_t b) { return (a & ~b) == 0; }

  bool relation_within(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) const {
    for (int x = 0; x < size; ++x) {
      if (!within(a[static_cast<std::size_t>(x)], b[static_cast<std::size_t>(x)])) return false;
    }
    return true;
  }

  bool holds(const RoleAssertion& s) const {
    return role(s.role)[static_cast<std::size_t>(individuals.at(s.subject))] >> individuals.at(s.object) & 1U;
  }
  bool holds(const FeatureAssertion& s) const {
    auto v = features.at(s.feature)[static_cast<std::size_t>(individuals.at(s.individual))];
    return v && Rational(*v) == s.value;
  }

  bool holds(const NormalStatement& st) const {
    return std::visit(
        [&](const auto& s) -> bool {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, ConceptAssertion>) {
            return ext(s.type) >> individuals.at(s.individual) & 1U;
          } else if constexpr (std::is_same_v<T, RoleAssertion> || std::is_same_v<T, FeatureAssertion>) {
            return holds(s);
          } else if constexpr (std::is_same_v<T, Subsumption>) {
            return within(ext(s.sub), ext(s.sup));
          } else if constexpr (std::is_same_v<T, NominalSubsumption>) {
            return within(ext(s.sub), 1U << individuals.at(s.individual));
          } else if constexpr (std::is_same_v<T, ConjunctionSubsumption>) {
            return within(ext(s.left) & ext(s.right), ext(s.sup));
          } else if constexpr (std::is_same_v<T, ExistentialSubsumption>) {
            return within(exists(role(s.role), ext(s.filler)), ext(s.sup));
          } else if constexpr (std::is_same_v<T, ExistentialRestriction>) {
            return within(ext(s.sub), exists(role(s.role), ext(s.filler)));
          } else if constexpr (std::is_same_v<T, FeatureRestriction>) {
            return within(ext(s.sub), feature_ext(s.feature, s.restriction));
          } else if constexpr (std::is_same_v<T, FeatureSubsumption>) {
            return within(feature_ext(s.feature, s.restriction), ext(s.sup));
          } else if constexpr (std::is_same_v<T, ConjunctionFeatureRestriction>) {
            return within(ext(s.left) & ext(s.right), feature_ext(s.feature, s.restriction));
          } else if constexpr (std::is_same_v<T, RoleInclusion>) {
            return relation_within(role(s.sub), role(s.sup));
          } else {
            return relation_within(compose(role(s.first), role(s.second)), role(s.sup));
          }
        },
        st);
  }

  bool holds(const GeneralAxiom& ax) const {
    return std::visit(
        [&](const auto& a) -> bool {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, ConceptInclusion>) {
            return within(ext(a.sub), ext(a.sup));
          } else if constexpr (std::is_same_v<T, ConceptEquivalence>) {
            return ext(a.left) == ext(a.right);
          } else if constexpr (std::is_same_v<T, RoleChainInclusion>) {
            std::vector<std::uint32_t> acc = role(a.chain[0]);
            for (std::size_t i = 1; i < a.chain.size(); ++i) acc = compose(acc, role(a.chain[i]));
            return relation_within(acc, role(a.sup));
          } else if constexpr (std::is_same_v<T, ExprAssertion>) {
            return ext(a.type) >> individuals.at(a.individual) & 1U;
          } else {
            return holds(a);
          }
        },
        ax);
  }
};

class AxiomGen {
 public:
  explicit AxiomGen(std::uint64_t seed) : rng_(seed) {}

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  ConceptExpr expr(int depth) {
    int kind = depth <= 0 ? pick(0, 2) : pick(0, 6);
    switch (kind) {
      case 0:
      case 1:
        return atom(names_[static_cast<std::size_t>(pick(0, 3))]);
      case 2:
        if (pick(0, 1)) return ConceptExpr::nominal(pick(0, 1) ? "a" : "b");
        return ConceptExpr::feature_exists("f", {kAllCompareOps[pick(0, 4)], Rational(pick(0, 3))});
      case 3:
      case 4: {
        std::vector<ConceptExpr> ops;
        int n = pick(2, 3);
        for (int i = 0; i < n; ++i) ops.push_back(expr(depth - 1));
        return ConceptExpr::conjunction(std::move(ops));
      }
      default:
        return ConceptExpr::exists(pick(0, 1) ? "r" : "s", expr(depth - 1));
    }
  }

  GeneralAxiom axiom() {
    switch (pick(0, 5)) {
      case 0:
      case 1:
        return ConceptInclusion{expr(2), expr(2)};
      case 2:
        return ConceptEquivalence{expr(2), expr(2)};
      case 3: {
        RoleChainInclusion c;
        int n = pick(1, 4);
        for (int i = 0; i < n; ++i) c.chain.push_back(pick(0, 1) ? "r" : "s");
        c.sup = pick(0, 1) ? "r" : "s";
        return c;
      }
      case 4:
        return ExprAssertion{expr(2), pick(0, 1) ? "a" : "b"};
      default:
        return RoleAssertion{pick(0, 1) ? "r" : "s", "a", "b"};
    }
  }

  Interpretation interpretation() {
    Interpretation I;
    I.size = pick(2, 5);
    auto mask = [&] { return static_cast<std::uint32_t>(pick(0, (1 << I.size) - 1)); };
    for (const char* n : names_) I.concepts[n] = mask();
    for (const char* r : {"r", "s"}) {
      auto& rel = I.roles[r];
      for (int x = 0; x < I.size; ++x) rel.push_back(pick(0, 2) ? mask() & mask() : 0);
    }
    auto& f = I.features["f"];
    for (int x = 0; x < I.size; ++x) {
      f.push_back(pick(0, 2) ? std::optional<int>(pick(0, 3)) : std::nullopt);
    }
    I.individuals["a"] = pick(0, I.size - 1);
    I.individuals["b"] = pick(0, I.size - 1);
    return I;
  }

 private:
  std::mt19937_64 rng_;
  const char* names_[4] = {"A", "B", "C", "TOP"};
};

// Reads the fresh-name meanings back into expressions.
void define_fresh(Interpretation& I, const Normalization& n) {
  for (const auto& [name, meaning] : n.fresh_names) {
    if (name.rfind(kFreshRolePrefix, 0) == 0) {
      std::vector<std::string> chain;
      std::size_t start = 0;
      while (true) {
        std::size_t sep = meaning.find(" o ", start);
        chain.push_back(meaning.substr(start, sep - start));
        if (sep == std::string::npos) break;
        start = sep + 3;
      }
      I.role_defs[name] = chain;
    } else {
      KbDocument doc = parse_document(meaning + " SUBCLASSOF TOP");
      I.concept_defs[name] = std::get<ConceptInclusion>(doc.axioms.at(0).axiom).sub;
    }
  }
}

}  // namespace

TEST_CASE("teenager equivalence splits into inclusions with fresh names for the existentials") {
  DatatypeRestriction ge13{CompareOp::GreaterEqual, Rational(13)};
  DatatypeRestriction le19{CompareOp::LessEqual, Rational(19)};
  std::vector<WeightedAxiom> in{{ConceptEquivalence{atom("Teenager"),
                                                    ConceptExpr::conjunction({atom("Person"),
                                                                              ConceptExpr::feature_exists("age", ge13),
                                                                              ConceptExpr::feature_exists("age", le19)})},
                                 Weight::infinite()}};
  auto n = normalize(in, sig_of({"Teenager", "Person"}, {}, {"age"}));
  CHECK(n.fresh_names.at("_X1") == "age SOME (>=, 13)");
  CHECK(n.fresh_names.at("_X2") == "age SOME (<=, 19)");
  CHECK(n.kb.uncertain.empty());
  CHECK(validate(n.kb).empty());

  auto has = [&](const NormalStatement& s) {
    return std::any_of(n.kb.deterministic.begin(), n.kb.deterministic.end(),
                       [&](const WeightedStatement& ws) { return ws.statement == s; });
  };
  // Teenager SUBCLASSOF the conjunction
  CHECK(has(Subsumption{Concept::named("Teenager"), Concept::named("Person")}));
  CHECK(has(FeatureRestriction{Concept::named("Teenager"), "age", ge13}));
  CHECK(has(FeatureRestriction{Concept::named("Teenager"), "age", le19}));
  // the conjunction SUBCLASSOF Teenager
  CHECK(has(FeatureSubsumption{"age", ge13, Concept::named("_X1")}));
  CHECK(has(FeatureSubsumption{"age", le19, Concept::named("_X2")}));
  CHECK(has(ConjunctionSubsumption{Concept::named("Person"), Concept::named("_X1"), Concept::named("_X3")}));
  CHECK(has(ConjunctionSubsumption{Concept::named("_X3"), Concept::named("_X2"), Concept::named("Teenager")}));
}

TEST_CASE("normal input passes through unchanged") {
  std::vector<WeightedAxiom> in{{ConceptInclusion{atom("A"), atom("B")}, Weight(Rational(1, 2))}};
  auto n = normalize(in, sig_of({"A", "B"}));
  CHECK(n.fresh_names.empty());
  REQUIRE(n.kb.uncertain.size() == 1);
  CHECK(n.kb.uncertain[0].statement == NormalStatement{Subsumption{Concept::named("A"), Concept::named("B")}});
  CHECK(n.kb.deterministic.empty());
}

TEST_CASE("role chains of length three binarize through one fresh role") {
  std::vector<WeightedAxiom> in{{RoleChainInclusion{{"R1", "R2", "R3"}, "R"}, Weight::infinite()}};
  auto n = normalize(in, sig_of({}, {"R1", "R2", "R3", "R"}));
  REQUIRE(n.kb.deterministic.size() == 2);
  CHECK(n.kb.deterministic[0].statement == NormalStatement{RoleComposition{"R1", "R2", "_U1"}});
  CHECK(n.kb.deterministic[1].statement == NormalStatement{RoleComposition{"_U1", "R3", "R"}});
  CHECK(n.kb.signature.roles.contains("_U1"));
}

TEST_CASE("binarized chain preserves role entailments over the original names") {
  auto kb = parse_kb(
      "r1(a, b)\nr2(b, c)\nr3(c, d)\nROLECHAIN r1 r2 r3 SUBROLEOF r\n"
      "r SOME TOP SUBCLASSOF Linked\n");
  Reasoner reasoner(kb);
  auto classified = reasoner.classified(reasoner.deterministic_closure());
  auto has = [&](const NormalStatement& s) {
    return std::find(classified.begin(), classified.end(), s) != classified.end();
  };
  CHECK(has(RoleAssertion{"r", "a", "d"}));
  CHECK(has(ConceptAssertion{Concept::named("Linked"), "a"}));
  CHECK_FALSE(has(RoleAssertion{"r", "b", "d"}));
}

TEST_CASE("fresh names skip names already in the signature") {
  std::vector<WeightedAxiom> in{{ConceptInclusion{atom("A"), ConceptExpr::exists("r", ConceptExpr::exists("r", atom("B")))},
                                 Weight::infinite()}};
  auto n = normalize(in, sig_of({"A", "B", "_X1"}, {"r"}));
  CHECK_FALSE(n.fresh_names.contains("_X1"));
  CHECK(n.fresh_names.contains("_X2"));
}

TEST_CASE("unknown symbols are rejected") {
  std::vector<WeightedAxiom> in{{ConceptInclusion{atom("A"), atom("Missing")}, Weight::infinite()}};
  CHECK_THROWS_AS(normalize(in, sig_of({"A"})), ValidationError);
}

TEST_CASE("weight lands on exactly one statement") {
  AxiomGen gen(3);
  Signature sig = sig_of({"A", "B", "C"}, {"r", "s"}, {"f"}, {"a", "b"});
  for (int i = 0; i < 300; ++i) {
    GeneralAxiom ax = gen.axiom();
    std::vector<WeightedAxiom> in{{ax, Weight(Rational(3, 10))}};
    auto n = normalize(in, sig);
    std::size_t expected = std::holds_alternative<ConceptEquivalence>(ax) ? 2 : 1;
    CAPTURE(format_axiom(ax));
    CHECK(n.kb.uncertain.size() == expected);
    for (const auto& ws : n.kb.uncertain) CHECK(ws.weight == Weight(Rational(3, 10)));
    CHECK(validate(n.kb).empty());
  }
}

TEST_CASE("normalization is conservative under sampled interpretations") {
  // With each fresh name read as the expression it abbreviates, an axiom
  // holds exactly when all of its normalized statements hold.
  AxiomGen gen(19);
  Signature sig = sig_of({"A", "B", "C"}, {"r", "s"}, {"f"}, {"a", "b"});
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    GeneralAxiom ax = gen.axiom();
    std::vector<WeightedAxiom> in{{ax, Weight::infinite()}};
    auto n = normalize(in, sig);
    for (int k = 0; k < 20; ++k) {
      Interpretation I = gen.interpretation();
      define_fresh(I, n);
      bool original = I.holds(ax);
      bool normalized = std::all_of(n.kb.deterministic.begin(), n.kb.deterministic.end(),
                                    [&](const WeightedStatement& ws) { return I.holds(ws.statement); });
      CAPTURE(format_axiom(ax));
      CHECK(original == normalized);
      ++checked;
    }
  }
  CHECK(checked == 8000);
}
