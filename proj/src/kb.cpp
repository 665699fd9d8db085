#include "mel/kb.hpp"

#include <algorithm>
#include <utility>

namespace mel {

std::string_view to_string(CompareOp op) {
  switch (op) {
    case CompareOp::Less:
      return "<";
    case CompareOp::LessEqual:
      return "<=";
    case CompareOp::Greater:
      return ">";
    case CompareOp::GreaterEqual:
      return ">=";
    case CompareOp::Equal:
      return "=";
  }
  return "?";
}

std::string format_concept(const Concept& c) {
  return c.nominal ? "{" + c.name + "}" : c.name;
}

namespace {

struct NameChecker {
  const Signature& sig;
  std::string problem;

  void on_concept(const Concept& c) {
    if (!problem.empty()) return;
    if (c.nominal) {
      if (!sig.individuals.contains(c.name)) problem = "unknown individual in nominal {" + c.name + "}";
    } else if (!sig.concepts.contains(c.name)) {
      problem = "unknown concept " + c.name;
    }
  }
  void role(const std::string& r) {
    if (problem.empty() && !sig.roles.contains(r)) problem = "unknown role " + r;
  }
  void feature(const std::string& f) {
    if (problem.empty() && !sig.features.contains(f)) problem = "unknown feature " + f;
  }
  void individual(const std::string& a) {
    if (problem.empty() && !sig.individuals.contains(a)) problem = "unknown individual " + a;
  }

  void operator()(const ConceptAssertion& s) {
    on_concept(s.type);
    individual(s.individual);
  }
  void operator()(const RoleAssertion& s) {
    role(s.role);
    individual(s.subject);
    individual(s.object);
  }
  void operator()(const FeatureAssertion& s) {
    feature(s.feature);
    individual(s.individual);
  }
  void operator()(const Subsumption& s) {
    on_concept(s.sub);
    on_concept(s.sup);
  }
  void operator()(const NominalSubsumption& s) {
    on_concept(s.sub);
    individual(s.individual);
  }
  void operator()(const ConjunctionSubsumption& s) {
    on_concept(s.left);
    on_concept(s.right);
    on_concept(s.sup);
  }
  void operator()(const ExistentialSubsumption& s) {
    role(s.role);
    on_concept(s.filler);
    on_concept(s.sup);
  }
  void operator()(const ExistentialRestriction& s) {
    on_concept(s.sub);
    role(s.role);
    on_concept(s.filler);
  }
  void operator()(const FeatureRestriction& s) {
    on_concept(s.sub);
    feature(s.feature);
  }
  void operator()(const FeatureSubsumption& s) {
    feature(s.feature);
    on_concept(s.sup);
  }
  void operator()(const ConjunctionFeatureRestriction& s) {
    on_concept(s.left);
    on_concept(s.right);
    feature(s.feature);
  }
  void operator()(const RoleInclusion& s) {
    role(s.sub);
    role(s.sup);
  }
  void operator()(const RoleComposition& s) {
    role(s.first);
    role(s.second);
    role(s.sup);
  }
};

struct NameDeclarer {
  Signature& sig;

  void on_concept(const Concept& c) {
    if (c.nominal) {
      sig.individuals.insert(c.name);
    } else {
      sig.concepts.insert(c.name);
    }
  }
  void operator()(const ConceptAssertion& s) {
    on_concept(s.type);
    sig.individuals.insert(s.individual);
  }
  void operator()(const RoleAssertion& s) {
    sig.roles.insert(s.role);
    sig.individuals.insert(s.subject);
    sig.individuals.insert(s.object);
  }
  void operator()(const FeatureAssertion& s) {
    sig.features.insert(s.feature);
    sig.individuals.insert(s.individual);
  }
  void operator()(const Subsumption& s) {
    on_concept(s.sub);
    on_concept(s.sup);
  }
  void operator()(const NominalSubsumption& s) {
    on_concept(s.sub);
    sig.individuals.insert(s.individual);
  }
  void operator()(const ConjunctionSubsumption& s) {
    on_concept(s.left);
    on_concept(s.right);
    on_concept(s.sup);
  }
  void operator()(const ExistentialSubsumption& s) {
    sig.roles.insert(s.role);
    on_concept(s.filler);
    on_concept(s.sup);
  }
  void operator()(const ExistentialRestriction& s) {
    on_concept(s.sub);
    sig.roles.insert(s.role);
    on_concept(s.filler);
  }
  void operator()(const FeatureRestriction& s) {
    on_concept(s.sub);
    sig.features.insert(s.feature);
  }
  void operator()(const FeatureSubsumption& s) {
    sig.features.insert(s.feature);
    on_concept(s.sup);
  }
  void operator()(const ConjunctionFeatureRestriction& s) {
    on_concept(s.left);
    on_concept(s.right);
    sig.features.insert(s.feature);
  }
  void operator()(const RoleInclusion& s) {
    sig.roles.insert(s.sub);
    sig.roles.insert(s.sup);
  }
  void operator()(const RoleComposition& s) {
    sig.roles.insert(s.first);
    sig.roles.insert(s.second);
    sig.roles.insert(s.sup);
  }
};

void check_disjoint(const std::set<std::string>& a, const char* a_name,
                    const std::set<std::string>& b, const char* b_name,
                    std::vector<Diagnostic>& out) {
  for (const auto& name : a) {
    if (b.contains(name)) {
      out.push_back({KbPart::Signature, 0,
                     "name " + name + " is both a " + a_name + " and a " + b_name});
    }
  }
}

}  // namespace

std::string check_names(const NormalStatement& statement, const Signature& sig) {
  NameChecker checker{sig, {}};
  std::visit(checker, statement);
  return checker.problem;
}

void declare_names(const NormalStatement& statement, Signature& sig) {
  std::visit(NameDeclarer{sig}, statement);
}

std::vector<Diagnostic> validate(const KnowledgeBase& kb) {
  std::vector<Diagnostic> out;
  const Signature& sig = kb.signature;
  if (!sig.concepts.contains(std::string(kTop)) || !sig.concepts.contains(std::string(kBottom))) {
    out.push_back({KbPart::Signature, 0, "signature lacks TOP or BOT"});
  }
  check_disjoint(sig.concepts, "concept", sig.roles, "role", out);
  check_disjoint(sig.concepts, "concept", sig.features, "feature", out);
  check_disjoint(sig.concepts, "concept", sig.individuals, "individual", out);
  check_disjoint(sig.roles, "role", sig.features, "feature", out);
  check_disjoint(sig.roles, "role", sig.individuals, "individual", out);
  check_disjoint(sig.features, "feature", sig.individuals, "individual", out);

  auto check_part = [&](const std::vector<WeightedStatement>& part, KbPart which) {
    for (std::size_t i = 0; i < part.size(); ++i) {
      const auto& ws = part[i];
      if (auto problem = check_names(ws.statement, sig); !problem.empty()) {
        out.push_back({which, i, problem});
      }
      if (which == KbPart::Uncertain && ws.weight.is_infinite()) {
        out.push_back({which, i, "infinite weight outside deterministic part"});
      }
      if (which == KbPart::Deterministic && ws.weight.is_finite()) {
        out.push_back({which, i, "finite weight in deterministic part"});
      }
      if (const auto* s = std::get_if<Subsumption>(&ws.statement);
          s != nullptr && !s->sub.nominal && s->sup.nominal) {
        out.push_back({which, i, "A SUBCLASSOF {c} must use the nominal subsumption form"});
      }
      if (const auto* s = std::get_if<NominalSubsumption>(&ws.statement); s != nullptr && s->sub.nominal) {
        out.push_back({which, i, "{a} SUBCLASSOF {c} must use the plain subsumption form"});
      }
    }
  };
  check_part(kb.deterministic, KbPart::Deterministic);
  check_part(kb.uncertain, KbPart::Uncertain);

  for (std::size_t i = 0; i < kb.uncertain.size(); ++i) {
    const auto& statement = kb.uncertain[i].statement;
    bool shared = std::any_of(kb.deterministic.begin(), kb.deterministic.end(),
                              [&](const WeightedStatement& d) { return d.statement == statement; });
    if (shared) out.push_back({KbPart::Uncertain, i, "statement also appears in deterministic part"});
  }
  return out;
}

}  // namespace mel
