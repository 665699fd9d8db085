#include "mel/axiom.hpp"

namespace mel {

std::size_t ConceptExpr::size() const {
  std::size_t n = 1;
  for (const auto& op : operands) n += op.size();
  return n;
}

namespace {

bool is_named_pair(const ConceptExpr& e) {
  return e.kind == ConceptExpr::Kind::And && e.operands.size() == 2 &&
         e.operands[0].is_name() && e.operands[1].is_name();
}

std::optional<NormalStatement> inclusion_shape(const ConceptExpr& sub, const ConceptExpr& sup) {
  using Kind = ConceptExpr::Kind;
  if (sub.is_name()) {
    Concept a = sub.as_concept();
    if (sup.kind == Kind::Nominal && !a.nominal) return NominalSubsumption{a, sup.name};
    if (sup.is_name()) return Subsumption{a, sup.as_concept()};
    if (sup.kind == Kind::Exists && sup.operands[0].is_name()) {
      return ExistentialRestriction{a, sup.name, sup.operands[0].as_concept()};
    }
    if (sup.kind == Kind::FeatureExists) return FeatureRestriction{a, sup.name, sup.restriction};
    return std::nullopt;
  }
  if (is_named_pair(sub)) {
    Concept left = sub.operands[0].as_concept();
    Concept right = sub.operands[1].as_concept();
    if (sup.is_name()) return ConjunctionSubsumption{left, right, sup.as_concept()};
    if (sup.kind == Kind::FeatureExists) {
      return ConjunctionFeatureRestriction{left, right, sup.name, sup.restriction};
    }
    return std::nullopt;
  }
  if (sub.kind == Kind::Exists && sub.operands[0].is_name() && sup.is_name()) {
    return ExistentialSubsumption{sub.name, sub.operands[0].as_concept(), sup.as_concept()};
  }
  if (sub.kind == Kind::FeatureExists && sup.is_name()) {
    return FeatureSubsumption{sub.name, sub.restriction, sup.as_concept()};
  }
  return std::nullopt;
}

ConceptExpr to_expr(const Concept& c) {
  return c.nominal ? ConceptExpr::nominal(c.name) : ConceptExpr::atomic(c.name);
}

}  // namespace

std::optional<NormalStatement> as_normal_statement(const GeneralAxiom& axiom) {
  if (const auto* inc = std::get_if<ConceptInclusion>(&axiom)) {
    return inclusion_shape(inc->sub, inc->sup);
  }
  if (const auto* chain = std::get_if<RoleChainInclusion>(&axiom)) {
    if (chain->chain.size() == 1) return RoleInclusion{chain->chain[0], chain->sup};
    if (chain->chain.size() == 2) return RoleComposition{chain->chain[0], chain->chain[1], chain->sup};
    return std::nullopt;
  }
  if (const auto* assertion = std::get_if<ExprAssertion>(&axiom)) {
    if (!assertion->type.is_name()) return std::nullopt;
    return ConceptAssertion{assertion->type.as_concept(), assertion->individual};
  }
  if (const auto* r = std::get_if<RoleAssertion>(&axiom)) return *r;
  if (const auto* f = std::get_if<FeatureAssertion>(&axiom)) return *f;
  return std::nullopt;  // equivalences are never normal
}

GeneralAxiom to_general_axiom(const NormalStatement& statement) {
  using E = ConceptExpr;
  struct Visitor {
    GeneralAxiom operator()(const ConceptAssertion& s) const {
      return ExprAssertion{to_expr(s.type), s.individual};
    }
    GeneralAxiom operator()(const RoleAssertion& s) const { return s; }
    GeneralAxiom operator()(const FeatureAssertion& s) const { return s; }
    GeneralAxiom operator()(const Subsumption& s) const {
      return ConceptInclusion{to_expr(s.sub), to_expr(s.sup)};
    }
    GeneralAxiom operator()(const NominalSubsumption& s) const {
      return ConceptInclusion{to_expr(s.sub), E::nominal(s.individual)};
    }
    GeneralAxiom operator()(const ConjunctionSubsumption& s) const {
      return ConceptInclusion{E::conjunction({to_expr(s.left), to_expr(s.right)}), to_expr(s.sup)};
    }
    GeneralAxiom operator()(const ExistentialSubsumption& s) const {
      return ConceptInclusion{E::exists(s.role, to_expr(s.filler)), to_expr(s.sup)};
    }
    GeneralAxiom operator()(const ExistentialRestriction& s) const {
      return ConceptInclusion{to_expr(s.sub), E::exists(s.role, to_expr(s.filler))};
    }
    GeneralAxiom operator()(const FeatureRestriction& s) const {
      return ConceptInclusion{to_expr(s.sub), E::feature_exists(s.feature, s.restriction)};
    }
    GeneralAxiom operator()(const FeatureSubsumption& s) const {
      return ConceptInclusion{E::feature_exists(s.feature, s.restriction), to_expr(s.sup)};
    }
    GeneralAxiom operator()(const ConjunctionFeatureRestriction& s) const {
      return ConceptInclusion{E::conjunction({to_expr(s.left), to_expr(s.right)}),
                              E::feature_exists(s.feature, s.restriction)};
    }
    GeneralAxiom operator()(const RoleInclusion& s) const {
      return RoleChainInclusion{{s.sub}, s.sup};
    }
    GeneralAxiom operator()(const RoleComposition& s) const {
      return RoleChainInclusion{{s.first, s.second}, s.sup};
    }
  };
  return std::visit(Visitor{}, statement);
}

std::string format_expr(const ConceptExpr& expr) {
  using Kind = ConceptExpr::Kind;
  switch (expr.kind) {
    case Kind::Atomic:
      return expr.name;
    case Kind::Nominal:
      return "{" + expr.name + "}";
    case Kind::FeatureExists:
      return expr.name + " SOME (" + std::string(to_string(expr.restriction.op)) + ", " +
             to_decimal_string(expr.restriction.value) + ")";
    case Kind::Exists: {
      const auto& filler = expr.operands[0];
      std::string inner = format_expr(filler);
      if (filler.kind == Kind::And) inner = "(" + inner + ")";
      return expr.name + " SOME " + inner;
    }
    case Kind::And: {
      std::string out;
      for (std::size_t i = 0; i < expr.operands.size(); ++i) {
        if (i > 0) out += " AND ";
        const auto& op = expr.operands[i];
        out += op.kind == Kind::And ? "(" + format_expr(op) + ")" : format_expr(op);
      }
      return out;
    }
  }
  return {};
}

}  // namespace mel
