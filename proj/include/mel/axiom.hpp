#pragma once

// General (not necessarily normalized) EL++ axioms over concept expression
// trees, plus recognition of the normal-form subset.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mel/kb.hpp"

namespace mel {

struct ConceptExpr {
  enum class Kind { Atomic, Nominal, And, Exists, FeatureExists };

  Kind kind = Kind::Atomic;
  // Atomic: concept name (TOP/BOT included). Nominal: individual.
  // Exists: role. FeatureExists: feature.
  std::string name;
  DatatypeRestriction restriction;     // FeatureExists only
  std::vector<ConceptExpr> operands;   // And: >= 2 conjuncts; Exists: one filler

  static ConceptExpr atomic(std::string n) { return {Kind::Atomic, std::move(n), {}, {}}; }
  static ConceptExpr top() { return atomic(std::string(kTop)); }
  static ConceptExpr bottom() { return atomic(std::string(kBottom)); }
  static ConceptExpr nominal(std::string a) { return {Kind::Nominal, std::move(a), {}, {}}; }
  static ConceptExpr conjunction(std::vector<ConceptExpr> conjuncts) {
    return {Kind::And, {}, {}, std::move(conjuncts)};
  }
  static ConceptExpr exists(std::string role, ConceptExpr filler) {
    return {Kind::Exists, std::move(role), {}, {std::move(filler)}};
  }
  static ConceptExpr feature_exists(std::string feature, DatatypeRestriction r) {
    return {Kind::FeatureExists, std::move(feature), r, {}};
  }

  bool is_name() const { return kind == Kind::Atomic || kind == Kind::Nominal; }
  Concept as_concept() const { return {name, kind == Kind::Nominal}; }
  std::size_t size() const;  // number of tree nodes

  friend bool operator==(const ConceptExpr&, const ConceptExpr&) = default;
};

struct ConceptInclusion {
  ConceptExpr sub;
  ConceptExpr sup;
  friend bool operator==(const ConceptInclusion&, const ConceptInclusion&) = default;
};

struct ConceptEquivalence {
  ConceptExpr left;
  ConceptExpr right;
  friend bool operator==(const ConceptEquivalence&, const ConceptEquivalence&) = default;
};

// R1 ∘ ... ∘ Rk ⊑ R, k >= 1
struct RoleChainInclusion {
  std::vector<std::string> chain;
  std::string sup;
  friend bool operator==(const RoleChainInclusion&, const RoleChainInclusion&) = default;
};

// C(a) with an arbitrary concept expression C
struct ExprAssertion {
  ConceptExpr type;
  std::string individual;
  friend bool operator==(const ExprAssertion&, const ExprAssertion&) = default;
};

using GeneralAxiom = std::variant<ConceptInclusion, ConceptEquivalence, RoleChainInclusion,
                                  ExprAssertion, RoleAssertion, FeatureAssertion>;

struct WeightedAxiom {
  GeneralAxiom axiom;
  Weight weight;
  friend bool operator==(const WeightedAxiom&, const WeightedAxiom&) = default;
};

/// The normal statement an axiom already is, if it matches one of the
/// normal-form shapes with only atomic/nominal concept positions.
std::optional<NormalStatement> as_normal_statement(const GeneralAxiom& axiom);

inline bool is_normal_form(const GeneralAxiom& axiom) {
  return as_normal_statement(axiom).has_value();
}

// Every NormalStatement is in normal form by construction; this overload
// exists so callers holding either representation can ask uniformly.
inline bool is_normal_form(const NormalStatement&) { return true; }

GeneralAxiom to_general_axiom(const NormalStatement& statement);

std::string format_expr(const ConceptExpr& expr);

}  // namespace mel
