#pragma once

// Knowledge-base vocabulary: signatures, datatype restrictions and the
// normal-form statements every downstream module consumes.

#include <compare>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mel/rational.hpp"

namespace mel {

inline constexpr std::string_view kTop = "TOP";
inline constexpr std::string_view kBottom = "BOT";

enum class CompareOp { Less, LessEqual, Greater, GreaterEqual, Equal };

inline constexpr CompareOp kAllCompareOps[] = {CompareOp::Less, CompareOp::LessEqual,
                                               CompareOp::Greater, CompareOp::GreaterEqual,
                                               CompareOp::Equal};

std::string_view to_string(CompareOp op);  // "<", "<=", ...

struct DatatypeRestriction {
  CompareOp op = CompareOp::Equal;
  Rational value{0};

  friend bool operator==(const DatatypeRestriction&, const DatatypeRestriction&) = default;
};

struct Signature {
  std::set<std::string> concepts{std::string(kTop), std::string(kBottom)};
  std::set<std::string> roles;
  std::set<std::string> features;
  std::set<std::string> individuals;

  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Concept position inside a normal statement: an atomic name (TOP and BOT
/// included) or a nominal {a}.
struct Concept {
  std::string name;
  bool nominal = false;

  static Concept named(std::string n) { return {std::move(n), false}; }
  static Concept nominal_of(std::string individual) { return {std::move(individual), true}; }
  static Concept top() { return named(std::string(kTop)); }
  static Concept bottom() { return named(std::string(kBottom)); }

  bool is_top() const { return !nominal && name == kTop; }
  bool is_bottom() const { return !nominal && name == kBottom; }

  friend bool operator==(const Concept&, const Concept&) = default;
};

// C(a)
struct ConceptAssertion {
  Concept type;
  std::string individual;
  friend bool operator==(const ConceptAssertion&, const ConceptAssertion&) = default;
};

// R(a,b)
struct RoleAssertion {
  std::string role;
  std::string subject;
  std::string object;
  friend bool operator==(const RoleAssertion&, const RoleAssertion&) = default;
};

// F(a,v)
struct FeatureAssertion {
  std::string feature;
  std::string individual;
  Rational value{0};
  friend bool operator==(const FeatureAssertion&, const FeatureAssertion&) = default;
};

// A ⊑ C, covering A ⊑ ⊥, ⊤ ⊑ C and {a} ⊑ {c}. A named A with a nominal on the
// right uses NominalSubsumption instead.
struct Subsumption {
  Concept sub;
  Concept sup;
  friend bool operator==(const Subsumption&, const Subsumption&) = default;
};

// A ⊑ {c}
struct NominalSubsumption {
  Concept sub;
  std::string individual;
  friend bool operator==(const NominalSubsumption&, const NominalSubsumption&) = default;
};

// A ⊓ B ⊑ C
struct ConjunctionSubsumption {
  Concept left;
  Concept right;
  Concept sup;
  friend bool operator==(const ConjunctionSubsumption&, const ConjunctionSubsumption&) = default;
};

// ∃R.A ⊑ C
struct ExistentialSubsumption {
  std::string role;
  Concept filler;
  Concept sup;
  friend bool operator==(const ExistentialSubsumption&, const ExistentialSubsumption&) = default;
};

// A ⊑ ∃R.B
struct ExistentialRestriction {
  Concept sub;
  std::string role;
  Concept filler;
  friend bool operator==(const ExistentialRestriction&, const ExistentialRestriction&) = default;
};

// A ⊑ ∃F.r
struct FeatureRestriction {
  Concept sub;
  std::string feature;
  DatatypeRestriction restriction;
  friend bool operator==(const FeatureRestriction&, const FeatureRestriction&) = default;
};

// ∃F.r ⊑ A
struct FeatureSubsumption {
  std::string feature;
  DatatypeRestriction restriction;
  Concept sup;
  friend bool operator==(const FeatureSubsumption&, const FeatureSubsumption&) = default;
};

// A ⊓ B ⊑ ∃F.r
struct ConjunctionFeatureRestriction {
  Concept left;
  Concept right;
  std::string feature;
  DatatypeRestriction restriction;
  friend bool operator==(const ConjunctionFeatureRestriction&,
                         const ConjunctionFeatureRestriction&) = default;
};

// R1 ⊑ R2
struct RoleInclusion {
  std::string sub;
  std::string sup;
  friend bool operator==(const RoleInclusion&, const RoleInclusion&) = default;
};

// R1 ∘ R2 ⊑ R
struct RoleComposition {
  std::string first;
  std::string second;
  std::string sup;
  friend bool operator==(const RoleComposition&, const RoleComposition&) = default;
};

using NormalStatement =
    std::variant<ConceptAssertion, RoleAssertion, FeatureAssertion, Subsumption,
                 NominalSubsumption, ConjunctionSubsumption, ExistentialSubsumption,
                 ExistentialRestriction, FeatureRestriction, FeatureSubsumption,
                 ConjunctionFeatureRestriction, RoleInclusion, RoleComposition>;

struct WeightedStatement {
  NormalStatement statement;
  Weight weight;
  friend bool operator==(const WeightedStatement&, const WeightedStatement&) = default;
};

struct KnowledgeBase {
  Signature signature;
  std::vector<WeightedStatement> deterministic;
  std::vector<WeightedStatement> uncertain;

  friend bool operator==(const KnowledgeBase&, const KnowledgeBase&) = default;
};

enum class KbPart { Signature, Deterministic, Uncertain };

struct Diagnostic {
  KbPart part = KbPart::Deterministic;
  std::size_t index = 0;
  std::string reason;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Returns one diagnostic per violated invariant; empty means the KB is
/// well-formed over its signature and the weight/part split is consistent.
std::vector<Diagnostic> validate(const KnowledgeBase& kb);

// Checks the statement's names against `sig` and reports the first problem,
// or an empty string.
std::string check_names(const NormalStatement& statement, const Signature& sig);

// Adds every name referenced by the statement to `sig` under its sort.
void declare_names(const NormalStatement& statement, Signature& sig);

std::string format_concept(const Concept& c);

}  // namespace mel
