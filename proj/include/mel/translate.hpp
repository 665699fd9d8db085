#pragma once

// Ground atoms of the reasoner vocabulary, the statement <-> atom mapping and
// the completion-rule clause templates.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mel/kb.hpp"
#include "mel/universe.hpp"

namespace mel {

// ninst(x,a) and rsupNom(b,r,d) are not separate predicates here: they are
// read as inst(x,{a}) and rsup({b},r,d) respectively.
enum class Predicate : std::uint8_t {
  Sub,     // sub(C,C)
  SubNom,  // subNom(C,I)
  Int,     // int(C,C,C)
  IntEx,   // intEx(C,C,F,O,V)
  Rsub,    // rsub(C,R,C)
  Rsup,    // rsup(C,R,C)
  RsupEx,  // rsupEx(C,F,O,V)
  RsubEx,  // rsubEx(F,O,V,C)
  Psub,    // psub(R,R)
  Pcom,    // pcom(R,R,R)
  Inst,    // inst(I,C)
  Rinst,   // rinst(I,R,I) or rinst(I,F,V)
  Eval,    // eval(O,V,O,V), computed, never stored
};

inline constexpr std::size_t kPredicateCount = 13;

std::string_view to_string(Predicate p);
std::size_t arity(Predicate p);

struct GroundAtom {
  Predicate predicate = Predicate::Sub;
  std::array<ConstId, 5> args{};  // unused trailing slots stay 0

  friend auto operator<=>(const GroundAtom&, const GroundAtom&) = default;
};

struct GroundAtomHash {
  std::size_t operator()(const GroundAtom& a) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(a.predicate) + 0x9e3779b97f4a7c15ULL;
    for (ConstId c : a.args) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(c)) + 0x9e3779b97f4a7c15ULL +
           (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

/// Checks arity-independent argument sorts against the predicate signature.
bool well_typed(const GroundAtom& atom, const Universe& u);

std::string format_atom(const GroundAtom& atom, const Universe& u);

/// Statement -> atom. Throws ValidationError if a name is not in `u`.
GroundAtom phi(const NormalStatement& statement, const Universe& u);

/// Atom -> statement; inverse of phi. Throws ValidationError for eval atoms.
NormalStatement phi_inverse(const GroundAtom& atom, const Universe& u);

// ---------------------------------------------------------------------------
// Clause templates

struct Term {
  enum class Kind : std::uint8_t {
    Var,        // template variable
    Const,      // named constant: concept ("TOP", "A", "{a}"), operator ("="), individual
    NominalOf,  // the nominal concept {x} of individual variable x
    Witness,    // anonymous successor for (role var, concept var)
  };
  Kind kind = Kind::Var;
  int var = -1;
  int var2 = -1;
  Sort sort = Sort::Concept;  // Const only
  std::string text;           // Const only

  static Term variable(int v) { return {Kind::Var, v, -1, Sort::Concept, {}}; }
  static Term constant(Sort s, std::string t) { return {Kind::Const, -1, -1, s, std::move(t)}; }
  static Term nominal_of(int v) { return {Kind::NominalOf, v, -1, Sort::Concept, {}}; }
  static Term witness(int role_var, int concept_var) {
    return {Kind::Witness, role_var, concept_var, Sort::Individual, {}};
  }
};

struct AtomPattern {
  Predicate predicate = Predicate::Sub;
  std::vector<Term> args;
};

struct TemplateVariable {
  std::string name;
  Sort sort = Sort::Concept;
};

/// A universally quantified implication body -> head; head absent means the
/// body must never hold (FALSE). Empty body with a ground head is a fact.
struct ClauseTemplate {
  std::string id;
  std::vector<TemplateVariable> variables;
  std::vector<AtomPattern> body;
  std::optional<AtomPattern> head;
  // variable index must differ from the constant
  std::vector<std::pair<int, Term>> distinct;
  Weight weight = Weight::infinite();
};

std::string format_template(const ClauseTemplate& t);

/// Completion templates F1-F27, coherence/consistency constraints, the
/// subNom->sub bridge, one self-membership fact inst(a,{a}) per individual
/// and one unique-name fact int({a},{b},BOT) per unordered individual pair.
std::vector<ClauseTemplate> rule_templates(const Signature& sig);

}  // namespace mel

template <>
struct std::hash<mel::GroundAtom> : mel::GroundAtomHash {};
