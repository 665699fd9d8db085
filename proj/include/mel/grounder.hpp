#pragma once

// Join-driven grounding of clause templates: violated-clause detection for
// the cutting-plane loop and semi-naive saturation for deterministic closure.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mel/translate.hpp"

namespace mel {

enum class EvalDomain { Real, Integer };

/// True iff every number satisfying (o1,v1) also satisfies (o2,v2), over the
/// reals or over the integers.
bool eval(CompareOp o1, const Rational& v1, CompareOp o2, const Rational& v2,
          EvalDomain domain = EvalDomain::Real);

/// Set of true atoms; absent atoms are false. Indexed for joins.
class TruthAssignment {
 public:
  bool insert(const GroundAtom& atom);
  bool contains(const GroundAtom& atom) const { return set_.contains(atom); }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  // Insertion order.
  const std::vector<GroundAtom>& atoms() const { return atoms_; }
  std::vector<GroundAtom> sorted() const;

  const std::vector<std::uint32_t>& with_predicate(Predicate p) const {
    return by_predicate_[static_cast<std::size_t>(p)];
  }
  const std::vector<std::uint32_t>& with_arg(Predicate p, std::size_t pos, ConstId c) const;
  const GroundAtom& at(std::uint32_t i) const { return atoms_[i]; }

  friend bool operator==(const TruthAssignment& a, const TruthAssignment& b) {
    return a.set_ == b.set_;
  }

 private:
  static std::uint64_t key(Predicate p, std::size_t pos, ConstId c) {
    return (static_cast<std::uint64_t>(p) << 40) | (static_cast<std::uint64_t>(pos) << 32) |
           static_cast<std::uint32_t>(c);
  }

  std::vector<GroundAtom> atoms_;
  std::unordered_set<GroundAtom, GroundAtomHash> set_;
  std::vector<std::vector<std::uint32_t>> by_predicate_ =
      std::vector<std::vector<std::uint32_t>>(kPredicateCount);
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> by_arg_;
};

/// A ground clause body -> head written as a disjunction: the atoms of
/// `positive` appear unnegated, those of `negative` negated.
struct ViolatedClause {
  std::vector<GroundAtom> positive;
  std::vector<GroundAtom> negative;
  Weight weight = Weight::infinite();
  std::string template_id;
  std::optional<std::size_t> evidence;  // index into the evidence list

  friend bool operator==(const ViolatedClause&, const ViolatedClause&) = default;
};

/// Unit clause on one atom. `positive == false` asserts the atom's negation
/// (used to force an atom false).
struct WeightedEvidence {
  GroundAtom atom;
  Weight weight = Weight::infinite();
  bool positive = true;
};

class Grounder {
 public:
  Grounder(const Universe& universe, std::span<const ClauseTemplate> templates,
           EvalDomain domain = EvalDomain::Real);

  const Universe& universe() const { return *universe_; }
  EvalDomain domain() const { return domain_; }

  /// Every grounding whose body holds and whose head does not, followed by
  /// violated evidence clauses. Order: template order, then atom order, then
  /// evidence order. Finite-weight evidence with w > 0 is violated when the
  /// atom is false, with w < 0 when it is true; w = 0 never.
  std::vector<ViolatedClause> find_violated(const TruthAssignment& current,
                                            std::span<const WeightedEvidence> evidence = {}) const;

  /// Least fixpoint of the definite templates over `facts`.
  TruthAssignment close(std::span<const GroundAtom> facts) const;
  /// Adds `facts` to an already closed set and restores the fixpoint.
  void extend(TruthAssignment& closed, std::span<const GroundAtom> facts) const;

  /// Groundings of the FALSE-headed templates that hold in `atoms`.
  std::vector<ViolatedClause> conflicts(const TruthAssignment& atoms) const;
  bool coherent(const TruthAssignment& atoms) const { return conflicts(atoms).empty(); }

 private:
  struct CTerm {
    Term::Kind kind = Term::Kind::Var;
    int var = -1;
    int var2 = -1;
    ConstId constant = -1;
  };
  struct CPattern {
    Predicate predicate = Predicate::Sub;
    std::vector<CTerm> args;
  };
  struct Compiled {
    std::string id;
    std::vector<Sort> var_sorts;
    std::vector<CPattern> body;   // stored predicates only
    std::vector<CPattern> evals;  // checked once the body is matched
    std::optional<CPattern> head;
    std::vector<std::pair<int, ConstId>> distinct;
  };
  using Binding = std::vector<ConstId>;
  using Visit = std::function<void(const Binding&)>;

  Compiled compile(const ClauseTemplate& t) const;
  CTerm compile_term(const Term& t) const;

  bool match(const Compiled& c, const CPattern& p, const GroundAtom& atom, Binding& b,
             std::vector<int>& undo) const;
  const std::vector<std::uint32_t>& candidates(const CPattern& p, const Binding& b,
                                               const TruthAssignment& store) const;
  void join(const Compiled& c, const TruthAssignment& store, std::size_t skip, std::size_t k,
            Binding& b, const Visit& visit) const;
  bool leaf_ok(const Compiled& c, const Binding& b) const;
  void enumerate_free(const Compiled& c, const Visit& visit) const;
  GroundAtom instantiate(const CPattern& p, const Binding& b) const;
  std::vector<GroundAtom> body_atoms(const Compiled& c, const Binding& b) const;
  void saturate(TruthAssignment& store, std::vector<GroundAtom> delta) const;

  const Universe* universe_;
  EvalDomain domain_;
  std::vector<Compiled> templates_;
};

}  // namespace mel
