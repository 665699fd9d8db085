#pragma once

// 0/1 integer programs: clause translation and an exact branch-and-bound
// maximizer with a canonical (lexicographically smallest) tie-break.

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mel/grounder.hpp"

namespace mel {

enum class Relation { GreaterEqual, LessEqual };

struct LinearConstraint {
  std::vector<std::pair<std::size_t, std::int64_t>> terms;
  Relation relation = Relation::GreaterEqual;
  std::int64_t bound = 0;

  friend bool operator==(const LinearConstraint&, const LinearConstraint&) = default;
};

struct IlpProgram {
  std::vector<std::string> variables;  // binary, in declaration order
  std::vector<LinearConstraint> constraints;
  std::vector<std::pair<std::size_t, Rational>> objective;  // maximized

  std::size_t add_variable(std::string name) {
    variables.push_back(std::move(name));
    return variables.size() - 1;
  }
};

struct IlpSolution {
  std::vector<std::uint8_t> values;  // one per variable
  Rational objective{0};
};

bool satisfies(const LinearConstraint& c, const std::vector<std::uint8_t>& values);
Rational objective_value(const IlpProgram& p, const std::vector<std::uint8_t>& values);

/// Maximizes the objective. Among optimal assignments returns the
/// lexicographically smallest one in declaration order (0 before 1).
/// Throws InfeasibleError carrying an irreducible infeasible subset of
/// constraint indices.
IlpSolution solve(const IlpProgram& program);

/// Feasibility only; no objective, no canonicalization.
bool feasible(const IlpProgram& program);

/// LP-style text: OBJECTIVE, CONSTRAINTS and BINARY sections.
std::string to_lp_text(const IlpProgram& program);

/// Maps ground atoms to x variables and weighted clauses to z indicators.
/// Atoms in `fixed_true` are constants, not variables.
class VariableRegistry {
 public:
  explicit VariableRegistry(const Universe& universe, const TruthAssignment* fixed_true = nullptr)
      : universe_(&universe), fixed_true_(fixed_true) {}

  bool fixed_true(const GroundAtom& a) const { return fixed_true_ && fixed_true_->contains(a); }
  std::size_t atom(const GroundAtom& a);
  std::optional<std::size_t> find(const GroundAtom& a) const;
  // New indicator z_k with the given objective coefficient.
  std::size_t indicator(const Rational& weight);

  const IlpProgram& program() const { return program_; }
  IlpProgram& program() { return program_; }
  // Atom behind each variable; nullopt for indicators.
  const std::vector<std::optional<GroundAtom>>& atoms() const { return atoms_; }

 private:
  std::string atom_name(const GroundAtom& a) const;

  const Universe* universe_;
  const TruthAssignment* fixed_true_;
  IlpProgram program_;
  std::unordered_map<GroundAtom, std::size_t, GroundAtomHash> index_;
  std::unordered_map<std::string, std::size_t> used_names_;
  std::vector<std::optional<GroundAtom>> atoms_;
  std::size_t indicators_ = 0;
};

/// Linear encoding of one ground clause; the indicator for a finite weight
/// is created in `vars` with the weight as objective coefficient. Weight 0
/// yields nothing. Throws IncoherentError when an INFINITE clause has every
/// literal eliminated as false.
std::vector<LinearConstraint> translate_clause(const ViolatedClause& g, VariableRegistry& vars);

}  // namespace mel
