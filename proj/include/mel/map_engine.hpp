#pragma once

// MAP inference by cutting planes, deterministic classification and the
// brute-force world enumeration used as a probabilistic oracle.

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mel/grounder.hpp"
#include "mel/ilp.hpp"
#include "mel/kb.hpp"

namespace mel {

/// Universe, templates and grounder for one knowledge base.
class Reasoner {
 public:
  explicit Reasoner(const KnowledgeBase& kb, EvalDomain domain = EvalDomain::Real);
  Reasoner(const Reasoner&) = delete;
  Reasoner& operator=(const Reasoner&) = delete;

  const KnowledgeBase& kb() const { return kb_; }
  const Universe& universe() const { return *universe_; }
  std::shared_ptr<const Universe> shared_universe() const { return universe_; }
  const std::vector<ClauseTemplate>& templates() const { return templates_; }
  const Grounder& grounder() const { return *grounder_; }

  const std::vector<GroundAtom>& deterministic_atoms() const { return deterministic_; }
  const std::vector<GroundAtom>& uncertain_atoms() const { return uncertain_; }

  /// Closure of the deterministic part. Throws IncoherentError naming a
  /// minimal incoherent subset of deterministic statements.
  const TruthAssignment& deterministic_closure() const;

  /// Statements of `atoms` over named constants, in atom order.
  std::vector<NormalStatement> classified(const TruthAssignment& atoms) const;

 private:
  KnowledgeBase kb_;
  std::shared_ptr<const Universe> universe_;
  std::vector<ClauseTemplate> templates_;
  std::unique_ptr<Grounder> grounder_;
  std::vector<GroundAtom> deterministic_;
  std::vector<GroundAtom> uncertain_;
  mutable std::unique_ptr<TruthAssignment> closure_;
};

struct MapOptions {
  EvalDomain domain = EvalDomain::Real;
  // uncertain index -> true: must be entailed, false: must not be entailed
  std::map<std::size_t, bool> forced;
};

struct MapResult {
  std::shared_ptr<const Universe> universe;
  TruthAssignment atoms;              // closure of the MAP world
  std::vector<std::size_t> selected;  // uncertain statements entailed by the world
  std::vector<std::size_t> rejected;
  Rational objective{0};
  std::vector<NormalStatement> classified;
  std::size_t iterations = 0;
  bool coherent = true;
  std::size_t ilp_variables = 0;
  std::size_t ilp_constraints = 0;
};

/// Throws ValidationError for an invalid KB, IncoherentError when the
/// deterministic part (or a forced choice) admits no coherent world.
MapResult map_inference(const KnowledgeBase& kb, const MapOptions& options = {});
MapResult map_inference(const Reasoner& reasoner, const MapOptions& options = {});

/// First cutting-plane iteration's program, before any solve.
IlpProgram first_iteration_program(const Reasoner& reasoner);

// ---------------------------------------------------------------------------
// Oracle

/// Sum of exp(e) over a list of exponents.
struct ExpSum {
  std::vector<Rational> exponents;  // sorted

  double log() const;  // log-sum-exp; -inf when empty
  double value() const;
};

/// numerator / denominator of two exponential sums.
struct ExpRatio {
  ExpSum numerator;
  ExpSum denominator;

  bool is_zero() const { return numerator.exponents.empty(); }
  bool is_one() const { return numerator.exponents == denominator.exponents; }
  double value() const;
  std::string to_string() const;
};

struct World {
  std::vector<std::size_t> entailed;  // uncertain indices entailed by the closure
  std::vector<GroundAtom> closure;    // sorted
  Rational score{0};
};

struct WorldDistribution {
  std::shared_ptr<const Universe> universe;
  std::vector<World> worlds;
  ExpSum partition;

  ExpRatio probability(std::size_t world) const;
  Rational max_score() const;
  std::vector<std::size_t> argmax() const;
};

inline constexpr std::size_t kDefaultMaxWorlds = 16;

/// Every coherent world, one per distinct closure. Throws CapExceededError
/// when the uncertain part has more than `max_uncertain` statements.
WorldDistribution brute_force_distribution(const KnowledgeBase& kb,
                                           std::size_t max_uncertain = kDefaultMaxWorlds,
                                           EvalDomain domain = EvalDomain::Real);
WorldDistribution brute_force_distribution(const Reasoner& reasoner,
                                           std::size_t max_uncertain = kDefaultMaxWorlds);

/// Probability mass of the worlds entailing every query statement.
ExpRatio probability_of(const KnowledgeBase& kb, std::span<const NormalStatement> query,
                        std::size_t max_uncertain = kDefaultMaxWorlds,
                        EvalDomain domain = EvalDomain::Real);
ExpRatio probability_of(const Reasoner& reasoner, const WorldDistribution& dist,
                        std::span<const NormalStatement> query);

}  // namespace mel
