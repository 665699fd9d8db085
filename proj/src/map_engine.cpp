#include "mel/map_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <tuple>

#include "mel/errors.hpp"
#include "mel/text_format.hpp"

namespace mel {

// ---------------------------------------------------------------------------
// Reasoner

Reasoner::Reasoner(const KnowledgeBase& kb, EvalDomain domain)
    : kb_(kb), universe_(std::make_shared<Universe>(Universe::for_kb(kb))) {
  if (auto diags = validate(kb); !diags.empty()) {
    const Diagnostic& d = diags.front();
    throw ValidationError("invalid knowledge base: " + d.reason);
  }
  templates_ = rule_templates(kb.signature);
  grounder_ = std::make_unique<Grounder>(*universe_, templates_, domain);
  for (const auto& ws : kb.deterministic) deterministic_.push_back(phi(ws.statement, *universe_));
  for (const auto& ws : kb.uncertain) uncertain_.push_back(phi(ws.statement, *universe_));
}

const TruthAssignment& Reasoner::deterministic_closure() const {
  if (closure_) return *closure_;
  TruthAssignment closed = grounder_->close(deterministic_);
  if (!grounder_->coherent(closed)) {
    // Deletion filter down to a minimal incoherent subset.
    std::vector<bool> keep(deterministic_.size(), true);
    for (std::size_t i = 0; i < keep.size(); ++i) {
      keep[i] = false;
      std::vector<GroundAtom> rest;
      for (std::size_t j = 0; j < keep.size(); ++j) {
        if (keep[j]) rest.push_back(deterministic_[j]);
      }
      if (grounder_->coherent(grounder_->close(rest))) keep[i] = true;
    }
    std::vector<std::string> conflict;
    for (std::size_t i = 0; i < keep.size(); ++i) {
      if (keep[i]) conflict.push_back(format_statement(kb_.deterministic[i].statement));
    }
    throw IncoherentError("deterministic knowledge is incoherent", std::move(conflict));
  }
  closure_ = std::make_unique<TruthAssignment>(std::move(closed));
  return *closure_;
}

std::vector<NormalStatement> Reasoner::classified(const TruthAssignment& atoms) const {
  std::vector<NormalStatement> out;
  const Universe& u = *universe_;
  for (const GroundAtom& a : atoms.sorted()) {
    bool anonymous = false;
    for (std::size_t i = 0; i < arity(a.predicate); ++i) {
      if (u.sort(a.args[i]) == Sort::Individual && u.is_witness(a.args[i])) anonymous = true;
    }
    if (anonymous) continue;
    NormalStatement s = phi_inverse(a, u);
    // sub(A,{c}) reads as A SUBCLASSOF {c}, the same statement as subNom(A,c).
    if (const auto* sub = std::get_if<Subsumption>(&s); sub && !sub->sub.nominal && sub->sup.nominal) {
      s = NominalSubsumption{sub->sub, sub->sup.name};
    }
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cutting-plane MAP inference

namespace {

std::vector<WeightedEvidence> evidence_for(const Reasoner& r, const MapOptions& options) {
  std::vector<WeightedEvidence> ev;
  const auto& atoms = r.uncertain_atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    ev.push_back({atoms[i], r.kb().uncertain[i].weight, true});
  }
  for (const auto& [i, must] : options.forced) {
    if (i >= atoms.size()) throw ValidationError("forced statement index out of range");
    ev.push_back({atoms[i], Weight::infinite(), must});
  }
  return ev;
}

using ClauseKey = std::tuple<std::ptrdiff_t, std::vector<GroundAtom>, std::vector<GroundAtom>>;

ClauseKey key_of(const ViolatedClause& g) {
  return {g.evidence ? static_cast<std::ptrdiff_t>(*g.evidence) : -1, g.positive, g.negative};
}

}  // namespace

IlpProgram first_iteration_program(const Reasoner& r) {
  const TruthAssignment& fixed = r.deterministic_closure();
  VariableRegistry vars(r.universe(), &fixed);
  auto evidence = evidence_for(r, {});
  for (const auto& g : r.grounder().find_violated(fixed, evidence)) {
    for (auto& c : translate_clause(g, vars)) vars.program().constraints.push_back(std::move(c));
  }
  return vars.program();
}

MapResult map_inference(const KnowledgeBase& kb, const MapOptions& options) {
  Reasoner r(kb, options.domain);
  return map_inference(r, options);
}

MapResult map_inference(const Reasoner& r, const MapOptions& options) {
  if (r.grounder().domain() != options.domain) {
    Reasoner other(r.kb(), options.domain);
    return map_inference(other, options);
  }
  const TruthAssignment& fixed = r.deterministic_closure();
  const Grounder& grounder = r.grounder();
  auto evidence = evidence_for(r, options);

  VariableRegistry vars(r.universe(), &fixed);
  std::set<ClauseKey> seen;
  TruthAssignment current = fixed;
  IlpSolution solution;
  MapResult result;
  result.universe = r.shared_universe();

  while (true) {
    std::size_t added = 0;
    for (const auto& g : grounder.find_violated(current, evidence)) {
      if (!seen.insert(key_of(g)).second) continue;
      ++added;
      for (auto& c : translate_clause(g, vars)) vars.program().constraints.push_back(std::move(c));
    }
    if (added == 0) break;
    try {
      solution = solve(vars.program());
    } catch (const InfeasibleError&) {
      throw IncoherentError("no coherent world satisfies the forced choices", {});
    }
    ++result.iterations;
    current = fixed;
    const auto& atoms = vars.atoms();
    for (std::size_t v = 0; v < atoms.size(); ++v) {
      if (atoms[v] && solution.values[v]) current.insert(*atoms[v]);
    }
  }

  // The reported world is the closure of what the optimum had to make true.
  const auto& uncertain = r.uncertain_atoms();
  std::vector<GroundAtom> chosen;
  for (std::size_t i = 0; i < uncertain.size(); ++i) {
    auto forced = options.forced.find(i);
    bool must = forced != options.forced.end() && forced->second;
    bool positive = r.kb().uncertain[i].weight.value() > 0;
    if (current.contains(uncertain[i]) && (positive || must)) chosen.push_back(uncertain[i]);
  }
  result.atoms = fixed;
  grounder.extend(result.atoms, chosen);
  for (std::size_t i = 0; i < uncertain.size(); ++i) {
    if (result.atoms.contains(uncertain[i])) {
      result.selected.push_back(i);
      result.objective += r.kb().uncertain[i].weight.value();
    } else {
      result.rejected.push_back(i);
    }
  }
  result.coherent = grounder.coherent(result.atoms);
  result.classified = r.classified(result.atoms);
  result.ilp_variables = vars.program().variables.size();
  result.ilp_constraints = vars.program().constraints.size();
  return result;
}

// ---------------------------------------------------------------------------
// Oracle

double ExpSum::log() const {
  if (exponents.empty()) return -std::numeric_limits<double>::infinity();
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& e : exponents) m = std::max(m, to_double(e));
  double s = 0;
  for (const auto& e : exponents) s += std::exp(to_double(e) - m);
  return m + std::log(s);
}

double ExpSum::value() const { return std::exp(log()); }

double ExpRatio::value() const {
  if (is_zero()) return 0.0;
  return std::exp(numerator.log() - denominator.log());
}

namespace {

std::string exp_sum_text(const ExpSum& s) {
  std::string out;
  for (std::size_t i = 0; i < s.exponents.size(); ++i) {
    if (i) out += " + ";
    out += "exp(" + to_decimal_string(s.exponents[i]) + ")";
  }
  return out;
}

}  // namespace

std::string ExpRatio::to_string() const {
  if (is_zero()) return "0";
  if (is_one()) return "1";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value());
  return std::string(buf) + " = [" + exp_sum_text(numerator) + "] / [" +
         exp_sum_text(denominator) + "]";
}

ExpRatio WorldDistribution::probability(std::size_t world) const {
  return {ExpSum{{worlds.at(world).score}}, partition};
}

Rational WorldDistribution::max_score() const {
  Rational best{0};
  bool any = false;
  for (const auto& w : worlds) {
    if (!any || w.score > best) best = w.score;
    any = true;
  }
  return best;
}

std::vector<std::size_t> WorldDistribution::argmax() const {
  std::vector<std::size_t> out;
  Rational best = max_score();
  for (std::size_t i = 0; i < worlds.size(); ++i) {
    if (worlds[i].score == best) out.push_back(i);
  }
  return out;
}

namespace {

class Enumerator {
 public:
  Enumerator(const Reasoner& r, WorldDistribution& out)
      : r_(r), atoms_(r.uncertain_atoms()), out_(out) {}

  void run(const TruthAssignment& base) {
    chosen_.assign(atoms_.size(), false);
    visit(0, base);
  }

 private:
  // Subsets are visited only when closed (equal to the statements their
  // closure entails), so each world is produced exactly once.
  void visit(std::size_t i, const TruthAssignment& closure) {
    if (i == atoms_.size()) {
      record(closure);
      return;
    }
    if (!closure.contains(atoms_[i])) visit(i + 1, closure);
    TruthAssignment next = closure;
    r_.grounder().extend(next, std::span(&atoms_[i], 1));
    if (!r_.grounder().coherent(next)) return;
    for (std::size_t j = 0; j < i; ++j) {
      if (!chosen_[j] && next.contains(atoms_[j])) return;
    }
    chosen_[i] = true;
    visit(i + 1, next);
    chosen_[i] = false;
  }

  void record(const TruthAssignment& closure) {
    World w;
    for (std::size_t j = 0; j < atoms_.size(); ++j) {
      if (closure.contains(atoms_[j])) {
        w.entailed.push_back(j);
        w.score += r_.kb().uncertain[j].weight.value();
      }
    }
    w.closure = closure.sorted();
    out_.partition.exponents.push_back(w.score);
    out_.worlds.push_back(std::move(w));
  }

  const Reasoner& r_;
  const std::vector<GroundAtom>& atoms_;
  WorldDistribution& out_;
  std::vector<bool> chosen_;
};

}  // namespace

WorldDistribution brute_force_distribution(const KnowledgeBase& kb, std::size_t max_uncertain,
                                           EvalDomain domain) {
  Reasoner r(kb, domain);
  return brute_force_distribution(r, max_uncertain);
}

WorldDistribution brute_force_distribution(const Reasoner& r, std::size_t max_uncertain) {
  std::size_t n = r.kb().uncertain.size();
  if (n > max_uncertain) {
    throw CapExceededError("uncertain part has " + std::to_string(n) +
                           " statements, above the enumeration cap of " +
                           std::to_string(max_uncertain) + "; use MAP inference instead");
  }
  WorldDistribution dist;
  dist.universe = r.shared_universe();
  Enumerator(r, dist).run(r.deterministic_closure());
  std::sort(dist.partition.exponents.begin(), dist.partition.exponents.end());
  return dist;
}

ExpRatio probability_of(const Reasoner& r, const WorldDistribution& dist,
                        std::span<const NormalStatement> query) {
  ExpRatio p;
  p.denominator = dist.partition;
  std::vector<GroundAtom> wanted;
  for (const auto& s : query) {
    // A statement over names outside the KB is entailed by no world.
    try {
      wanted.push_back(phi(s, r.universe()));
    } catch (const ValidationError&) {
      return p;
    }
  }
  for (const auto& w : dist.worlds) {
    bool all = std::all_of(wanted.begin(), wanted.end(), [&](const GroundAtom& a) {
      return std::binary_search(w.closure.begin(), w.closure.end(), a);
    });
    if (all) p.numerator.exponents.push_back(w.score);
  }
  std::sort(p.numerator.exponents.begin(), p.numerator.exponents.end());
  return p;
}

ExpRatio probability_of(const KnowledgeBase& kb, std::span<const NormalStatement> query,
                        std::size_t max_uncertain, EvalDomain domain) {
  Reasoner r(kb, domain);
  WorldDistribution dist = brute_force_distribution(r, max_uncertain);
  return probability_of(r, dist, query);
}

}  // namespace mel
