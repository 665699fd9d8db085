#include "mel/normalizer.hpp"

#include <vector>

#include "mel/errors.hpp"

namespace mel {

namespace {

using Kind = ConceptExpr::Kind;

class Normalizer {
 public:
  explicit Normalizer(const Signature& sig) { out_.kb.signature = sig; }

  void add(const WeightedAxiom& wa) {
    check_axiom(wa.axiom);
    if (auto normal = as_normal_statement(wa.axiom)) {
      emit(std::move(*normal), wa.weight);
      return;
    }
    if (const auto* inc = std::get_if<ConceptInclusion>(&wa.axiom)) {
      inclusion(inc->sub, inc->sup, wa.weight);
    } else if (const auto* eq = std::get_if<ConceptEquivalence>(&wa.axiom)) {
      for (const auto& [l, r] : {std::pair{&eq->left, &eq->right}, std::pair{&eq->right, &eq->left}}) {
        if (auto normal = as_normal_statement(ConceptInclusion{*l, *r})) {
          emit(std::move(*normal), wa.weight);
        } else {
          inclusion(*l, *r, wa.weight);
        }
      }
    } else if (const auto* chain = std::get_if<RoleChainInclusion>(&wa.axiom)) {
      role_chain(*chain, wa.weight);
    } else if (const auto* assertion = std::get_if<ExprAssertion>(&wa.axiom)) {
      Concept x = name_superset(assertion->type);
      emit(ConceptAssertion{x, assertion->individual}, wa.weight);
    }
  }

  Normalization take() { return std::move(out_); }

 private:
  void emit(NormalStatement s, const Weight& w) {
    auto& part = w.is_infinite() ? out_.kb.deterministic : out_.kb.uncertain;
    part.push_back({std::move(s), w});
  }
  void define(NormalStatement s) { emit(std::move(s), Weight::infinite()); }

  std::string fresh(std::string_view prefix, std::set<std::string>& names, std::size_t& counter,
                    std::string meaning) {
    std::string name;
    do {
      name = std::string(prefix) + std::to_string(++counter);
    } while (out_.kb.signature.concepts.contains(name) || out_.kb.signature.roles.contains(name) ||
             out_.kb.signature.features.contains(name) ||
             out_.kb.signature.individuals.contains(name));
    names.insert(name);
    out_.fresh_names.emplace(name, std::move(meaning));
    return name;
  }
  Concept fresh_concept(const ConceptExpr& meaning) {
    return Concept::named(fresh(kFreshConceptPrefix, out_.kb.signature.concepts, concept_counter_,
                                format_expr(meaning)));
  }

  // Returns a name N with E ⊑ N, emitting the definitions that make it so.
  Concept name_subset(const ConceptExpr& e) {
    if (e.is_name()) return e.as_concept();
    Concept n = fresh_concept(e);
    left_into(e, n, Weight::infinite());
    return n;
  }

  // Returns a name N with N ⊑ E.
  Concept name_superset(const ConceptExpr& e) {
    if (e.is_name()) return e.as_concept();
    Concept n = fresh_concept(e);
    right_from(n, e, Weight::infinite());
    return n;
  }

  // Emits normal statements equivalent to E ⊑ target (target a name); the
  // weight goes on the statement whose conclusion is target.
  void left_into(const ConceptExpr& e, const Concept& target, const Weight& w) {
    switch (e.kind) {
      case Kind::Atomic:
      case Kind::Nominal:
        emit(subsumption(e.as_concept(), target), w);
        return;
      case Kind::FeatureExists:
        emit(FeatureSubsumption{e.name, e.restriction, target}, w);
        return;
      case Kind::Exists:
        emit(ExistentialSubsumption{e.name, name_subset(e.operands[0]), target}, w);
        return;
      case Kind::And: {
        std::vector<ConceptExpr> flat;
        flatten(e, flat);
        if (flat.size() == 1) {
          left_into(flat[0], target, w);
          return;
        }
        std::vector<Concept> names;
        for (const auto& conjunct : flat) names.push_back(name_subset(conjunct));
        Concept acc = names[0];
        for (std::size_t i = 1; i < flat.size(); ++i) {
          const Concept& next = names[i];
          if (i + 1 == flat.size()) {
            emit(ConjunctionSubsumption{acc, next, target}, w);
          } else {
            std::vector<ConceptExpr> prefix(flat.begin(), flat.begin() + static_cast<long>(i) + 1);
            Concept joined = fresh_concept(ConceptExpr::conjunction(std::move(prefix)));
            define(ConjunctionSubsumption{acc, next, joined});
            acc = joined;
          }
        }
        return;
      }
    }
  }

  // Emits normal statements equivalent to source ⊑ E (source a name).
  void right_from(const Concept& source, const ConceptExpr& e, const Weight& w) {
    switch (e.kind) {
      case Kind::Atomic:
      case Kind::Nominal:
        emit(subsumption(source, e.as_concept()), w);
        return;
      case Kind::FeatureExists:
        emit(FeatureRestriction{source, e.name, e.restriction}, w);
        return;
      case Kind::Exists:
        emit(ExistentialRestriction{source, e.name, name_superset(e.operands[0])}, w);
        return;
      case Kind::And: {
        std::vector<ConceptExpr> flat;
        flatten(e, flat);
        if (flat.size() == 1) {
          right_from(source, flat[0], w);
          return;
        }
        // One weighted link to a fresh name standing for the whole conjunction.
        Concept whole = source;
        if (w.is_finite()) {
          whole = fresh_concept(e);
          emit(Subsumption{source, whole}, w);
        }
        for (const auto& conjunct : flat) right_from(whole, conjunct, Weight::infinite());
        return;
      }
    }
  }

  static NormalStatement subsumption(const Concept& sub, const Concept& sup) {
    if (sup.nominal && !sub.nominal) return NominalSubsumption{sub, sup.name};
    return Subsumption{sub, sup};
  }

  static void flatten(const ConceptExpr& e, std::vector<ConceptExpr>& out) {
    if (e.kind == Kind::And) {
      for (const auto& op : e.operands) flatten(op, out);
    } else {
      out.push_back(e);
    }
  }

  void inclusion(const ConceptExpr& sub, const ConceptExpr& sup, const Weight& w) {
    if (sup.is_name()) {
      left_into(sub, sup.as_concept(), w);
      return;
    }
    Concept left = sub.is_name() ? sub.as_concept() : name_subset(sub);
    if (sup.kind == Kind::FeatureExists && sub.kind == Kind::And) {
      std::vector<ConceptExpr> flat;
      flatten(sub, flat);
      if (flat.size() == 2 && flat[0].is_name() && flat[1].is_name()) {
        emit(ConjunctionFeatureRestriction{flat[0].as_concept(), flat[1].as_concept(), sup.name,
                                           sup.restriction},
             w);
        return;
      }
    }
    right_from(left, sup, w);
  }

  void role_chain(const RoleChainInclusion& chain, const Weight& w) {
    if (chain.chain.empty()) throw ValidationError("empty role chain");
    std::string acc = chain.chain[0];
    std::string rendered = acc;
    for (std::size_t i = 1; i + 1 < chain.chain.size(); ++i) {
      rendered += " o " + chain.chain[i];
      std::string u = fresh(kFreshRolePrefix, out_.kb.signature.roles, role_counter_, rendered);
      define(RoleComposition{acc, chain.chain[i], u});
      acc = u;
    }
    emit(RoleComposition{acc, chain.chain.back(), chain.sup}, w);
  }

  // Name checks against the input signature.
  void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError("unknown symbol: " + what);
  }
  void check_expr(const ConceptExpr& e) {
    const Signature& sig = out_.kb.signature;
    switch (e.kind) {
      case Kind::Atomic:
        require(sig.concepts.contains(e.name), "concept " + e.name);
        break;
      case Kind::Nominal:
        require(sig.individuals.contains(e.name), "individual " + e.name);
        break;
      case Kind::FeatureExists:
        require(sig.features.contains(e.name), "feature " + e.name);
        break;
      case Kind::Exists:
        require(sig.roles.contains(e.name), "role " + e.name);
        if (e.operands.size() != 1) throw ValidationError("existential needs exactly one filler");
        break;
      case Kind::And:
        if (e.operands.empty()) throw ValidationError("empty conjunction");
        break;
    }
    for (const auto& op : e.operands) check_expr(op);
  }
  void check_axiom(const GeneralAxiom& axiom) {
    const Signature& sig = out_.kb.signature;
    if (const auto* inc = std::get_if<ConceptInclusion>(&axiom)) {
      check_expr(inc->sub);
      check_expr(inc->sup);
    } else if (const auto* eq = std::get_if<ConceptEquivalence>(&axiom)) {
      check_expr(eq->left);
      check_expr(eq->right);
    } else if (const auto* chain = std::get_if<RoleChainInclusion>(&axiom)) {
      for (const auto& r : chain->chain) require(sig.roles.contains(r), "role " + r);
      require(sig.roles.contains(chain->sup), "role " + chain->sup);
    } else if (const auto* assertion = std::get_if<ExprAssertion>(&axiom)) {
      check_expr(assertion->type);
      require(sig.individuals.contains(assertion->individual), "individual " + assertion->individual);
    } else if (const auto* r = std::get_if<RoleAssertion>(&axiom)) {
      if (auto problem = check_names(*r, sig); !problem.empty()) throw ValidationError(problem);
    } else if (const auto* f = std::get_if<FeatureAssertion>(&axiom)) {
      if (auto problem = check_names(*f, sig); !problem.empty()) throw ValidationError(problem);
    }
  }

  Normalization out_;
  std::size_t concept_counter_ = 0;
  std::size_t role_counter_ = 0;
};

}  // namespace

Normalization normalize(std::span<const WeightedAxiom> axioms, const Signature& sig) {
  Normalizer n(sig);
  for (const auto& wa : axioms) n.add(wa);
  return n.take();
}

}  // namespace mel
