#include "mel/grounder.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "mel/errors.hpp"

namespace mel {

// ---------------------------------------------------------------------------
// eval

namespace {

struct Bound {
  bool infinite = true;
  Rational value{0};
  bool open = false;
};

struct Interval {
  Bound lo, hi;
  bool empty = false;
};

Interval real_interval(CompareOp op, const Rational& v) {
  Interval i;
  switch (op) {
    case CompareOp::Less:
      i.hi = {false, v, true};
      break;
    case CompareOp::LessEqual:
      i.hi = {false, v, false};
      break;
    case CompareOp::Greater:
      i.lo = {false, v, true};
      break;
    case CompareOp::GreaterEqual:
      i.lo = {false, v, false};
      break;
    case CompareOp::Equal:
      i.lo = {false, v, false};
      i.hi = {false, v, false};
      break;
  }
  return i;
}

Rational floor_of(const Rational& v) {
  std::int64_t q = v.numerator() / v.denominator();
  if (v.numerator() % v.denominator() != 0 && v.numerator() < 0) --q;
  return Rational(q);
}
Rational ceil_of(const Rational& v) {
  Rational f = floor_of(v);
  return f == v ? f : f + 1;
}

// Closed integer interval; an empty one is contained in everything.
Interval integer_interval(CompareOp op, const Rational& v) {
  Interval i;
  switch (op) {
    case CompareOp::Less:
      i.hi = {false, ceil_of(v) - 1, false};
      break;
    case CompareOp::LessEqual:
      i.hi = {false, floor_of(v), false};
      break;
    case CompareOp::Greater:
      i.lo = {false, floor_of(v) + 1, false};
      break;
    case CompareOp::GreaterEqual:
      i.lo = {false, ceil_of(v), false};
      break;
    case CompareOp::Equal:
      if (v.denominator() != 1) {
        i.empty = true;
      } else {
        i.lo = {false, v, false};
        i.hi = {false, v, false};
      }
      break;
  }
  return i;
}

// inner's lower bound is at least outer's.
bool lower_within(const Bound& inner, const Bound& outer) {
  if (outer.infinite) return true;
  if (inner.infinite) return false;
  if (inner.value != outer.value) return inner.value > outer.value;
  return inner.open || !outer.open;
}

bool upper_within(const Bound& inner, const Bound& outer) {
  if (outer.infinite) return true;
  if (inner.infinite) return false;
  if (inner.value != outer.value) return inner.value < outer.value;
  return inner.open || !outer.open;
}

}  // namespace

bool eval(CompareOp o1, const Rational& v1, CompareOp o2, const Rational& v2, EvalDomain domain) {
  auto make = domain == EvalDomain::Real ? real_interval : integer_interval;
  Interval inner = make(o1, v1);
  Interval outer = make(o2, v2);
  if (inner.empty) return true;
  if (outer.empty) return false;
  return lower_within(inner.lo, outer.lo) && upper_within(inner.hi, outer.hi);
}

// ---------------------------------------------------------------------------
// TruthAssignment

bool TruthAssignment::insert(const GroundAtom& atom) {
  if (!set_.insert(atom).second) return false;
  auto idx = static_cast<std::uint32_t>(atoms_.size());
  atoms_.push_back(atom);
  by_predicate_[static_cast<std::size_t>(atom.predicate)].push_back(idx);
  for (std::size_t pos = 0; pos < arity(atom.predicate); ++pos) {
    by_arg_[key(atom.predicate, pos, atom.args[pos])].push_back(idx);
  }
  return true;
}

std::vector<GroundAtom> TruthAssignment::sorted() const {
  std::vector<GroundAtom> out = atoms_;
  std::sort(out.begin(), out.end());
  return out;
}

const std::vector<std::uint32_t>& TruthAssignment::with_arg(Predicate p, std::size_t pos,
                                                            ConstId c) const {
  static const std::vector<std::uint32_t> kNone;
  auto it = by_arg_.find(key(p, pos, c));
  return it == by_arg_.end() ? kNone : it->second;
}

// ---------------------------------------------------------------------------
// Grounder

namespace {
constexpr std::size_t kNoSkip = std::numeric_limits<std::size_t>::max();
}

Grounder::Grounder(const Universe& universe, std::span<const ClauseTemplate> templates,
                   EvalDomain domain)
    : universe_(&universe), domain_(domain) {
  templates_.reserve(templates.size());
  for (const auto& t : templates) templates_.push_back(compile(t));
}

Grounder::CTerm Grounder::compile_term(const Term& t) const {
  CTerm c{t.kind, t.var, t.var2, -1};
  if (t.kind != Term::Kind::Const) return c;
  const Universe& u = *universe_;
  switch (t.sort) {
    case Sort::Concept:
      if (t.text.size() > 2 && t.text.front() == '{') {
        c.constant = u.concept_id(Concept::nominal_of(t.text.substr(1, t.text.size() - 2)));
      } else {
        c.constant = u.concept_id(Concept::named(t.text));
      }
      break;
    case Sort::Operator:
      for (CompareOp o : kAllCompareOps) {
        if (to_string(o) == t.text) c.constant = u.op(o);
      }
      break;
    case Sort::Individual:
      c.constant = u.individual_id(t.text);
      break;
    case Sort::Role:
      c.constant = u.role_id(t.text);
      break;
    case Sort::Feature:
      c.constant = u.feature_id(t.text);
      break;
    case Sort::Value:
      if (auto v = parse_decimal(t.text)) c.constant = u.value_id(*v);
      break;
  }
  if (c.constant < 0) throw ValidationError("unresolvable template constant " + t.text);
  return c;
}

Grounder::Compiled Grounder::compile(const ClauseTemplate& t) const {
  Compiled c;
  c.id = t.id;
  for (const auto& v : t.variables) c.var_sorts.push_back(v.sort);
  auto pattern = [&](const AtomPattern& p) {
    CPattern cp{p.predicate, {}};
    for (const auto& term : p.args) cp.args.push_back(compile_term(term));
    return cp;
  };
  for (const auto& p : t.body) {
    (p.predicate == Predicate::Eval ? c.evals : c.body).push_back(pattern(p));
  }
  if (t.head) c.head = pattern(*t.head);
  for (const auto& [v, term] : t.distinct) c.distinct.emplace_back(v, compile_term(term).constant);
  return c;
}

bool Grounder::match(const Compiled& c, const CPattern& p, const GroundAtom& atom, Binding& b,
                     std::vector<int>& undo) const {
  const Universe& u = *universe_;
  auto bind = [&](int v, ConstId value) {
    auto& slot = b[static_cast<std::size_t>(v)];
    if (slot >= 0) return slot == value;
    if (u.sort(value) != c.var_sorts[static_cast<std::size_t>(v)]) return false;
    slot = value;
    undo.push_back(v);
    return true;
  };
  for (std::size_t i = 0; i < p.args.size(); ++i) {
    const CTerm& t = p.args[i];
    ConstId value = atom.args[i];
    switch (t.kind) {
      case Term::Kind::Var:
        if (!bind(t.var, value)) return false;
        break;
      case Term::Kind::Const:
        if (value != t.constant) return false;
        break;
      case Term::Kind::NominalOf:
        if (u.sort(value) != Sort::Concept || !u.is_nominal(value)) return false;
        if (!bind(t.var, u.nominal_individual(value))) return false;
        break;
      case Term::Kind::Witness: {
        ConstId r = b[static_cast<std::size_t>(t.var)];
        ConstId f = b[static_cast<std::size_t>(t.var2)];
        if (r < 0 || f < 0 || value != u.witness(r, f)) return false;
        break;
      }
    }
  }
  return true;
}

const std::vector<std::uint32_t>& Grounder::candidates(const CPattern& p, const Binding& b,
                                                       const TruthAssignment& store) const {
  const std::vector<std::uint32_t>* best = &store.with_predicate(p.predicate);
  for (std::size_t i = 0; i < p.args.size(); ++i) {
    const CTerm& t = p.args[i];
    ConstId value = -1;
    if (t.kind == Term::Kind::Const) {
      value = t.constant;
    } else if (t.kind == Term::Kind::Var) {
      value = b[static_cast<std::size_t>(t.var)];
    } else if (t.kind == Term::Kind::NominalOf && b[static_cast<std::size_t>(t.var)] >= 0) {
      value = universe_->nominal_concept(b[static_cast<std::size_t>(t.var)]);
    }
    if (value < 0) continue;
    const auto& list = store.with_arg(p.predicate, i, value);
    if (list.size() < best->size()) best = &list;
  }
  return *best;
}

bool Grounder::leaf_ok(const Compiled& c, const Binding& b) const {
  for (const auto& [v, constant] : c.distinct) {
    if (b[static_cast<std::size_t>(v)] == constant) return false;
  }
  const Universe& u = *universe_;
  auto resolve = [&](const CTerm& t) {
    return t.kind == Term::Kind::Const ? t.constant : b[static_cast<std::size_t>(t.var)];
  };
  for (const auto& e : c.evals) {
    ConstId o1 = resolve(e.args[0]), v1 = resolve(e.args[1]);
    ConstId o2 = resolve(e.args[2]), v2 = resolve(e.args[3]);
    if (!eval(u.op_of(o1), u.value_of(v1), u.op_of(o2), u.value_of(v2), domain_)) return false;
  }
  return true;
}

void Grounder::join(const Compiled& c, const TruthAssignment& store, std::size_t skip,
                    std::size_t k, Binding& b, const Visit& visit) const {
  if (k == skip) ++k;
  if (k >= c.body.size()) {
    if (leaf_ok(c, b)) visit(b);
    return;
  }
  const CPattern& p = c.body[k];
  const auto& list = candidates(p, b, store);
  std::vector<int> undo;
  // `list` may belong to `store`, which is not modified during a join.
  for (std::uint32_t idx : list) {
    undo.clear();
    if (match(c, p, store.at(idx), b, undo)) join(c, store, skip, k + 1, b, visit);
    for (int v : undo) b[static_cast<std::size_t>(v)] = -1;
  }
}

void Grounder::enumerate_free(const Compiled& c, const Visit& visit) const {
  Binding b(c.var_sorts.size(), -1);
  std::size_t n = c.var_sorts.size();
  std::vector<const std::vector<ConstId>*> domains;
  for (Sort s : c.var_sorts) domains.push_back(&universe_->domain(s));
  for (const auto* d : domains) {
    if (d->empty()) return;
  }
  std::vector<std::size_t> pos(n, 0);
  while (true) {
    for (std::size_t i = 0; i < n; ++i) b[i] = (*domains[i])[pos[i]];
    if (leaf_ok(c, b)) visit(b);
    std::size_t i = 0;
    while (i < n && ++pos[i] == domains[i]->size()) pos[i++] = 0;
    if (i == n) return;
  }
}

GroundAtom Grounder::instantiate(const CPattern& p, const Binding& b) const {
  GroundAtom a;
  a.predicate = p.predicate;
  for (std::size_t i = 0; i < p.args.size(); ++i) {
    const CTerm& t = p.args[i];
    switch (t.kind) {
      case Term::Kind::Var:
        a.args[i] = b[static_cast<std::size_t>(t.var)];
        break;
      case Term::Kind::Const:
        a.args[i] = t.constant;
        break;
      case Term::Kind::NominalOf:
        a.args[i] = universe_->nominal_concept(b[static_cast<std::size_t>(t.var)]);
        break;
      case Term::Kind::Witness:
        a.args[i] = universe_->witness(b[static_cast<std::size_t>(t.var)],
                                       b[static_cast<std::size_t>(t.var2)]);
        break;
    }
  }
  return a;
}

std::vector<GroundAtom> Grounder::body_atoms(const Compiled& c, const Binding& b) const {
  std::vector<GroundAtom> out;
  out.reserve(c.body.size());
  for (const auto& p : c.body) out.push_back(instantiate(p, b));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

bool clause_less(const ViolatedClause& a, const ViolatedClause& b) {
  if (a.positive != b.positive) return a.positive < b.positive;
  return a.negative < b.negative;
}

}  // namespace

std::vector<ViolatedClause> Grounder::find_violated(
    const TruthAssignment& current, std::span<const WeightedEvidence> evidence) const {
  std::vector<ViolatedClause> out;
  for (const Compiled& c : templates_) {
    std::vector<ViolatedClause> local;
    auto visit = [&](const Binding& b) {
      ViolatedClause g;
      if (c.head) {
        GroundAtom h = instantiate(*c.head, b);
        if (current.contains(h)) return;
        g.positive.push_back(h);
      }
      g.negative = body_atoms(c, b);
      g.template_id = c.id;
      local.push_back(std::move(g));
    };
    if (c.body.empty()) {
      enumerate_free(c, visit);
    } else {
      Binding b(c.var_sorts.size(), -1);
      join(c, current, kNoSkip, 0, b, visit);
    }
    std::sort(local.begin(), local.end(), clause_less);
    local.erase(std::unique(local.begin(), local.end()), local.end());
    for (auto& g : local) out.push_back(std::move(g));
  }
  for (std::size_t i = 0; i < evidence.size(); ++i) {
    const WeightedEvidence& e = evidence[i];
    bool holds = current.contains(e.atom);
    bool violated;
    if (e.weight.is_infinite()) {
      violated = holds != e.positive;
    } else if (e.weight.value() > 0) {
      violated = !holds;
    } else if (e.weight.value() < 0) {
      violated = holds;
    } else {
      violated = false;
    }
    if (!violated) continue;
    ViolatedClause g;
    (e.positive ? g.positive : g.negative).push_back(e.atom);
    g.weight = e.weight;
    g.template_id = "EVIDENCE";
    g.evidence = i;
    out.push_back(std::move(g));
  }
  return out;
}

void Grounder::saturate(TruthAssignment& store, std::vector<GroundAtom> delta) const {
  std::vector<GroundAtom> next;
  while (!delta.empty()) {
    next.clear();
    for (const Compiled& c : templates_) {
      if (!c.head || c.body.empty()) continue;
      Binding b(c.var_sorts.size(), -1);
      std::vector<int> undo;
      auto visit = [&](const Binding& full) {
        GroundAtom h = instantiate(*c.head, full);
        if (!store.contains(h)) next.push_back(h);
      };
      for (std::size_t i = 0; i < c.body.size(); ++i) {
        for (const GroundAtom& d : delta) {
          if (d.predicate != c.body[i].predicate) continue;
          undo.clear();
          if (match(c, c.body[i], d, b, undo)) join(c, store, i, 0, b, visit);
          for (int v : undo) b[static_cast<std::size_t>(v)] = -1;
        }
      }
    }
    delta.clear();
    for (const GroundAtom& a : next) {
      if (store.insert(a)) delta.push_back(a);
    }
  }
}

TruthAssignment Grounder::close(std::span<const GroundAtom> facts) const {
  TruthAssignment store;
  std::vector<GroundAtom> delta;
  auto add = [&](const GroundAtom& a) {
    if (store.insert(a)) delta.push_back(a);
  };
  for (const Compiled& c : templates_) {
    if (!c.head || !c.body.empty()) continue;
    enumerate_free(c, [&](const Binding& b) { add(instantiate(*c.head, b)); });
  }
  for (const auto& f : facts) add(f);
  saturate(store, std::move(delta));
  return store;
}

void Grounder::extend(TruthAssignment& closed, std::span<const GroundAtom> facts) const {
  std::vector<GroundAtom> delta;
  for (const auto& f : facts) {
    if (closed.insert(f)) delta.push_back(f);
  }
  saturate(closed, std::move(delta));
}

std::vector<ViolatedClause> Grounder::conflicts(const TruthAssignment& atoms) const {
  std::vector<ViolatedClause> out;
  for (const Compiled& c : templates_) {
    if (c.head || c.body.empty()) continue;
    std::vector<ViolatedClause> local;
    Binding b(c.var_sorts.size(), -1);
    join(c, atoms, kNoSkip, 0, b, [&](const Binding& full) {
      local.push_back({{}, body_atoms(c, full), Weight::infinite(), c.id, std::nullopt});
    });
    std::sort(local.begin(), local.end(), clause_less);
    for (auto& g : local) out.push_back(std::move(g));
  }
  return out;
}

}  // namespace mel
