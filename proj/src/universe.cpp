#include "mel/universe.hpp"

#include <set>
#include <variant>

#include "mel/errors.hpp"

namespace mel {

std::string_view to_string(Sort sort) {
  switch (sort) {
    case Sort::Concept:
      return "concept";
    case Sort::Role:
      return "role";
    case Sort::Feature:
      return "feature";
    case Sort::Individual:
      return "individual";
    case Sort::Operator:
      return "operator";
    case Sort::Value:
      return "value";
  }
  return "?";
}

ConstId Universe::add(Entry e) {
  auto id = static_cast<ConstId>(entries_.size());
  auto& dom = domains_[static_cast<std::size_t>(e.sort)];
  e.position = static_cast<std::int32_t>(dom.size());
  dom.push_back(id);
  entries_.push_back(std::move(e));
  return id;
}

Universe::Universe(const Signature& sig, std::span<const Rational> values) {
  // Ids follow CompareOp's enumerator order so op(o) is a cast.
  for (CompareOp o : kAllCompareOps) add({Sort::Operator, std::string(to_string(o))});

  top_ = add({Sort::Concept, std::string(kTop)});
  bottom_ = add({Sort::Concept, std::string(kBottom)});
  concepts_.emplace(std::string(kTop), top_);
  concepts_.emplace(std::string(kBottom), bottom_);
  for (const auto& c : sig.concepts) {
    if (c == kTop || c == kBottom) continue;
    concepts_.emplace(c, add({Sort::Concept, c}));
  }
  std::vector<ConstId> nominal_ids;
  for (const auto& a : sig.individuals) {
    ConstId id = add({Sort::Concept, a});
    nominals_.emplace(a, id);
    nominal_ids.push_back(id);
  }
  for (const auto& r : sig.roles) roles_.emplace(r, add({Sort::Role, r}));
  for (const auto& f : sig.features) features_.emplace(f, add({Sort::Feature, f}));
  std::size_t k = 0;
  for (const auto& a : sig.individuals) {
    ConstId id = add({Sort::Individual, a});
    individuals_.emplace(a, id);
    named_individuals_.push_back(id);
    entries_[static_cast<std::size_t>(id)].partner = nominal_ids[k];
    entries_[static_cast<std::size_t>(nominal_ids[k])].partner = id;
    ++k;
  }
  std::set<Rational> distinct(values.begin(), values.end());
  for (const auto& v : distinct) {
    Entry e{Sort::Value, to_decimal_string(v)};
    e.value = v;
    values_.emplace(v, add(std::move(e)));
  }

  witness_fillers_ = domain(Sort::Concept).size();
  first_witness_ = static_cast<ConstId>(entries_.size());
  for (ConstId r : domain(Sort::Role)) {
    for (ConstId c : domain(Sort::Concept)) {
      Entry e{Sort::Individual, "_:" + name(r) + "." + display(c)};
      e.witness = true;
      add(std::move(e));
    }
  }
}

namespace {

struct ValueCollector {
  std::vector<Rational>& out;
  void operator()(const FeatureAssertion& s) const { out.push_back(s.value); }
  void operator()(const FeatureRestriction& s) const { out.push_back(s.restriction.value); }
  void operator()(const FeatureSubsumption& s) const { out.push_back(s.restriction.value); }
  void operator()(const ConjunctionFeatureRestriction& s) const {
    out.push_back(s.restriction.value);
  }
  template <typename T>
  void operator()(const T&) const {}
};

}  // namespace

Universe Universe::for_kb(const KnowledgeBase& kb) {
  std::vector<Rational> values;
  for (const auto* part : {&kb.deterministic, &kb.uncertain}) {
    for (const auto& ws : *part) std::visit(ValueCollector{values}, ws.statement);
  }
  return Universe(kb.signature, values);
}

template <typename Map, typename Key>
static std::optional<ConstId> lookup(const Map& m, const Key& key) {
  auto it = m.find(key);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

std::optional<ConstId> Universe::find_concept(const Concept& c) const {
  return c.nominal ? lookup(nominals_, c.name) : lookup(concepts_, c.name);
}
std::optional<ConstId> Universe::find_role(std::string_view n) const { return lookup(roles_, n); }
std::optional<ConstId> Universe::find_feature(std::string_view n) const {
  return lookup(features_, n);
}
std::optional<ConstId> Universe::find_individual(std::string_view n) const {
  return lookup(individuals_, n);
}
std::optional<ConstId> Universe::find_value(const Rational& v) const { return lookup(values_, v); }

namespace {
ConstId require(std::optional<ConstId> id, std::string_view what, const std::string& name) {
  if (!id) throw ValidationError("unknown " + std::string(what) + " " + name);
  return *id;
}
}  // namespace

ConstId Universe::concept_id(const Concept& c) const {
  return require(find_concept(c), "concept", format_concept(c));
}
ConstId Universe::role_id(std::string_view n) const {
  return require(find_role(n), "role", std::string(n));
}
ConstId Universe::feature_id(std::string_view n) const {
  return require(find_feature(n), "feature", std::string(n));
}
ConstId Universe::individual_id(std::string_view n) const {
  return require(find_individual(n), "individual", std::string(n));
}
ConstId Universe::value_id(const Rational& v) const {
  return require(find_value(v), "value", to_decimal_string(v));
}

ConstId Universe::witness(ConstId role, ConstId filler) const {
  auto r = static_cast<std::size_t>(entry(role).position);
  auto c = static_cast<std::size_t>(entry(filler).position);
  return first_witness_ + static_cast<ConstId>(r * witness_fillers_ + c);
}

std::string Universe::display(ConstId id) const {
  const Entry& e = entry(id);
  if (e.sort == Sort::Concept && e.partner >= 0) return "{" + e.name + "}";
  return e.name;
}

Concept Universe::concept_of(ConstId id) const {
  const Entry& e = entry(id);
  return {e.name, e.partner >= 0};
}

}  // namespace mel
