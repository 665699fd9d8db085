#pragma once

// Interned constants of one knowledge base: every concept (atomic, nominal,
// TOP, BOT), role, feature, individual (named and anonymous witnesses),
// comparison operator and numeric value gets a dense integer id.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mel/kb.hpp"

namespace mel {

using ConstId = std::int32_t;

enum class Sort : std::uint8_t { Concept, Role, Feature, Individual, Operator, Value };

std::string_view to_string(Sort sort);

class Universe {
 public:
  // `values` are the numeric constants of the KB (restriction values and
  // feature assertion values); duplicates are fine.
  Universe(const Signature& sig, std::span<const Rational> values);

  static Universe for_kb(const KnowledgeBase& kb);

  std::size_t size() const { return entries_.size(); }
  Sort sort(ConstId id) const { return entries_[static_cast<std::size_t>(id)].sort; }

  // All constants of a sort, in id order. Individuals include witnesses.
  const std::vector<ConstId>& domain(Sort sort) const {
    return domains_[static_cast<std::size_t>(sort)];
  }
  const std::vector<ConstId>& named_individuals() const { return named_individuals_; }

  ConstId top() const { return top_; }
  ConstId bottom() const { return bottom_; }
  ConstId op(CompareOp o) const { return static_cast<ConstId>(o); }

  std::optional<ConstId> find_concept(const Concept& c) const;
  std::optional<ConstId> find_role(std::string_view name) const;
  std::optional<ConstId> find_feature(std::string_view name) const;
  std::optional<ConstId> find_individual(std::string_view name) const;
  std::optional<ConstId> find_value(const Rational& v) const;

  // Lookups that throw ValidationError when the symbol is not interned.
  ConstId concept_id(const Concept& c) const;
  ConstId role_id(std::string_view name) const;
  ConstId feature_id(std::string_view name) const;
  ConstId individual_id(std::string_view name) const;
  ConstId value_id(const Rational& v) const;

  bool is_nominal(ConstId concept_id) const { return entry(concept_id).partner >= 0; }
  // Nominal concept {a} <-> individual a.
  ConstId nominal_individual(ConstId concept_id) const { return entry(concept_id).partner; }
  ConstId nominal_concept(ConstId individual_id) const { return entry(individual_id).partner; }

  bool is_witness(ConstId individual_id) const { return entry(individual_id).witness; }
  // Anonymous successor shared by every instance of A with A ⊑ ∃R.B.
  ConstId witness(ConstId role, ConstId filler) const;

  CompareOp op_of(ConstId id) const { return static_cast<CompareOp>(id); }
  const Rational& value_of(ConstId id) const { return entry(id).value; }

  // Concept name without braces for nominals; see display() for printing.
  const std::string& name(ConstId id) const { return entry(id).name; }
  std::string display(ConstId id) const;
  Concept concept_of(ConstId id) const;

 private:
  struct Entry {
    Sort sort;
    std::string name;
    ConstId partner = -1;
    bool witness = false;
    Rational value{0};
    std::int32_t position = 0;  // index within its sort's domain
  };
  const Entry& entry(ConstId id) const { return entries_[static_cast<std::size_t>(id)]; }
  ConstId add(Entry e);

  std::vector<Entry> entries_;
  std::vector<std::vector<ConstId>> domains_{6};
  std::vector<ConstId> named_individuals_;
  std::map<std::string, ConstId, std::less<>> concepts_, nominals_, roles_, features_, individuals_;
  std::map<Rational, ConstId> values_;
  ConstId top_ = -1;
  ConstId bottom_ = -1;
  ConstId first_witness_ = -1;
  std::size_t witness_fillers_ = 0;
};

}  // namespace mel
