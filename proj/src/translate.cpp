#include "mel/translate.hpp"

#include <sstream>
#include <stdexcept>
#include <string_view>

#include "mel/errors.hpp"

namespace mel {

namespace {

struct PredicateInfo {
  std::string_view name;
  std::vector<Sort> sorts;  // Rinst's middle/last positions are checked separately
};

const std::vector<PredicateInfo>& predicate_table() {
  using S = Sort;
  static const std::vector<PredicateInfo> table = {
      {"sub", {S::Concept, S::Concept}},
      {"subNom", {S::Concept, S::Individual}},
      {"int", {S::Concept, S::Concept, S::Concept}},
      {"intEx", {S::Concept, S::Concept, S::Feature, S::Operator, S::Value}},
      {"rsub", {S::Concept, S::Role, S::Concept}},
      {"rsup", {S::Concept, S::Role, S::Concept}},
      {"rsupEx", {S::Concept, S::Feature, S::Operator, S::Value}},
      {"rsubEx", {S::Feature, S::Operator, S::Value, S::Concept}},
      {"psub", {S::Role, S::Role}},
      {"pcom", {S::Role, S::Role, S::Role}},
      {"inst", {S::Individual, S::Concept}},
      {"rinst", {S::Individual, S::Role, S::Individual}},
      {"eval", {S::Operator, S::Value, S::Operator, S::Value}},
  };
  return table;
}

const PredicateInfo& info(Predicate p) { return predicate_table()[static_cast<std::size_t>(p)]; }

}  // namespace

std::string_view to_string(Predicate p) { return info(p).name; }
std::size_t arity(Predicate p) { return info(p).sorts.size(); }

bool well_typed(const GroundAtom& atom, const Universe& u) {
  const auto& sorts = info(atom.predicate).sorts;
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    ConstId c = atom.args[i];
    if (i >= sorts.size()) {
      if (c != 0) return false;
      continue;
    }
    if (c < 0 || static_cast<std::size_t>(c) >= u.size()) return false;
  }
  if (atom.predicate == Predicate::Rinst) {
    Sort mid = u.sort(atom.args[1]);
    Sort last = u.sort(atom.args[2]);
    return u.sort(atom.args[0]) == Sort::Individual &&
           ((mid == Sort::Role && last == Sort::Individual) ||
            (mid == Sort::Feature && last == Sort::Value));
  }
  if (atom.predicate == Predicate::SubNom && u.is_witness(atom.args[1])) return false;
  for (std::size_t i = 0; i < sorts.size(); ++i) {
    if (u.sort(atom.args[i]) != sorts[i]) return false;
  }
  return true;
}

std::string format_atom(const GroundAtom& atom, const Universe& u) {
  std::string out(to_string(atom.predicate));
  out += '(';
  for (std::size_t i = 0; i < arity(atom.predicate); ++i) {
    if (i) out += ',';
    out += u.display(atom.args[i]);
  }
  out += ')';
  return out;
}

namespace {

GroundAtom make(Predicate p, std::initializer_list<ConstId> args) {
  GroundAtom a;
  a.predicate = p;
  std::size_t i = 0;
  for (ConstId c : args) a.args[i++] = c;
  return a;
}

struct PhiVisitor {
  const Universe& u;
  ConstId c(const Concept& x) const { return u.concept_id(x); }
  ConstId op(const DatatypeRestriction& r) const { return u.op(r.op); }
  ConstId val(const DatatypeRestriction& r) const { return u.value_id(r.value); }

  GroundAtom operator()(const ConceptAssertion& s) const {
    return make(Predicate::Inst, {u.individual_id(s.individual), c(s.type)});
  }
  GroundAtom operator()(const RoleAssertion& s) const {
    return make(Predicate::Rinst,
                {u.individual_id(s.subject), u.role_id(s.role), u.individual_id(s.object)});
  }
  GroundAtom operator()(const FeatureAssertion& s) const {
    return make(Predicate::Rinst,
                {u.individual_id(s.individual), u.feature_id(s.feature), u.value_id(s.value)});
  }
  GroundAtom operator()(const Subsumption& s) const {
    return make(Predicate::Sub, {c(s.sub), c(s.sup)});
  }
  GroundAtom operator()(const NominalSubsumption& s) const {
    return make(Predicate::SubNom, {c(s.sub), u.individual_id(s.individual)});
  }
  GroundAtom operator()(const ConjunctionSubsumption& s) const {
    return make(Predicate::Int, {c(s.left), c(s.right), c(s.sup)});
  }
  GroundAtom operator()(const ExistentialSubsumption& s) const {
    return make(Predicate::Rsub, {c(s.filler), u.role_id(s.role), c(s.sup)});
  }
  GroundAtom operator()(const ExistentialRestriction& s) const {
    return make(Predicate::Rsup, {c(s.sub), u.role_id(s.role), c(s.filler)});
  }
  GroundAtom operator()(const FeatureRestriction& s) const {
    return make(Predicate::RsupEx,
                {c(s.sub), u.feature_id(s.feature), op(s.restriction), val(s.restriction)});
  }
  GroundAtom operator()(const FeatureSubsumption& s) const {
    return make(Predicate::RsubEx,
                {u.feature_id(s.feature), op(s.restriction), val(s.restriction), c(s.sup)});
  }
  GroundAtom operator()(const ConjunctionFeatureRestriction& s) const {
    return make(Predicate::IntEx, {c(s.left), c(s.right), u.feature_id(s.feature),
                                   op(s.restriction), val(s.restriction)});
  }
  GroundAtom operator()(const RoleInclusion& s) const {
    return make(Predicate::Psub, {u.role_id(s.sub), u.role_id(s.sup)});
  }
  GroundAtom operator()(const RoleComposition& s) const {
    return make(Predicate::Pcom, {u.role_id(s.first), u.role_id(s.second), u.role_id(s.sup)});
  }
};

}  // namespace

GroundAtom phi(const NormalStatement& statement, const Universe& u) {
  return std::visit(PhiVisitor{u}, statement);
}

NormalStatement phi_inverse(const GroundAtom& atom, const Universe& u) {
  if (!well_typed(atom, u)) throw ValidationError("ill-typed atom " + format_atom(atom, u));
  const auto& a = atom.args;
  auto c = [&](std::size_t i) { return u.concept_of(a[i]); };
  auto n = [&](std::size_t i) { return u.name(a[i]); };
  auto r = [&](std::size_t op, std::size_t val) {
    return DatatypeRestriction{u.op_of(a[op]), u.value_of(a[val])};
  };
  switch (atom.predicate) {
    case Predicate::Sub:
      return Subsumption{c(0), c(1)};
    case Predicate::SubNom:
      return NominalSubsumption{c(0), n(1)};
    case Predicate::Int:
      return ConjunctionSubsumption{c(0), c(1), c(2)};
    case Predicate::IntEx:
      return ConjunctionFeatureRestriction{c(0), c(1), n(2), r(3, 4)};
    case Predicate::Rsub:
      return ExistentialSubsumption{n(1), c(0), c(2)};
    case Predicate::Rsup:
      return ExistentialRestriction{c(0), n(1), c(2)};
    case Predicate::RsupEx:
      return FeatureRestriction{c(0), n(1), r(2, 3)};
    case Predicate::RsubEx:
      return FeatureSubsumption{n(0), r(1, 2), c(3)};
    case Predicate::Psub:
      return RoleInclusion{n(0), n(1)};
    case Predicate::Pcom:
      return RoleComposition{n(0), n(1), n(2)};
    case Predicate::Inst:
      return ConceptAssertion{c(1), n(0)};
    case Predicate::Rinst:
      if (u.sort(a[1]) == Sort::Feature) return FeatureAssertion{n(1), n(0), u.value_of(a[2])};
      return RoleAssertion{n(1), n(0), n(2)};
    case Predicate::Eval:
      break;
  }
  throw ValidationError("eval atoms have no statement counterpart");
}

// ---------------------------------------------------------------------------
// Templates

namespace {

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(' ');
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(' ');
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_top(std::string_view s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == sep && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(trim(s.substr(start)));
  return out;
}

Predicate predicate_named(std::string_view name) {
  for (std::size_t i = 0; i < kPredicateCount; ++i) {
    if (predicate_table()[i].name == name) return static_cast<Predicate>(i);
  }
  throw std::logic_error("unknown predicate in template: " + std::string(name));
}

Sort sort_code(std::string_view code) {
  if (code == "C") return Sort::Concept;
  if (code == "R") return Sort::Role;
  if (code == "F") return Sort::Feature;
  if (code == "I") return Sort::Individual;
  if (code == "O") return Sort::Operator;
  if (code == "V") return Sort::Value;
  throw std::logic_error("unknown sort code: " + std::string(code));
}

// Builds a template from a compact rule text:
//   vars: "c:C d:C r:R"; rule: "sub(c,d), rsup(d,r,e) -> rsup(c,r,e)"
// Terms: variable, TOP, BOT, "=" (operator), "{a}" (nominal of var a),
// "w(r,b)" (witness). Guards "x != TOP" may appear among body items.
class TemplateBuilder {
 public:
  ClauseTemplate build(std::string id, std::string_view vars, std::string_view rule) {
    t_ = ClauseTemplate{};
    t_.id = std::move(id);
    std::istringstream in{std::string(vars)};
    std::string decl;
    while (in >> decl) {
      auto colon = decl.find(':');
      t_.variables.push_back({decl.substr(0, colon), sort_code(decl.substr(colon + 1))});
    }
    auto arrow = rule.find("->");
    std::string body = trim(rule.substr(0, arrow));
    std::string head = trim(rule.substr(arrow + 2));
    if (!body.empty()) {
      for (const auto& item : split_top(body, ',')) {
        auto ne = item.find("!=");
        if (ne != std::string::npos) {
          t_.distinct.emplace_back(var(trim(item.substr(0, ne))),
                                   term(trim(item.substr(ne + 2))));
        } else {
          t_.body.push_back(pattern(item));
        }
      }
    }
    if (head != "FALSE") t_.head = pattern(head);
    return std::move(t_);
  }

 private:
  int var(const std::string& name) const {
    for (std::size_t i = 0; i < t_.variables.size(); ++i) {
      if (t_.variables[i].name == name) return static_cast<int>(i);
    }
    throw std::logic_error("undeclared template variable: " + name);
  }

  Term term(const std::string& text) const {
    if (text == "TOP" || text == "BOT") return Term::constant(Sort::Concept, text);
    if (text == "=") return Term::constant(Sort::Operator, text);
    if (text.front() == '{') return Term::nominal_of(var(text.substr(1, text.size() - 2)));
    if (text.starts_with("w(")) {
      auto parts = split_top(std::string_view(text).substr(2, text.size() - 3), ',');
      return Term::witness(var(parts.at(0)), var(parts.at(1)));
    }
    return Term::variable(var(text));
  }

  AtomPattern pattern(const std::string& text) const {
    auto open = text.find('(');
    AtomPattern p;
    p.predicate = predicate_named(text.substr(0, open));
    auto inner = std::string_view(text).substr(open + 1, text.size() - open - 2);
    for (const auto& arg : split_top(inner, ',')) p.args.push_back(term(arg));
    if (p.args.size() != arity(p.predicate)) {
      throw std::logic_error("template arity mismatch: " + text);
    }
    return p;
  }

  ClauseTemplate t_;
};

struct RuleRow {
  const char* id;
  const char* vars;
  const char* rule;
};

// Completion rules over typed variables. ninst(x,a) is written inst(x,{a}).
constexpr RuleRow kRules[] = {
    {"F1", "c:C", "-> sub(c,c)"},
    {"F2", "c:C", "-> sub(c,TOP)"},
    {"F3", "c:C d:C e:C", "sub(c,d), sub(d,e) -> sub(c,e)"},
    {"F4", "c:C d1:C d2:C e:C", "sub(c,d1), sub(c,d2), int(d1,d2,e) -> sub(c,e)"},
    {"F5", "c:C d:C r:R e:C", "sub(c,d), rsup(d,r,e) -> rsup(c,r,e)"},
    {"F6", "c:C r:R d:C e:C f:C", "rsup(c,r,d), sub(d,e), rsub(e,r,f) -> sub(c,f)"},
    {"F7", "c:C r:R d:C", "rsup(c,r,d), sub(d,BOT) -> sub(c,BOT)"},
    {"F8", "c:C r:R d:C s:R", "rsup(c,r,d), psub(r,s) -> rsup(c,s,d)"},
    {"F9", "c:C r1:R d:C r2:R e:C r:R",
     "rsup(c,r1,d), rsup(d,r2,e), pcom(r1,r2,r) -> rsup(c,r,e)"},
    {"F10", "c:C a:I d:C r:R", "subNom(c,a), subNom(d,a), rsup(c,r,d) -> sub(c,d)"},
    {"F11", "c:C a:I d:C b:I r:R", "subNom(c,a), subNom(d,a), rsup({b},r,d) -> sub(c,d)"},
    {"F12", "c:C d:C f:F o:O v:V", "sub(c,d), rsupEx(d,f,o,v) -> rsupEx(c,f,o,v)"},
    {"F13", "c:C f:F o1:O v1:V o2:O v2:V d:C",
     "rsupEx(c,f,o1,v1), rsubEx(f,o2,v2,d), eval(o1,v1,o2,v2) -> sub(c,d)"},
    {"F14", "x:I a:C b:C", "inst(x,a), sub(a,b) -> inst(x,b)"},
    {"F15", "x:I a1:C a2:C b:C", "inst(x,a1), inst(x,a2), int(a1,a2,b) -> inst(x,b)"},
    {"F16", "x:I r:R y:I a:C b:C", "rinst(x,r,y), inst(y,a), rsub(a,r,b) -> inst(x,b)"},
    {"F17", "x:I r:R y:I s:R", "rinst(x,r,y), psub(r,s) -> rinst(x,s,y)"},
    {"F18", "x:I r1:R y:I r2:R z:I r3:R",
     "rinst(x,r1,y), rinst(y,r2,z), pcom(r1,r2,r3) -> rinst(x,r3,z)"},
    {"F19", "x:I a:I b:C", "inst(x,{a}), inst(x,b) -> inst(a,b)"},
    {"F20", "x:I a:I b:C", "inst(x,{a}), inst(a,b) -> inst(x,b)"},
    {"F21", "x:I a:I z:I r:R", "inst(x,{a}), rinst(z,r,x) -> rinst(z,r,a)"},
    {"F22", "a:C x:I b:C", "sub(TOP,a), inst(x,b) -> inst(x,a)"},
    {"F23", "x:I a:C r:R b:C", "inst(x,a), rsup(a,r,b) -> rinst(x,r,w(r,b))"},
    {"F24", "x:I a:C r:R b:C", "inst(x,a), rsup(a,r,b) -> inst(w(r,b),b)"},
    {"F25", "f:F o:O v:V c:C a:I u:V",
     "rsubEx(f,o,v,c), rinst(a,f,u), eval(=,u,o,v) -> inst(a,c)"},
    {"F26", "a:I c:C f:F v:V", "inst(a,c), rsupEx(c,f,=,v) -> rinst(a,f,v)"},
    {"F27", "a:I c1:C c2:C f:F v:V",
     "inst(a,c1), inst(a,c2), intEx(c1,c2,f,=,v) -> rinst(a,f,v)"},
    {"COH", "c:C", "sub(c,BOT), c != BOT -> FALSE"},
    {"CON", "x:I", "inst(x,BOT) -> FALSE"},
    {"NOMSUB", "c:C a:I", "subNom(c,a) -> sub(c,{a})"},
};

}  // namespace

std::string format_template(const ClauseTemplate& t) {
  auto fmt_term = [&](const Term& term) -> std::string {
    switch (term.kind) {
      case Term::Kind::Var:
        return t.variables[static_cast<std::size_t>(term.var)].name;
      case Term::Kind::Const:
        return term.text;
      case Term::Kind::NominalOf:
        return "{" + t.variables[static_cast<std::size_t>(term.var)].name + "}";
      case Term::Kind::Witness:
        return "w(" + t.variables[static_cast<std::size_t>(term.var)].name + "," +
               t.variables[static_cast<std::size_t>(term.var2)].name + ")";
    }
    return "?";
  };
  auto fmt_pattern = [&](const AtomPattern& p) {
    std::string s(to_string(p.predicate));
    s += '(';
    for (std::size_t i = 0; i < p.args.size(); ++i) {
      if (i) s += ',';
      s += fmt_term(p.args[i]);
    }
    return s + ')';
  };
  std::string out = t.id + ": ";
  bool first = true;
  for (const auto& p : t.body) {
    if (!first) out += " & ";
    out += fmt_pattern(p);
    first = false;
  }
  for (const auto& [v, term] : t.distinct) {
    if (!first) out += " & ";
    out += t.variables[static_cast<std::size_t>(v)].name + " != " + fmt_term(term);
    first = false;
  }
  out += first ? "-> " : " -> ";
  out += t.head ? fmt_pattern(*t.head) : std::string("FALSE");
  return out;
}

std::vector<ClauseTemplate> rule_templates(const Signature& sig) {
  std::vector<ClauseTemplate> out;
  TemplateBuilder builder;
  for (const auto& row : kRules) out.push_back(builder.build(row.id, row.vars, row.rule));

  auto fact = [](std::string id, AtomPattern head) {
    ClauseTemplate t;
    t.id = std::move(id);
    t.head = std::move(head);
    return t;
  };
  std::vector<std::string> individuals(sig.individuals.begin(), sig.individuals.end());
  for (const auto& a : individuals) {
    out.push_back(fact("NOM[" + a + "]", {Predicate::Inst,
                               {Term::constant(Sort::Individual, a),
                                Term::constant(Sort::Concept, "{" + a + "}")}}));
  }
  for (std::size_t i = 0; i < individuals.size(); ++i) {
    for (std::size_t j = i + 1; j < individuals.size(); ++j) {
      out.push_back(fact("UNA[" + individuals[i] + "," + individuals[j] + "]", {Predicate::Int,
                                 {Term::constant(Sort::Concept, "{" + individuals[i] + "}"),
                                  Term::constant(Sort::Concept, "{" + individuals[j] + "}"),
                                  Term::constant(Sort::Concept, "BOT")}}));
    }
  }
  return out;
}

}  // namespace mel
