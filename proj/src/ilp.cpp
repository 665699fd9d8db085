#include "mel/ilp.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <numeric>

#include "mel/errors.hpp"

namespace mel {

bool satisfies(const LinearConstraint& c, const std::vector<std::uint8_t>& values) {
  std::int64_t lhs = 0;
  for (const auto& [v, a] : c.terms) lhs += a * values.at(v);
  return c.relation == Relation::GreaterEqual ? lhs >= c.bound : lhs <= c.bound;
}

Rational objective_value(const IlpProgram& p, const std::vector<std::uint8_t>& values) {
  Rational sum{0};
  for (const auto& [v, w] : p.objective) {
    if (values.at(v)) sum += w;
  }
  return sum;
}

namespace {

constexpr std::int64_t kNoBest = std::numeric_limits<std::int64_t>::min();

// Constraints as sum(a_i x_i) >= b with an integer-scaled objective.
struct Normalized {
  std::size_t n = 0;
  std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> terms;
  std::vector<std::int64_t> bound;
  std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> occurs;  // var -> (constraint, a)
  std::vector<std::int64_t> cost;
  std::int64_t scale = 1;
};

Normalized normalize(const IlpProgram& p, const std::vector<bool>* active = nullptr) {
  Normalized m;
  m.n = p.variables.size();
  m.occurs.resize(m.n);
  m.cost.assign(m.n, 0);
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    if (active && !(*active)[i]) continue;
    const auto& c = p.constraints[i];
    std::int64_t sign = c.relation == Relation::GreaterEqual ? 1 : -1;
    std::vector<std::pair<std::size_t, std::int64_t>> merged;
    for (const auto& [v, a] : c.terms) {
      if (v >= m.n) throw ValidationError("constraint references undeclared variable");
      merged.emplace_back(v, sign * a);
    }
    std::sort(merged.begin(), merged.end());
    std::vector<std::pair<std::size_t, std::int64_t>> terms;
    for (const auto& [v, a] : merged) {
      if (!terms.empty() && terms.back().first == v) {
        terms.back().second += a;
      } else {
        terms.emplace_back(v, a);
      }
    }
    std::erase_if(terms, [](const auto& t) { return t.second == 0; });
    std::size_t idx = m.terms.size();
    for (const auto& [v, a] : terms) m.occurs[v].emplace_back(idx, a);
    m.terms.push_back(std::move(terms));
    m.bound.push_back(sign * c.bound);
  }
  for (const auto& [v, w] : p.objective) {
    if (v >= m.n) throw ValidationError("objective references undeclared variable");
    m.scale = std::lcm(m.scale, w.denominator());
  }
  for (const auto& [v, w] : p.objective) m.cost[v] += w.numerator() * (m.scale / w.denominator());
  return m;
}

class Search {
 public:
  explicit Search(const Normalized& m) : m_(m), value_(m.n, -1), max_(m.terms.size(), 0) {
    for (std::size_t c = 0; c < m.terms.size(); ++c) {
      for (const auto& [v, a] : m.terms[c]) max_[c] += std::max<std::int64_t>(a, 0);
    }
    for (std::size_t v = 0; v < m.n; ++v) optimistic_ += std::max<std::int64_t>(m.cost[v], 0);
    order_.resize(m.n);
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return m.cost[a] > m.cost[b]; });
  }

  // Root propagation over every constraint. False if infeasible.
  bool init() {
    for (std::size_t c = 0; c < m_.terms.size(); ++c) {
      if (!check(c)) return false;
    }
    return propagate();
  }

  bool fix(std::size_t v, int val) {
    if (value_[v] >= 0) return value_[v] == val;
    set(v, val);
    return propagate();
  }

  // Best objective strictly above `floor`; fills `best` with the assignment.
  std::int64_t optimize(std::int64_t floor, std::vector<std::uint8_t>& best) {
    best_value_ = floor;
    best_ = &best;
    stop_at_first_ = false;
    found_ = false;
    dfs(0);
    return found_ ? best_value_ : kNoBest;
  }

  // Any completion with objective >= target.
  bool reach(std::int64_t target, std::vector<std::uint8_t>& out) {
    best_value_ = target - 1;
    best_ = &out;
    stop_at_first_ = true;
    found_ = false;
    dfs(0);
    return found_;
  }

  std::size_t mark() const { return trail_.size(); }
  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      std::size_t v = trail_.back();
      trail_.pop_back();
      int val = value_[v];
      for (const auto& [c, a] : m_.occurs[v]) {
        if (a > 0 && val == 0) max_[c] += a;
        if (a < 0 && val == 1) max_[c] -= a;
      }
      if (m_.cost[v] > 0 && val == 0) optimistic_ += m_.cost[v];
      if (m_.cost[v] < 0 && val == 1) optimistic_ -= m_.cost[v];
      value_[v] = -1;
    }
  }

 private:
  void set(std::size_t v, int val) {
    value_[v] = static_cast<std::int8_t>(val);
    trail_.push_back(v);
    for (const auto& [c, a] : m_.occurs[v]) {
      if (a > 0 && val == 0) max_[c] -= a;
      if (a < 0 && val == 1) max_[c] += a;
    }
    if (m_.cost[v] > 0 && val == 0) optimistic_ -= m_.cost[v];
    if (m_.cost[v] < 0 && val == 1) optimistic_ += m_.cost[v];
    queue_.push_back(v);
  }

  // Forces every unassigned variable whose worse value would break `c`.
  bool check(std::size_t c) {
    std::int64_t slack = max_[c] - m_.bound[c];
    if (slack < 0) return false;
    for (const auto& [u, a] : m_.terms[c]) {
      if (value_[u] < 0 && std::abs(a) > slack) set(u, a > 0 ? 1 : 0);
    }
    return true;
  }

  bool propagate() {
    while (!queue_.empty()) {
      std::size_t v = queue_.back();
      queue_.pop_back();
      for (const auto& [c, a] : m_.occurs[v]) {
        if (!check(c)) {
          queue_.clear();
          return false;
        }
      }
    }
    return true;
  }

  void dfs(std::size_t pos) {
    if (found_ && stop_at_first_) return;
    if (optimistic_ <= best_value_) return;
    while (pos < order_.size() && value_[order_[pos]] >= 0) ++pos;
    if (pos == order_.size()) {
      best_value_ = optimistic_;
      found_ = true;
      best_->assign(value_.begin(), value_.end());
      return;
    }
    std::size_t v = order_[pos];
    int first = m_.cost[v] > 0 ? 1 : 0;
    for (int val : {first, 1 - first}) {
      std::size_t mk = mark();
      set(v, val);
      if (propagate()) dfs(pos + 1);
      undo(mk);
      if (found_ && stop_at_first_) return;
    }
  }

  const Normalized& m_;
  std::vector<std::int8_t> value_;
  std::vector<std::int64_t> max_;
  std::int64_t optimistic_ = 0;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> trail_;
  std::vector<std::size_t> queue_;
  std::int64_t best_value_ = kNoBest;
  std::vector<std::uint8_t>* best_ = nullptr;
  bool stop_at_first_ = false;
  bool found_ = false;
};

bool feasible_subset(const IlpProgram& p, const std::vector<bool>& active) {
  Normalized m = normalize(p, &active);
  std::fill(m.cost.begin(), m.cost.end(), 0);
  Search s(m);
  if (!s.init()) return false;
  std::vector<std::uint8_t> out;
  return s.reach(0, out);
}

[[noreturn]] void throw_infeasible(const IlpProgram& p) {
  std::vector<bool> active(p.constraints.size(), true);
  for (std::size_t i = 0; i < active.size(); ++i) {
    active[i] = false;
    if (feasible_subset(p, active)) active[i] = true;
  }
  std::vector<std::size_t> core;
  for (std::size_t i = 0; i < active.size(); ++i) {
    if (active[i]) core.push_back(i);
  }
  throw InfeasibleError("integer program is infeasible", std::move(core));
}

}  // namespace

bool feasible(const IlpProgram& program) {
  return feasible_subset(program, std::vector<bool>(program.constraints.size(), true));
}

IlpSolution solve(const IlpProgram& program) {
  Normalized m = normalize(program);
  Search s(m);
  if (!s.init()) throw_infeasible(program);
  std::size_t root = s.mark();

  std::vector<std::uint8_t> witness;
  std::int64_t best = s.optimize(kNoBest, witness);
  if (best == kNoBest) throw_infeasible(program);
  s.undo(root);

  // Canonical pass: fix variables to 0 in declaration order whenever an
  // optimal completion still exists.
  std::vector<std::uint8_t> candidate;
  for (std::size_t v = 0; v < m.n; ++v) {
    if (witness[v] == 0) {
      s.fix(v, 0);
      continue;
    }
    std::size_t mk = s.mark();
    bool ok = s.fix(v, 0) && s.reach(best, candidate);
    s.undo(mk);
    if (ok) {
      witness = candidate;
      s.fix(v, 0);
    } else {
      s.fix(v, 1);
    }
  }
  IlpSolution out;
  out.values = std::move(witness);
  out.objective = objective_value(program, out.values);
  return out;
}

namespace {

std::string term_text(std::int64_t a, const std::string& name, bool first) {
  std::string s;
  if (a < 0) {
    s = first ? "-" : "- ";
  } else if (!first) {
    s = "+ ";
  }
  std::int64_t mag = a < 0 ? -a : a;
  if (mag != 1) s += std::to_string(mag) + " ";
  return s + name;
}

}  // namespace

std::string to_lp_text(const IlpProgram& p) {
  std::string out = "OBJECTIVE\n  maximize:";
  if (p.objective.empty()) out += " 0";
  bool first = true;
  for (const auto& [v, w] : p.objective) {
    out += ' ';
    if (w < 0) {
      out += first ? "-" : "- ";
    } else if (!first) {
      out += "+ ";
    }
    out += to_decimal_string(w < 0 ? -w : w) + " " + p.variables[v];
    first = false;
  }
  out += "\nCONSTRAINTS\n";
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    const auto& c = p.constraints[i];
    out += "  c" + std::to_string(i) + ":";
    if (c.terms.empty()) out += " 0";
    bool lead = true;
    for (const auto& [v, a] : c.terms) {
      out += " " + term_text(a, p.variables[v], lead);
      lead = false;
    }
    out += c.relation == Relation::GreaterEqual ? " >= " : " <= ";
    out += std::to_string(c.bound) + "\n";
  }
  out += "BINARY\n";
  for (const auto& v : p.variables) out += "  " + v + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Clause translation

namespace {

std::string mangle_value(const std::string& decimal) {
  std::string s;
  for (char ch : decimal) {
    if (ch == '-') {
      s += 'm';
    } else if (ch == '.') {
      s += 'p';
    } else if (ch == '/') {
      s += 'd';
    } else {
      s += ch;
    }
  }
  return s;
}

std::string mangle_name(const std::string& text) {
  std::string s;
  for (char ch : text) {
    s += std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' ? ch : '_';
  }
  return s;
}

std::string op_code(CompareOp op) {
  switch (op) {
    case CompareOp::Less:
      return "lt";
    case CompareOp::LessEqual:
      return "le";
    case CompareOp::Greater:
      return "gt";
    case CompareOp::GreaterEqual:
      return "ge";
    case CompareOp::Equal:
      return "eq";
  }
  return "op";
}

}  // namespace

std::string VariableRegistry::atom_name(const GroundAtom& a) const {
  const Universe& u = *universe_;
  std::string name = "x_" + std::string(to_string(a.predicate));
  for (std::size_t i = 0; i < arity(a.predicate); ++i) {
    ConstId c = a.args[i];
    name += '_';
    switch (u.sort(c)) {
      case Sort::Operator:
        name += op_code(u.op_of(c));
        break;
      case Sort::Value:
        name += mangle_value(u.name(c));
        break;
      case Sort::Concept:
        name += u.is_nominal(c) ? "nom_" + mangle_name(u.name(c)) : mangle_name(u.name(c));
        break;
      default:
        name += mangle_name(u.name(c));
        break;
    }
  }
  return name;
}

std::size_t VariableRegistry::atom(const GroundAtom& a) {
  if (auto it = index_.find(a); it != index_.end()) return it->second;
  std::string base = atom_name(a);
  std::string name = base;
  auto& count = used_names_[base];
  if (count > 0) name += "_" + std::to_string(count + 1);
  ++count;
  std::size_t v = program_.add_variable(std::move(name));
  index_.emplace(a, v);
  atoms_.push_back(a);
  return v;
}

std::optional<std::size_t> VariableRegistry::find(const GroundAtom& a) const {
  auto it = index_.find(a);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t VariableRegistry::indicator(const Rational& weight) {
  std::size_t v = program_.add_variable("z_" + std::to_string(indicators_++));
  atoms_.push_back(std::nullopt);
  program_.objective.emplace_back(v, weight);
  return v;
}

std::vector<LinearConstraint> translate_clause(const ViolatedClause& g, VariableRegistry& vars) {
  if (g.weight.is_finite() && g.weight.value().numerator() == 0) return {};
  std::int64_t satisfied = 0;  // positive literals on fixed-true atoms
  std::vector<std::size_t> pos, neg;
  for (const auto& a : g.positive) {
    if (vars.fixed_true(a)) {
      ++satisfied;
    } else {
      pos.push_back(vars.atom(a));
    }
  }
  for (const auto& a : g.negative) {
    if (!vars.fixed_true(a)) neg.push_back(vars.atom(a));
  }
  LinearConstraint c;
  for (std::size_t v : pos) c.terms.emplace_back(v, 1);
  for (std::size_t v : neg) c.terms.emplace_back(v, -1);
  auto n_neg = static_cast<std::int64_t>(neg.size());

  if (g.weight.is_infinite()) {
    if (satisfied > 0) return {};
    if (c.terms.empty()) {
      throw IncoherentError("hard clause " + g.template_id + " has no satisfiable literal", {});
    }
    c.bound = 1 - n_neg;
    return {c};
  }
  std::size_t z = vars.indicator(g.weight.value());
  if (g.weight.value() > 0) {
    // literals >= z
    c.terms.emplace_back(z, -1);
    c.bound = -n_neg - satisfied;
  } else {
    // literals <= n z
    std::int64_t n = static_cast<std::int64_t>(pos.size() + neg.size()) + satisfied;
    if (n == 0) return {};
    c.terms.emplace_back(z, -n);
    c.relation = Relation::LessEqual;
    c.bound = -n_neg - satisfied;
  }
  return {c};
}

}  // namespace mel
