#include "mel/text_format.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <set>

#include "mel/errors.hpp"
#include "mel/universe.hpp"

namespace mel {

namespace {

enum class Tok {
  Name,
  Number,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Op,
  Top,
  Bot,
  And,
  Some,
  SubClassOf,
  EquivalentTo,
  RoleChain,
  SubRoleOf,
  Declare,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t column = 0;
};

const std::map<std::string, Tok, std::less<>>& keywords() {
  static const std::map<std::string, Tok, std::less<>> k = {
      {"TOP", Tok::Top},
      {"BOT", Tok::Bot},
      {"AND", Tok::And},
      {"SOME", Tok::Some},
      {"SUBCLASSOF", Tok::SubClassOf},
      {"EQUIVALENTTO", Tok::EquivalentTo},
      {"ROLECHAIN", Tok::RoleChain},
      {"SUBROLEOF", Tok::SubRoleOf},
      {"DECLARE", Tok::Declare},
  };
  return k;
}

bool name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> tokenize(std::string_view line, std::size_t line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    std::size_t col = i + 1;
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    auto single = [&](Tok k) {
      out.push_back({k, std::string(1, c), col});
      ++i;
    };
    switch (c) {
      case '(':
        single(Tok::LParen);
        continue;
      case ')':
        single(Tok::RParen);
        continue;
      case '{':
        single(Tok::LBrace);
        continue;
      case '}':
        single(Tok::RBrace);
        continue;
      case ',':
        single(Tok::Comma);
        continue;
      case '=':
        single(Tok::Op);
        continue;
      case '<':
      case '>':
        if (i + 1 < line.size() && line[i + 1] == '=') {
          out.push_back({Tok::Op, std::string(line.substr(i, 2)), col});
          i += 2;
        } else {
          single(Tok::Op);
        }
        continue;
      default:
        break;
    }
    bool sign = (c == '-' || c == '+') && i + 1 < line.size() &&
                std::isdigit(static_cast<unsigned char>(line[i + 1]));
    if (sign || name_char(c)) {
      std::size_t j = i + (sign ? 1 : 0);
      while (j < line.size() && (name_char(line[j]) || line[j] == '.')) ++j;
      std::string word(line.substr(i, j - i));
      if (parse_decimal(word)) {
        out.push_back({Tok::Number, word, col});
      } else if (!sign && word.find('.') == std::string::npos) {
        auto k = keywords().find(word);
        out.push_back({k == keywords().end() ? Tok::Name : k->second, word, col});
      } else {
        throw ParseError(line_no, col, "malformed number '" + word + "'");
      }
      i = j;
      continue;
    }
    throw ParseError(line_no, col, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", line.size() + 1});
  return out;
}

std::string_view sort_word(Sort s) {
  switch (s) {
    case Sort::Concept:
      return "concept";
    case Sort::Role:
      return "role";
    case Sort::Feature:
      return "feature";
    default:
      return "individual";
  }
}

std::string with_article(std::string_view word) {
  bool vowel = !word.empty() && std::string_view("aeiou").find(word.front()) != std::string_view::npos;
  return (vowel ? "an " : "a ") + std::string(word);
}

class LineParser {
 public:
  LineParser(std::vector<Token> tokens, std::size_t line_no, Signature& sig)
      : toks_(std::move(tokens)), line_(line_no), sig_(sig) {}

  // nullopt for blank lines and declarations.
  std::optional<WeightedAxiom> parse() {
    if (peek().kind == Tok::End) return std::nullopt;
    if (peek().kind == Tok::Declare) {
      declaration();
      return std::nullopt;
    }
    Weight weight = Weight::infinite();
    if (peek().kind == Tok::Number) weight = *parse_decimal(next().text);
    GeneralAxiom axiom = statement();
    expect(Tok::End, "end of line");
    return WeightedAxiom{std::move(axiom), weight};
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError(line_, t.column, msg);
  }
  const Token& expect(Tok kind, const std::string& what) {
    if (peek().kind != kind) {
      const Token& t = peek();
      fail(t, "expected " + what + (t.kind == Tok::End ? "" : ", found '" + t.text + "'"));
    }
    return next();
  }

  std::string name(Sort sort) {
    const Token& t = expect(Tok::Name, std::string("a ") + std::string(sort_word(sort)) + " name");
    declare(t, sort);
    return t.text;
  }

  void declare(const Token& t, Sort sort) {
    std::set<std::string>* sets[] = {&sig_.concepts, &sig_.roles, &sig_.features,
                                     &sig_.individuals};
    Sort sorts[] = {Sort::Concept, Sort::Role, Sort::Feature, Sort::Individual};
    for (std::size_t i = 0; i < 4; ++i) {
      if (sorts[i] != sort && sets[i]->contains(t.text)) {
        fail(t, "'" + t.text + "' is " + with_article(sort_word(sorts[i])) + ", used as " +
                    with_article(sort_word(sort)));
      }
    }
    for (std::size_t i = 0; i < 4; ++i) {
      if (sorts[i] == sort) sets[i]->insert(t.text);
    }
  }

  void declaration() {
    next();
    const Token& kind = expect(Tok::Name, "CONCEPT, ROLE, FEATURE or INDIVIDUAL");
    Sort sort;
    if (kind.text == "CONCEPT") {
      sort = Sort::Concept;
    } else if (kind.text == "ROLE") {
      sort = Sort::Role;
    } else if (kind.text == "FEATURE") {
      sort = Sort::Feature;
    } else if (kind.text == "INDIVIDUAL") {
      sort = Sort::Individual;
    } else {
      fail(kind, "unknown declaration kind '" + kind.text + "'");
    }
    name(sort);
    expect(Tok::End, "end of line");
  }

  GeneralAxiom statement() {
    if (peek().kind == Tok::RoleChain) {
      next();
      RoleChainInclusion chain;
      while (peek().kind == Tok::Name) chain.chain.push_back(name(Sort::Role));
      if (chain.chain.empty()) fail(peek(), "expected a role name");
      expect(Tok::SubRoleOf, "SUBROLEOF");
      chain.sup = name(Sort::Role);
      return chain;
    }
    if (peek().kind == Tok::Name && peek(1).kind == Tok::SubRoleOf) {
      RoleChainInclusion chain;
      chain.chain.push_back(name(Sort::Role));
      next();
      chain.sup = name(Sort::Role);
      return chain;
    }
    if (peek().kind == Tok::Name && peek(1).kind == Tok::LParen) return assertion();
    ConceptExpr left = expr();
    if (peek().kind == Tok::LParen) {
      std::string a = individual_argument();
      return ExprAssertion{std::move(left), std::move(a)};
    }
    if (peek().kind == Tok::SubClassOf) {
      next();
      return ConceptInclusion{std::move(left), expr()};
    }
    if (peek().kind == Tok::EquivalentTo) {
      next();
      return ConceptEquivalence{std::move(left), expr()};
    }
    fail(peek(), "expected SUBCLASSOF, EQUIVALENTTO or an assertion");
  }

  std::string individual_argument() {
    expect(Tok::LParen, "'('");
    std::string a = name(Sort::Individual);
    expect(Tok::RParen, "')'");
    return a;
  }

  // NAME '(' ... ')'
  GeneralAxiom assertion() {
    const Token head = next();
    next();
    const Token& first = expect(Tok::Name, "an individual name");
    declare(first, Sort::Individual);
    if (peek().kind == Tok::RParen) {
      next();
      declare(head, Sort::Concept);
      return ExprAssertion{ConceptExpr::atomic(head.text), first.text};
    }
    expect(Tok::Comma, "',' or ')'");
    if (peek().kind == Tok::Number) {
      Rational v = *parse_decimal(next().text);
      expect(Tok::RParen, "')'");
      declare(head, Sort::Feature);
      return FeatureAssertion{head.text, first.text, v};
    }
    std::string second = name(Sort::Individual);
    expect(Tok::RParen, "')'");
    declare(head, Sort::Role);
    return RoleAssertion{head.text, first.text, second};
  }

  ConceptExpr expr() {
    std::vector<ConceptExpr> conj;
    conj.push_back(existential());
    while (peek().kind == Tok::And) {
      next();
      conj.push_back(existential());
    }
    if (conj.size() == 1) return std::move(conj[0]);
    return ConceptExpr::conjunction(std::move(conj));
  }

  ConceptExpr existential() {
    if (peek().kind == Tok::Name && peek(1).kind == Tok::Some) {
      const Token head = next();
      next();
      if (peek().kind == Tok::LParen && peek(1).kind == Tok::Op) {
        next();
        CompareOp op = compare_op(next());
        expect(Tok::Comma, "','");
        const Token& v = expect(Tok::Number, "a number");
        expect(Tok::RParen, "')'");
        declare(head, Sort::Feature);
        return ConceptExpr::feature_exists(head.text, {op, *parse_decimal(v.text)});
      }
      declare(head, Sort::Role);
      return ConceptExpr::exists(head.text, existential());
    }
    return primary();
  }

  CompareOp compare_op(const Token& t) const {
    for (CompareOp o : kAllCompareOps) {
      if (to_string(o) == t.text) return o;
    }
    fail(t, "unknown operator '" + t.text + "'");
  }

  ConceptExpr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Top:
        next();
        return ConceptExpr::top();
      case Tok::Bot:
        next();
        return ConceptExpr::bottom();
      case Tok::Name:
        return ConceptExpr::atomic(name(Sort::Concept));
      case Tok::LBrace: {
        next();
        std::string a = name(Sort::Individual);
        expect(Tok::RBrace, "'}'");
        return ConceptExpr::nominal(std::move(a));
      }
      case Tok::LParen: {
        next();
        ConceptExpr e = expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      default:
        fail(t, t.kind == Tok::End ? "expected a concept" : "unexpected '" + t.text + "'");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t line_;
  Signature& sig_;
};

}  // namespace

KbDocument parse_document(std::string_view text) {
  KbDocument doc;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    LineParser p(tokenize(line, line_no), line_no, doc.signature);
    if (auto axiom = p.parse()) {
      doc.axioms.push_back(std::move(*axiom));
      doc.lines.push_back(line_no);
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  return doc;
}

Normalization parse_and_normalize(std::string_view text) {
  KbDocument doc = parse_document(text);
  return normalize(doc.axioms, doc.signature);
}

KnowledgeBase parse_kb(std::string_view text) { return parse_and_normalize(text).kb; }

std::vector<NormalStatement> parse_query(std::string_view text) {
  KbDocument doc = parse_document(text);
  std::vector<NormalStatement> out;
  for (std::size_t i = 0; i < doc.axioms.size(); ++i) {
    auto normal = as_normal_statement(doc.axioms[i].axiom);
    if (!normal) throw ParseError(doc.lines[i], 1, "query statements must be in normal form");
    out.push_back(std::move(*normal));
  }
  return out;
}

std::string format_axiom(const GeneralAxiom& axiom) {
  struct Visitor {
    std::string operator()(const ConceptInclusion& a) const {
      return format_expr(a.sub) + " SUBCLASSOF " + format_expr(a.sup);
    }
    std::string operator()(const ConceptEquivalence& a) const {
      return format_expr(a.left) + " EQUIVALENTTO " + format_expr(a.right);
    }
    std::string operator()(const RoleChainInclusion& a) const {
      if (a.chain.size() == 1) return a.chain[0] + " SUBROLEOF " + a.sup;
      std::string out = "ROLECHAIN";
      for (const auto& r : a.chain) out += " " + r;
      return out + " SUBROLEOF " + a.sup;
    }
    std::string operator()(const ExprAssertion& a) const {
      std::string type = format_expr(a.type);
      if (!a.type.is_name()) type = "(" + type + ")";
      return type + "(" + a.individual + ")";
    }
    std::string operator()(const RoleAssertion& a) const {
      return a.role + "(" + a.subject + ", " + a.object + ")";
    }
    std::string operator()(const FeatureAssertion& a) const {
      return a.feature + "(" + a.individual + ", " + to_decimal_string(a.value) + ")";
    }
  };
  return std::visit(Visitor{}, axiom);
}

std::string format_statement(const NormalStatement& statement) {
  return format_axiom(to_general_axiom(statement));
}

std::string format_weighted(const WeightedStatement& ws) {
  if (ws.weight.is_infinite()) return format_statement(ws.statement);
  return ws.weight.to_string() + " " + format_statement(ws.statement);
}

std::string serialize_kb(const KnowledgeBase& kb) {
  std::string out;
  Signature used;
  for (const auto* part : {&kb.deterministic, &kb.uncertain}) {
    for (const auto& ws : *part) {
      out += format_weighted(ws) + "\n";
      declare_names(ws.statement, used);
    }
  }
  auto declare_rest = [&](const std::set<std::string>& all, const std::set<std::string>& seen,
                          std::string_view kind) {
    for (const auto& n : all) {
      if (!seen.contains(n) && n != kTop && n != kBottom) {
        out += "DECLARE " + std::string(kind) + " " + n + "\n";
      }
    }
  };
  declare_rest(kb.signature.concepts, used.concepts, "CONCEPT");
  declare_rest(kb.signature.roles, used.roles, "ROLE");
  declare_rest(kb.signature.features, used.features, "FEATURE");
  declare_rest(kb.signature.individuals, used.individuals, "INDIVIDUAL");
  return out;
}

}  // namespace mel
