#pragma once

// Line-oriented knowledge-base text format.
//
//   [weight] C SUBCLASSOF D          C, D concept expressions
//   [weight] C EQUIVALENTTO D
//   [weight] R SUBROLEOF S
//   [weight] ROLECHAIN R1 R2 ... SUBROLEOF R
//   [weight] C(a)   {b}(a)   R(a, b)   F(a, 2)
//   DECLARE CONCEPT|ROLE|FEATURE|INDIVIDUAL name
//   # comment
//
// Expressions: TOP, BOT, names, {a}, X AND Y, R SOME C, F SOME (<=, 3),
// parentheses. SOME binds tighter than AND and nests to the right. A line
// without a weight is deterministic. Names are declared on first use.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mel/axiom.hpp"
#include "mel/kb.hpp"
#include "mel/normalizer.hpp"

namespace mel {

struct KbDocument {
  Signature signature;
  std::vector<WeightedAxiom> axioms;
  std::vector<std::size_t> lines;  // source line of each axiom
};

/// Throws ParseError with 1-based line and column.
KbDocument parse_document(std::string_view text);

/// Parses and normalizes.
Normalization parse_and_normalize(std::string_view text);
KnowledgeBase parse_kb(std::string_view text);

/// Statements of a query document; each must already be in normal form.
std::vector<NormalStatement> parse_query(std::string_view text);

std::string format_axiom(const GeneralAxiom& axiom);
std::string format_statement(const NormalStatement& statement);
std::string format_weighted(const WeightedStatement& ws);

/// Deterministic statements, then uncertain ones, then DECLARE lines for
/// signature names no statement mentions.
std::string serialize_kb(const KnowledgeBase& kb);

}  // namespace mel
