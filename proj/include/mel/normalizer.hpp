#pragma once

#include <map>
#include <span>
#include <string>

#include "mel/axiom.hpp"
#include "mel/kb.hpp"

namespace mel {

// Prefixes of names introduced by normalization. Counters skip any name
// already present in the signature, so user names are never captured.
inline constexpr std::string_view kFreshConceptPrefix = "_X";
inline constexpr std::string_view kFreshRolePrefix = "_U";

struct Normalization {
  KnowledgeBase kb;
  // fresh name -> rendering of the expression (or role chain) it abbreviates
  std::map<std::string, std::string> fresh_names;
};

/// Rewrites weighted general axioms into normal statements.
///
/// Axioms that are already normal pass through unchanged. Otherwise the
/// axiom's weight lands on exactly one output statement; the definitional
/// statements for fresh names are deterministic. Equivalences are split into
/// both inclusions, each carrying the full weight. Role chains longer than two
/// are binarized left to right through fresh roles.
///
/// Throws ValidationError naming the first symbol missing from `sig`.
Normalization normalize(std::span<const WeightedAxiom> axioms, const Signature& sig);

}  // namespace mel
