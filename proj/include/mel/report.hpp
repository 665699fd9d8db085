#pragma once

// Command reports with matching text and JSON renderings.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "mel/map_engine.hpp"

namespace mel {

using Json = nlohmann::ordered_json;

struct ExplainEntry {
  std::string statement;
  bool selected = false;
  // Objective lost by forcing the opposite choice; nullopt when that choice
  // admits no coherent world.
  std::optional<Rational> delta;
};

struct SolveReport {
  Rational objective{0};
  std::vector<std::string> selected;
  std::vector<std::string> rejected;
  std::vector<std::string> classified;
  std::size_t iterations = 0;
  bool coherent = true;
  std::optional<std::vector<ExplainEntry>> explain;
};

struct ClassifyReport {
  std::vector<std::string> classified;
  bool coherent = true;
};

struct WorldEntry {
  std::vector<std::string> entailed;
  Rational score{0};
  std::string probability;
  double probability_value = 0;
};

struct OracleReport {
  std::vector<WorldEntry> worlds;
  std::string partition;
  Rational max_score{0};
};

struct ProbabilityReport {
  std::vector<std::string> query;
  std::string probability;
  double value = 0;
};

SolveReport solve_report(const Reasoner& reasoner, const MapOptions& options, bool explain);
ClassifyReport classify_report(const Reasoner& reasoner);
OracleReport oracle_report(const Reasoner& reasoner, std::size_t max_uncertain);
ProbabilityReport probability_report(const Reasoner& reasoner,
                                     const std::vector<NormalStatement>& query,
                                     std::size_t max_uncertain);

Json to_json(const SolveReport& r);
Json to_json(const ClassifyReport& r);
Json to_json(const OracleReport& r);
Json to_json(const ProbabilityReport& r);

std::string to_text(const SolveReport& r);
std::string to_text(const ClassifyReport& r);
std::string to_text(const OracleReport& r);
std::string to_text(const ProbabilityReport& r);

}  // namespace mel
