#include "mel/report.hpp"

#include <cstdio>

#include "mel/errors.hpp"
#include "mel/text_format.hpp"

namespace mel {

namespace {

std::vector<std::string> statements(const std::vector<NormalStatement>& list) {
  std::vector<std::string> out;
  out.reserve(list.size());
  for (const auto& s : list) out.push_back(format_statement(s));
  return out;
}

std::string weighted(const Reasoner& r, std::size_t i) {
  return format_weighted(r.kb().uncertain[i]);
}

std::string fixed_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void list_text(std::string& out, const char* title, const std::vector<std::string>& items) {
  out += title;
  out += ":\n";
  for (const auto& s : items) out += "  " + s + "\n";
}

}  // namespace

SolveReport solve_report(const Reasoner& reasoner, const MapOptions& options, bool explain) {
  MapResult result = map_inference(reasoner, options);
  SolveReport r;
  r.objective = result.objective;
  for (std::size_t i : result.selected) r.selected.push_back(weighted(reasoner, i));
  for (std::size_t i : result.rejected) r.rejected.push_back(weighted(reasoner, i));
  r.classified = statements(result.classified);
  r.iterations = result.iterations;
  r.coherent = result.coherent;
  if (explain) {
    std::vector<ExplainEntry> entries;
    std::vector<bool> selected(reasoner.kb().uncertain.size(), false);
    for (std::size_t i : result.selected) selected[i] = true;
    for (std::size_t i = 0; i < selected.size(); ++i) {
      ExplainEntry e{weighted(reasoner, i), selected[i], std::nullopt};
      MapOptions forced = options;
      forced.forced[i] = !selected[i];
      try {
        e.delta = result.objective - map_inference(reasoner, forced).objective;
      } catch (const IncoherentError&) {
      }
      entries.push_back(std::move(e));
    }
    r.explain = std::move(entries);
  }
  return r;
}

ClassifyReport classify_report(const Reasoner& reasoner) {
  const TruthAssignment& closure = reasoner.deterministic_closure();
  return {statements(reasoner.classified(closure)), reasoner.grounder().coherent(closure)};
}

OracleReport oracle_report(const Reasoner& reasoner, std::size_t max_uncertain) {
  WorldDistribution dist = brute_force_distribution(reasoner, max_uncertain);
  OracleReport r;
  for (std::size_t w = 0; w < dist.worlds.size(); ++w) {
    WorldEntry e;
    for (std::size_t i : dist.worlds[w].entailed) e.entailed.push_back(weighted(reasoner, i));
    e.score = dist.worlds[w].score;
    ExpRatio p = dist.probability(w);
    e.probability = p.to_string();
    e.probability_value = p.value();
    r.worlds.push_back(std::move(e));
  }
  for (std::size_t i = 0; i < dist.partition.exponents.size(); ++i) {
    if (i) r.partition += " + ";
    r.partition += "exp(" + to_decimal_string(dist.partition.exponents[i]) + ")";
  }
  r.max_score = dist.max_score();
  return r;
}

ProbabilityReport probability_report(const Reasoner& reasoner,
                                     const std::vector<NormalStatement>& query,
                                     std::size_t max_uncertain) {
  WorldDistribution dist = brute_force_distribution(reasoner, max_uncertain);
  ExpRatio p = probability_of(reasoner, dist, query);
  return {statements(query), p.to_string(), p.value()};
}

Json to_json(const SolveReport& r) {
  Json j;
  j["objective"] = to_decimal_string(r.objective);
  j["selected"] = r.selected;
  j["rejected"] = r.rejected;
  j["classified"] = r.classified;
  j["iterations"] = r.iterations;
  j["coherent"] = r.coherent;
  if (r.explain) {
    Json list = Json::array();
    for (const auto& e : *r.explain) {
      Json item;
      item["statement"] = e.statement;
      item["status"] = e.selected ? "selected" : "rejected";
      item["delta"] = e.delta ? Json(to_decimal_string(*e.delta)) : Json(nullptr);
      list.push_back(std::move(item));
    }
    j["explain"] = std::move(list);
  }
  return j;
}

std::string to_text(const SolveReport& r) {
  std::string out = "objective: " + to_decimal_string(r.objective) + "\n";
  list_text(out, "selected", r.selected);
  list_text(out, "rejected", r.rejected);
  list_text(out, "classified", r.classified);
  out += "iterations: " + std::to_string(r.iterations) + "\n";
  out += std::string("coherent: ") + (r.coherent ? "true" : "false") + "\n";
  if (r.explain) {
    out += "explain:\n";
    for (const auto& e : *r.explain) {
      out += "  " + e.statement + "\n    status: " + (e.selected ? "selected" : "rejected") +
             "\n    delta: " + (e.delta ? to_decimal_string(*e.delta) : "null") + "\n";
    }
  }
  return out;
}

Json to_json(const ClassifyReport& r) {
  Json j;
  j["classified"] = r.classified;
  j["coherent"] = r.coherent;
  return j;
}

std::string to_text(const ClassifyReport& r) {
  std::string out;
  list_text(out, "classified", r.classified);
  out += std::string("coherent: ") + (r.coherent ? "true" : "false") + "\n";
  return out;
}

Json to_json(const OracleReport& r) {
  Json j;
  Json worlds = Json::array();
  for (const auto& w : r.worlds) {
    Json item;
    item["entailed"] = w.entailed;
    item["score"] = to_decimal_string(w.score);
    item["probability"] = w.probability;
    item["probability_value"] = fixed_double(w.probability_value);
    worlds.push_back(std::move(item));
  }
  j["worlds"] = std::move(worlds);
  j["partition"] = r.partition;
  j["max_score"] = to_decimal_string(r.max_score);
  return j;
}

std::string to_text(const OracleReport& r) {
  std::string out = "worlds:\n";
  for (std::size_t i = 0; i < r.worlds.size(); ++i) {
    const auto& w = r.worlds[i];
    out += "  world " + std::to_string(i) + ":\n";
    out += "    entailed:\n";
    for (const auto& s : w.entailed) out += "      " + s + "\n";
    out += "    score: " + to_decimal_string(w.score) + "\n";
    out += "    probability: " + w.probability + "\n";
    out += "    probability_value: " + fixed_double(w.probability_value) + "\n";
  }
  out += "partition: " + r.partition + "\n";
  out += "max_score: " + to_decimal_string(r.max_score) + "\n";
  return out;
}

Json to_json(const ProbabilityReport& r) {
  Json j;
  j["query"] = r.query;
  j["probability"] = r.probability;
  j["value"] = fixed_double(r.value);
  return j;
}

std::string to_text(const ProbabilityReport& r) {
  std::string out;
  list_text(out, "query", r.query);
  out += "probability: " + r.probability + "\n";
  out += "value: " + fixed_double(r.value) + "\n";
  return out;
}

}  // namespace mel
