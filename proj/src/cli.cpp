#include "mel/cli.hpp"

#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "mel/errors.hpp"
#include "mel/report.hpp"
#include "mel/text_format.hpp"

namespace mel {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Options {
  std::string kb_path;
  std::string query_path;
  std::string format = "text";
  std::size_t max_worlds = kDefaultMaxWorlds;
  long long seed = 0;
  std::string domain = "real";
  bool explain = false;
};

template <typename Report>
void emit(const Report& r, const Options& o, std::ostream& out) {
  if (o.format == "json") {
    out << to_json(r).dump(2) << "\n";
  } else {
    out << to_text(r);
  }
}

int check(const Options& o, std::ostream& out) {
  Normalization n = parse_and_normalize(read_file(o.kb_path));
  auto diags = validate(n.kb);
  Json j;
  j["deterministic"] = n.kb.deterministic.size();
  j["uncertain"] = n.kb.uncertain.size();
  Json fresh = Json::object();
  for (const auto& [name, meaning] : n.fresh_names) fresh[name] = meaning;
  j["fresh_names"] = fresh;
  Json list = Json::array();
  for (const auto& d : diags) {
    const char* part = d.part == KbPart::Signature       ? "signature"
                       : d.part == KbPart::Deterministic ? "deterministic"
                                                         : "uncertain";
    list.push_back({{"part", part}, {"index", d.index}, {"reason", d.reason}});
  }
  j["diagnostics"] = list;
  if (o.format == "json") {
    out << j.dump(2) << "\n";
  } else {
    out << "deterministic: " << n.kb.deterministic.size() << "\n";
    out << "uncertain: " << n.kb.uncertain.size() << "\n";
    out << "fresh_names:\n";
    for (const auto& [name, meaning] : n.fresh_names) out << "  " << name << " = " << meaning << "\n";
    out << "diagnostics:\n";
    for (const auto& item : list) {
      out << "  " << item["part"].get<std::string>() << " " << item["index"].get<std::size_t>()
          << ": " << item["reason"].get<std::string>() << "\n";
    }
  }
  return diags.empty() ? kExitOk : kExitInvalid;
}

int dispatch(const std::string& command, const Options& o, std::ostream& out) {
  if (command == "check") return check(o, out);
  EvalDomain domain = o.domain == "integer" ? EvalDomain::Integer : EvalDomain::Real;
  KnowledgeBase kb = parse_kb(read_file(o.kb_path));
  Reasoner reasoner(kb, domain);
  if (command == "solve") {
    MapOptions mo;
    mo.domain = domain;
    emit(solve_report(reasoner, mo, o.explain), o, out);
  } else if (command == "classify") {
    emit(classify_report(reasoner), o, out);
  } else if (command == "oracle") {
    emit(oracle_report(reasoner, o.max_worlds), o, out);
  } else if (command == "prob") {
    auto query = parse_query(read_file(o.query_path));
    emit(probability_report(reasoner, query, o.max_worlds), o, out);
  } else if (command == "dump-ilp") {
    std::string lp = to_lp_text(first_iteration_program(reasoner));
    if (o.format == "json") {
      out << Json{{"lp", lp}}.dump(2) << "\n";
    } else {
      out << lp;
    }
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Probabilistic EL++ reasoner: MAP inference, classification and world enumeration",
               "mel"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--format", o.format, "Report format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.add_option("--max-worlds", o.max_worlds, "Largest uncertain part the oracle enumerates")
      ->capture_default_str();
  app.add_option("--seed", o.seed, "Reserved; inference is deterministic");
  app.add_option("--domain", o.domain, "Numeric domain of datatype comparisons")
      ->check(CLI::IsMember({"real", "integer"}))
      ->capture_default_str();
  app.add_flag("--explain", o.explain, "Report the objective change of flipping each choice");

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"solve", "MAP inference"},
      {"classify", "Saturate the deterministic part"},
      {"prob", "Probability of the statements in --query"},
      {"oracle", "Enumerate every coherent world"},
      {"dump-ilp", "First cutting-plane iteration as an LP text"},
      {"check", "Validate and normalize"},
  };
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->fallthrough();
    sub->add_option("kb", o.kb_path, "Knowledge base file")->required();
    if (std::string(s.name) == "prob") {
      sub->add_option("--query", o.query_path, "Query file")->required();
    }
  }

  std::vector<std::string> argv_storage;
  argv_storage.push_back("mel");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  std::string command = app.get_subcommands().front()->get_name();
  try {
    return dispatch(command, o, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const IncoherentError& e) {
    err << "error: " << e.what() << "\n";
    for (const auto& s : e.conflict()) err << "  " << s << "\n";
    return kExitIncoherent;
  } catch (const CapExceededError& e) {
    err << "error: " << e.what() << "\n";
    return kExitCapExceeded;
  }
}

}  // namespace mel
