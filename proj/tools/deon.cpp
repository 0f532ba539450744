// deon — compile, analyze, enforce and verify regular deontologies.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "deon/deon.hpp"

using nlohmann::json;

namespace {

constexpr const char* kDefaultOuterSpec =
    "percepts: ok err\n"
    "actions: noop move grab\n"
    "good: ([noop move] _p)*\n";

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) deon::fail(deon::Errc::format_error, "cannot read '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

deon::Deontology load_spec(const std::string& path) {
  deon::Deontology d = deon::compile(deon::parse_spec(slurp(path)));
  for (const std::string& w : d.warnings) std::cerr << "warning: " << w << "\n";
  return d;
}

std::string symbol_name(const deon::Deontology& d, deon::Symbol s) { return d.alphabet.name(s); }

// ---------------------------------------------------------------------------
// report rendering
// ---------------------------------------------------------------------------

json report_json(const deon::Deontology& d, const deon::AnalysisReport& r) {
  json out;
  out["triviality"] = deon::triviality_name(r.triviality);
  out["accepts_empty"] = r.accepts_empty;
  out["weak_viable"] = r.weak_viable;
  out["weak_witness"] = nullptr;
  if (r.weak_witness)
    out["weak_witness"] = {{"state", r.weak_witness->state},
                           {"percept", symbol_name(d, r.weak_witness->percept)}};
  out["strong_viable"] = r.strong_viable;
  out["strong_witness"] = r.strong_witness ? json(*r.strong_witness) : json(nullptr);
  out["consequence_independent"] = r.consequence_independent;
  out["ci_witness"] = nullptr;
  if (r.ci_witness)
    out["ci_witness"] = {{"state", r.ci_witness->state},
                         {"action", symbol_name(d, r.ci_witness->action)},
                         {"percept_a", symbol_name(d, r.ci_witness->percept_a)},
                         {"percept_b", symbol_name(d, r.ci_witness->percept_b)}};
  out["governable_region_size"] = r.governable_region_size;
  out["governable_from_start"] = r.governable_from_start;
  return out;
}

void print_report(const deon::Deontology& d, const deon::AnalysisReport& r) {
  std::cout << "states: " << d.dfa.num_states << " (hash " << deon::spec_hash(d) << ")\n";
  std::cout << "triviality: " << deon::triviality_name(r.triviality) << "\n";
  std::cout << "accepts_empty: " << (r.accepts_empty ? "yes" : "no") << "\n";
  std::cout << "weak_viable: " << (r.weak_viable ? "yes" : "no");
  if (r.weak_witness)
    std::cout << "  (state " << r.weak_witness->state << ", percept "
              << symbol_name(d, r.weak_witness->percept) << " has no saving action)";
  std::cout << "\n";
  std::cout << "strong_viable: " << (r.strong_viable ? "yes" : "no");
  if (r.strong_witness)
    std::cout << "  (no action is safe for every percept at state " << *r.strong_witness << ")";
  std::cout << "\n";
  std::cout << "consequence_independent: " << (r.consequence_independent ? "yes" : "no");
  if (r.ci_witness)
    std::cout << "  (state " << r.ci_witness->state << ", action "
              << symbol_name(d, r.ci_witness->action) << ": "
              << symbol_name(d, r.ci_witness->percept_a) << " vs "
              << symbol_name(d, r.ci_witness->percept_b) << ")";
  std::cout << "\n";
  std::cout << "governable_region_size: " << r.governable_region_size << "\n";
  std::cout << "governable_from_start: " << (r.governable_from_start ? "yes" : "no") << "\n";
}

json verdict_json(const deon::Deontology& d, const deon::ProposalOutcome& o) {
  json v;
  v["proposed"] = symbol_name(d, o.proposed);
  switch (o.kind) {
    case deon::ProposalKind::approved:
      v["verdict"] = "approved";
      v["emitted"] = symbol_name(d, *o.emitted);
      break;
    case deon::ProposalKind::substituted:
      v["verdict"] = "substituted";
      v["emitted"] = symbol_name(d, *o.emitted);
      break;
    case deon::ProposalKind::refused:
      v["verdict"] = "refused";
      v["reason"] = deon::refuse_reason_name(*o.reason);
      break;
  }
  return v;
}

json record_json(const deon::Deontology& d, const deon::RunRecord& r) {
  json out;
  out["spec_identity"] = r.spec_identity;
  out["spec_hash"] = r.spec_hash;
  out["policy_name"] = r.policy_name;
  out["policy_seed"] = r.policy_seed ? json(*r.policy_seed) : json(nullptr);
  out["env_name"] = r.env_name;
  out["env_seed"] = r.env_seed ? json(*r.env_seed) : json(nullptr);
  out["governed"] = r.governed;
  out["cycles"] = r.cycles;
  out["emitted_history"] = deon::render_history(r.history);
  out["verdicts"] = json::array();
  for (const auto& v : r.verdicts) out["verdicts"].push_back(verdict_json(d, v));
  out["prefix_classes"] = json::array();
  for (auto c : r.prefix_classes) out["prefix_classes"].push_back(deon::history_class_name(c));
  out["first_violation_cycle"] =
      r.first_violation_cycle ? json(*r.first_violation_cycle) : json(nullptr);
  return out;
}

void print_record(const deon::RunRecord& r) {
  std::cout << "spec: " << (r.spec_identity.empty() ? "<inline>" : r.spec_identity) << " (hash "
            << r.spec_hash << ")\n";
  std::cout << "policy: " << r.policy_name;
  if (r.policy_seed) std::cout << " seed=" << *r.policy_seed;
  std::cout << "\nenv: " << r.env_name;
  if (r.env_seed) std::cout << " seed=" << *r.env_seed;
  std::cout << "\ngoverned: " << (r.governed ? "yes" : "no") << "\n";
  std::cout << "cycles: " << r.history.cycles() << " of " << r.cycles << " requested\n";
  int approved = 0, substituted = 0, refused = 0;
  for (const auto& v : r.verdicts) {
    if (v.kind == deon::ProposalKind::approved) ++approved;
    if (v.kind == deon::ProposalKind::substituted) ++substituted;
    if (v.kind == deon::ProposalKind::refused) ++refused;
  }
  if (r.governed)
    std::cout << "verdicts: approved=" << approved << " substituted=" << substituted
              << " refused=" << refused << "\n";
  if (r.first_violation_cycle)
    std::cout << "first_violation_cycle: " << *r.first_violation_cycle << "\n";
  else
    std::cout << "first_violation_cycle: none\n";
  // run-length compression keeps long runs readable
  std::cout << "prefix_classes:";
  std::size_t i = 0;
  while (i < r.prefix_classes.size()) {
    std::size_t j = i;
    while (j < r.prefix_classes.size() && r.prefix_classes[j] == r.prefix_classes[i]) ++j;
    std::cout << ' ' << deon::history_class_name(r.prefix_classes[i]) << "x" << (j - i);
    i = j;
  }
  std::cout << "\nhistory: " << deon::render_history(r.history) << "\n";
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

int run_check(const std::string& spec_path, bool as_json) {
  deon::Deontology d = load_spec(spec_path);
  deon::AnalysisReport r = deon::analyze(d);
  if (as_json)
    std::cout << report_json(d, r).dump(2) << "\n";
  else
    print_report(d, r);
  return 0;
}

int run_member(const std::string& spec_path, const std::vector<std::string>& words) {
  deon::Deontology d = load_spec(spec_path);
  std::string text;
  for (const auto& w : words) {
    if (!text.empty()) text += ' ';
    text += w;
  }
  deon::HistoryClass cls = deon::classify_history(d, deon::parse_history_text(text, d.alphabet));
  std::cout << deon::history_class_name(cls) << "\n";
  switch (cls) {
    case deon::HistoryClass::good: return 0;
    case deon::HistoryClass::amendable: return 3;
    case deon::HistoryClass::dead: return 4;
  }
  return 2;
}

int run_verify(const std::string& spec_path, const std::string& fst_path) {
  deon::Deontology d = load_spec(spec_path);
  deon::PolicyTransducer t = deon::parse_transducer(slurp(fst_path), d.alphabet);
  deon::Verdict v = deon::verify_policy(d, t);
  if (!v) {
    std::cout << "Verified\n";
    return 0;
  }
  std::cout << "Counterexample\n";
  std::cout << "history: \"" << deon::render_history(v->history) << "\"\n";
  std::cout << "action: " << symbol_name(d, v->action) << "\n";
  std::cout << "percept: " << symbol_name(d, v->percept) << "\n";
  std::cout << "violation_cycle: " << v->violation_cycle << "\n";
  deon::History extended = v->history.extended(v->action, v->percept);
  std::cout << "replay: member <spec> \"" << deon::render_history(extended) << "\"\n";
  return 1;
}

std::unique_ptr<deon::Policy> make_policy(const deon::Deontology& d, const std::string& name,
                                          std::uint64_t seed) {
  if (name == "null") return deon::null_policy(d.alphabet, d.alphabet.name(d.alphabet.action(0)));
  if (name == "random") return deon::random_policy(d.alphabet, seed);
  if (name == "good") return deon::good_policy(d);
  if (name == "bad") return deon::bad_policy(d);
  if (name.size() > 4 && name.substr(name.size() - 4) == ".fst")
    return deon::transducer_policy(deon::parse_transducer(slurp(name), d.alphabet));
  deon::fail(deon::Errc::format_error,
             "unknown policy '" + name + "' (null, random, good, bad, or a .fst file)");
}

std::unique_ptr<deon::Environment> make_env(const deon::Deontology& d, const std::string& name,
                                            std::uint64_t seed) {
  if (name == "random") return deon::random_env(d.alphabet, seed);
  if (name == "adversarial") return deon::adversarial_env(d);
  if (name.rfind("scripted:", 0) == 0) {
    std::vector<deon::Symbol> script;
    std::string rest = name.substr(9);
    std::istringstream in(rest);
    std::string item;
    while (std::getline(in, item, ','))
      if (!item.empty()) script.push_back(d.alphabet.require(item));
    return deon::scripted_env(d.alphabet, script);
  }
  deon::fail(deon::Errc::format_error,
             "unknown environment '" + name + "' (random, adversarial, scripted:<p1,p2,...>)");
}

int run_simulate(const std::string& spec_path, const std::string& policy_name,
                 const std::string& env_name, int cycles, std::uint64_t seed, bool govern,
                 bool foresight, bool as_json) {
  deon::Deontology d = load_spec(spec_path);
  auto policy = make_policy(d, policy_name, seed);
  auto env = make_env(d, env_name, seed);
  deon::GovernorConfig cfg;
  cfg.foresight = foresight;
  deon::RunRecord record = deon::simulate(d, *policy, *env, cycles, govern, cfg, spec_path);
  if (as_json)
    std::cout << record_json(d, record).dump(2) << "\n";
  else
    print_record(record);
  return 0;
}

int run_govern(const std::string& spec_path, bool stdio, const std::string& listen) {
  deon::Deontology d = load_spec(spec_path);
  deon::GovernorConfig cfg;  // strict
  deon::open_session(d, cfg);  // fail fast before serving
  if (stdio) {
    deon::serve_stream(d, cfg, std::cin, std::cout);
    return 0;
  }
  std::string host = "127.0.0.1";
  int port = 0;
  auto colon = listen.rfind(':');
  if (colon == std::string::npos)
    deon::fail(deon::Errc::format_error, "listen address must be host:port or :port");
  if (colon > 0) host = listen.substr(0, colon);
  port = std::stoi(listen.substr(colon + 1));
  deon::TcpServer server(d, cfg, host, port);
  std::cerr << "deon: governing " << spec_path << " on " << host << ":" << server.port() << "\n";
  server.run();
  return 0;
}

int run_demo(const std::string& outer_path, int violate_at, int cycles, bool as_json) {
  deon::Deontology outer = outer_path.empty()
                               ? deon::compile(deon::parse_spec(kDefaultOuterSpec))
                               : load_spec(outer_path);
  deon::Deontology inner = deon::compile(deon::parse_spec(deon::homunculus_inner_spec_text()));
  deon::SafeActionTable table = deon::build_safe_action_table(outer);
  deon::Symbol first_percept = outer.alphabet.percept(0);

  // walk the compliant trajectory, then pick the violating action against the
  // state actually reached at the violation cycle
  deon::IntentionMapping mapping(inner.alphabet, outer.alphabet);
  mapping.set_default("B", outer.alphabet.name(outer.alphabet.action(0)));
  int q = outer.dfa.start;
  for (int k = 1; k <= cycles; ++k) {
    deon::Symbol chosen{deon::SymbolKind::action, -1};
    if (k == violate_at) {
      for (int ai = 0; ai < outer.alphabet.num_actions() && chosen.index < 0; ++ai)
        if (!outer.dfa.accepting[static_cast<std::size_t>(
                outer.step_cycle(q, outer.alphabet.action(ai), first_percept))])
          chosen = outer.alphabet.action(ai);
      if (chosen.index < 0)
        deon::fail(deon::Errc::format_error,
                   "outer deontology admits no violating action at cycle " + std::to_string(k));
    } else if (outer.dfa.accepting[static_cast<std::size_t>(q)] && !table.strong(q).empty()) {
      chosen = table.strong(q).front();
    } else if (k < violate_at || violate_at <= 0) {
      deon::fail(deon::Errc::format_error,
                 "outer deontology is not strongly viable along the compliant route");
    } else {
      // already past the violation; the outer history stays non-Good
      chosen = outer.alphabet.action(0);
    }
    mapping.set_at("G", k, outer.alphabet.name(chosen));
    q = outer.step_cycle(q, chosen, first_percept);
  }

  deon::HomunculusReport report = deon::homunculus_demo(outer, mapping, cycles);
  if (as_json) {
    json out;
    out["inner_history"] = deon::render_history(report.inner_history);
    out["outer_history"] = deon::render_history(report.outer_history);
    out["inner_compliance"] = report.inner_compliance;
    out["outer_compliance_cycle"] =
        report.outer_compliance_cycle ? json(*report.outer_compliance_cycle) : json(nullptr);
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "inner_history: " << deon::render_history(report.inner_history) << "\n";
    std::cout << "outer_history: " << deon::render_history(report.outer_history) << "\n";
    std::cout << "inner_compliance: " << report.inner_compliance << "\n";
    if (report.outer_compliance_cycle)
      std::cout << "outer_compliance_cycle: " << *report.outer_compliance_cycle << "\n";
    else
      std::cout << "outer_compliance_cycle: none\n";
    std::cout << "\nThe inner agent is provably compliant with its own deontology while the\n"
                 "outer behaviour it supposedly controls "
              << (report.outer_compliance_cycle ? "violates the outer deontology."
                                                : "happens to comply.")
              << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regular deontologies: compile, analyze, govern, verify"};
  app.require_subcommand(1);

  std::string spec_path, fst_path, policy_name, env_name, listen, outer_path;
  std::vector<std::string> history_words;
  bool as_json = false, govern_flag = false, foresight = false, stdio = false;
  int cycles = 0, violate_at = 3, demo_cycles = 10;
  std::uint64_t seed = 0;

  CLI::App* check = app.add_subcommand("check", "analyze a spec and print the report");
  check->add_option("spec", spec_path, "path to a .deon spec")->required();
  check->add_flag("--json", as_json, "machine-readable output");

  CLI::App* member = app.add_subcommand("member", "classify a history (GOOD/AMENDABLE/DEAD)");
  member->add_option("spec", spec_path)->required();
  member->add_option("history", history_words, "history text, e.g. \"noop ok\"");

  CLI::App* verify = app.add_subcommand("verify", "verify a policy transducer");
  verify->add_option("spec", spec_path)->required();
  verify->add_option("fst", fst_path, "path to a .fst transducer")->required();

  CLI::App* simulate = app.add_subcommand("simulate", "run the agent cycle loop");
  simulate->add_option("spec", spec_path)->required();
  simulate->add_option("--policy", policy_name, "null|random|good|bad|<file.fst>")->required();
  simulate->add_option("--env", env_name, "random|adversarial|scripted:<p1,p2,...>")->required();
  simulate->add_option("--cycles", cycles, "number of cycles")->required();
  simulate->add_option("--seed", seed, "seed for policy and environment streams");
  simulate->add_flag("--govern", govern_flag, "filter actions through the governor (strict)");
  simulate->add_flag("--foresight", foresight, "restrict the governor to the governable region");
  simulate->add_flag("--json", as_json);

  CLI::App* govern = app.add_subcommand("govern", "serve the governor wire protocol");
  govern->add_option("spec", spec_path)->required();
  govern->add_flag("--stdio", stdio, "speak the protocol on stdin/stdout");
  govern->add_option("--listen", listen, "listen on host:port (IPv4)");

  CLI::App* demo = app.add_subcommand("demo-homunculus",
                                      "provably good intentions, arbitrary outer behaviour");
  demo->add_option("--outer", outer_path, "outer deontology (.deon); built-in default");
  demo->add_option("--violate-at", violate_at, "outer violation cycle, 0 for none");
  demo->add_option("--cycles", demo_cycles, "cycles to run");
  demo->add_flag("--json", as_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (check->parsed()) return run_check(spec_path, as_json);
    if (member->parsed()) return run_member(spec_path, history_words);
    if (verify->parsed()) return run_verify(spec_path, fst_path);
    if (simulate->parsed())
      return run_simulate(spec_path, policy_name, env_name, cycles, seed, govern_flag, foresight,
                          as_json);
    if (govern->parsed()) {
      if (stdio == !listen.empty())
        deon::fail(deon::Errc::format_error, "choose exactly one of --stdio or --listen");
      return run_govern(spec_path, stdio, listen);
    }
    if (demo->parsed()) return run_demo(outer_path, violate_at, demo_cycles, as_json);
  } catch (const deon::Error& e) {
    std::cerr << "deon: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "deon: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
