#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "indexcode/indexcode.hpp"

namespace ic = indexcode;
using json = nlohmann::ordered_json;

namespace {

struct Globals {
  unsigned threads = 0;
  bool json = false;
};

ic::Instance resolve_instance(const std::string& arg) {
  if (arg == "I1'") return ic::i1_prime();
  if (ic::catalog_has(arg)) return ic::catalog_get(arg).instance;
  ic::Instance inst = ic::load_instance_file(arg);
  if (inst.name().empty()) inst.set_name(arg);
  return inst;
}

// Catalog entry whose instance equals `inst`, if any.
std::optional<ic::CatalogEntry> catalog_match(const ic::Instance& inst) {
  for (const auto& name : ic::catalog_names()) {
    auto entry = ic::catalog_get(name);
    if (entry.instance == inst) return entry;
  }
  return std::nullopt;
}

json set_json(const ic::UserSet& s) { return json(s); }

int instance_show(const Globals& g, const std::string& arg) {
  const ic::Instance inst = resolve_instance(arg);
  if (g.json) {
    json out = json::parse(ic::to_json(inst).dump());
    out["B"] = json::array();
    for (int i = 1; i <= inst.m(); ++i) out["B"].push_back(set_json(inst.interfering(i)));
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  std::cout << "instance " << (inst.name().empty() ? arg : inst.name()) << ": m = " << inst.m() << "\n";
  for (int i = 1; i <= inst.m(); ++i) {
    std::cout << "  user " << i << ": A = " << ic::format_set(inst.side_info(i))
              << "  B = " << ic::format_set(inst.interfering(i)) << "\n";
  }
  return 0;
}

int instance_validate(const Globals& g, const std::string& file) {
  const ic::Instance inst = ic::load_instance_file(file);
  if (g.json) {
    std::cout << json{{"valid", true}, {"m", inst.m()}, {"name", inst.name()}}.dump() << "\n";
  } else {
    std::cout << "valid: " << inst.m() << " users\n";
  }
  return 0;
}

int instance_compose(const std::string& mode, const std::string& a, const std::string& b, const std::string& out) {
  const ic::Instance ia = resolve_instance(a);
  const ic::Instance ib = resolve_instance(b);
  ic::Instance c = mode == "noway" ? ic::compose_noway(ia, ib) : ic::compose_twoway(ia, ib);
  c.set_name(ia.name() + (mode == "noway" ? " noway " : " twoway ") + ib.name());
  ic::save_instance_file(c, out);
  std::cout << "wrote " << out << " (" << c.m() << " users)\n";
  return 0;
}

int bound_mais(const Globals& g, const std::string& arg) {
  const ic::Instance inst = resolve_instance(arg);
  try {
    const ic::MaisResult r = ic::mais(ic::SideInfoGraph(inst));
    if (g.json) {
      std::cout << json{{"mais", r.value}, {"witness", r.witness}, {"nodes", r.nodes}}.dump() << "\n";
    } else {
      std::cout << "mais " << r.value << "\nwitness " << ic::format_set(r.witness) << "\nnodes " << r.nodes << "\n";
    }
    return 0;
  } catch (const ic::BudgetExceeded& e) {
    std::cerr << "mais: " << e.what() << "; best lower bound " << e.best_value() << " witness "
              << ic::format_set(e.best_witness()) << "\n";
    return 1;
  }
}

ic::Matrix load_matrix(const std::string& arg) {
  if (arg == "I1-binary") return ic::i1_binary_matrix();
  std::ifstream in(arg);
  if (!in) throw ic::ParseError("cannot open matrix file '" + arg + "'");
  return ic::parse_matrix(in);
}

int code_verify_linear(const Globals& g, const std::string& inst_arg, const std::string& matrix_arg, int t) {
  const ic::Instance inst = resolve_instance(inst_arg);
  const ic::LinearCode code(load_matrix(matrix_arg), t, inst.m());
  const ic::LinearReport rep = ic::verify_linear(inst, code);
  if (g.json) {
    json users = json::array();
    for (const auto& u : rep.users) {
      users.push_back({{"user", u.user},
                       {"pass", u.pass},
                       {"rank_with_user", u.rank_with_user},
                       {"rank_interference", u.rank_interference}});
    }
    std::cout << json{{"decodable", rep.decodable}, {"rate", rep.rate.str()}, {"rank", rep.rank}, {"users", users}}.dump(2)
              << "\n";
  } else {
    for (const auto& u : rep.users) {
      std::cout << "user " << u.user << ": " << (u.pass ? "pass" : "FAIL") << "  rank H_{i,B} = " << u.rank_with_user
                << ", rank H_B = " << u.rank_interference << "\n";
    }
    std::cout << (rep.decodable ? "decodable" : "not decodable") << "; rate " << rep.rate.str() << "; rank "
              << rep.rank << "\n";
  }
  return rep.decodable ? 0 : 1;
}

std::string vec_str(const std::vector<ic::Symbol>& v) {
  std::string s;
  for (auto x : v) s += std::to_string(x);
  return s;
}

int code_verify_nonlinear(const Globals& g, const std::string& inst_arg, const std::string& code_arg,
                          const std::string& mode, std::uint64_t samples, std::uint64_t seed) {
  const ic::Instance inst = resolve_instance(inst_arg);
  const ic::GeneralCode code = ic::is_builtin_code(code_arg) ? ic::builtin_code(code_arg) : ic::load_truth_table(code_arg);
  ic::VerificationReport rep;
  if (mode == "confusability") {
    if (samples) throw ic::Error("confusability mode is exhaustive only; drop --samples");
    rep = ic::verify_confusability(inst, code, g.threads);
  } else {
    ic::DecoderCheckOptions o;
    o.samples = samples;
    o.seed = seed;
    o.threads = g.threads;
    rep = ic::verify_decoders(inst, code, o);
  }
  if (g.json) {
    json users = json::array();
    for (const auto& u : rep.users) {
      json j{{"user", u.user}, {"pass", u.pass}};
      if (!u.pass) {
        j["witness"] = vec_str(u.witness_a);
        if (!u.witness_b.empty()) j["witness_pair"] = vec_str(u.witness_b);
        if (!u.note.empty()) j["note"] = u.note;
      }
      users.push_back(std::move(j));
    }
    json out{{"code", code.name},
             {"mode", ic::to_string(rep.mode)},
             {"sampled", rep.sampled},
             {"messages_checked", rep.messages_checked},
             {"rate", code.rate().str()},
             {"pass", rep.all_pass()},
             {"users", users}};
    if (rep.sampled) out["seed"] = rep.seed;
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& u : rep.users) {
      std::cout << "user " << u.user << ": " << (u.pass ? "pass" : "FAIL");
      if (!u.pass) {
        std::cout << "  x = " << vec_str(u.witness_a);
        if (!u.witness_b.empty()) std::cout << "  x' = " << vec_str(u.witness_b);
        if (!u.note.empty()) std::cout << "  (" << u.note << ")";
      }
      std::cout << "\n";
    }
    std::cout << ic::to_string(rep.mode) << (rep.sampled ? " (sampled, seed " + std::to_string(rep.seed) + ")" : " (exhaustive)")
              << ": " << rep.messages_checked << " messages; rate " << code.rate().str() << "; "
              << (rep.all_pass() ? "all users pass" : "some users FAIL") << "\n";
  }
  return rep.all_pass() ? 0 : 1;
}

std::vector<int> parse_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ic::ParseError("bad list element '" + item + "'");
    }
  }
  return out;
}

json outcome_json(const ic::SearchOutcome& o) {
  json out{{"verdict", ic::to_string(o.verdict)},
           {"nodes", o.nodes},
           {"prunes",
            {{"subset_rank", o.prunes.subset_rank},
             {"minimal_cycle", o.prunes.minimal_cycle},
             {"independent_set", o.prunes.independent_set}}},
           {"basis", o.basis},
           {"column_order", o.column_order}};
  if (o.matrix) {
    json rows = json::array();
    for (std::size_t i = 0; i < o.matrix->rows(); ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < o.matrix->cols(); ++j) row.push_back(o.matrix->at(i, j).value);
      rows.push_back(std::move(row));
    }
    out["matrix"] = std::move(rows);
  }
  return out;
}

int minrank_search(const Globals& g, const std::string& inst_arg, int q, int rate, const std::string& basis,
                   const std::string& order, std::optional<std::uint64_t> budget) {
  ic::SearchProblem p{resolve_instance(inst_arg), ic::field_make(q), rate};
  p.basis = parse_list(basis);
  p.threads = g.threads;
  p.budget = budget ? *budget : ic::budget_from_env();
  if (order == "hint") {
    p.order = ic::SearchOrder::hint;
    if (auto entry = catalog_match(p.instance)) p.order_hint = entry->order_hint;
  }
  if (p.basis.empty()) {
    if (auto entry = catalog_match(p.instance)) {
      if (static_cast<int>(entry->default_basis.size()) <= rate) p.basis = entry->default_basis;
    }
  }
  const ic::SearchOutcome o = ic::scalar_code_search(p);
  json full{{"instance", inst_arg}, {"q", q}, {"rate", rate}, {"budget", p.budget}};
  full.update(outcome_json(o));
  std::cout << full.dump(g.json ? 2 : -1) << "\n";
  return o.verdict == ic::Verdict::budget_exceeded ? 3 : 0;
}

int minrank_value(const Globals& g, const std::string& inst_arg, int q, int r_max, std::optional<std::uint64_t> budget) {
  const ic::Instance inst = resolve_instance(inst_arg);
  const ic::MinrankResult r = ic::scalar_minrank(inst, ic::field_make(q), r_max, budget ? *budget : ic::budget_from_env(),
                                                 g.threads);
  json runs = json::array();
  for (const auto& o : r.runs) runs.push_back(outcome_json(o));
  json out{{"instance", inst_arg}, {"q", q}, {"minrank", r.str()}, {"mais", r.lower_bound}, {"runs", runs}};
  if (g.json) {
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "scalar minrank over GF(" << q << "): " << r.str() << " (mais " << r.lower_bound << ")\n";
  }
  return 0;
}

int repro(const Globals& g, std::vector<std::string> ids, bool timing, std::uint64_t samples) {
  if (ids.empty()) ids = ic::repro_claim_ids();
  for (const auto& id : ids) {
    const auto known = ic::repro_claim_ids();
    if (std::find(known.begin(), known.end(), id) == known.end()) {
      throw ic::Error("unknown claim id '" + id + "'");
    }
  }
  ic::ReproOptions o;
  o.threads = g.threads;
  o.search_budget = ic::budget_from_env();
  o.i4_samples = samples;
  const ic::ReproReport rep = ic::repro_run(ids, o);
  if (g.json) {
    std::cout << rep.to_json(timing).dump(2) << "\n";
  } else {
    std::cout << rep.table(timing);
  }
  return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Index coding toolkit: instances, bounds, code verification and scalar code search"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--threads", g.threads, "Worker threads (0 = hardware)");
  app.add_flag("--json", g.json, "Machine-readable output");

  int status = 0;

  auto* instance = app.add_subcommand("instance", "Show, validate and compose instances");
  instance->require_subcommand(1);
  std::string show_spec;
  auto* show = instance->add_subcommand("show", "Print the side-information and interfering sets");
  show->add_option("instance", show_spec, "Catalog name (I1..I4) or instance file")->required();
  show->callback([&] { status = instance_show(g, show_spec); });
  std::string validate_file;
  auto* validate = instance->add_subcommand("validate", "Check an instance file");
  validate->add_option("file", validate_file)->required();
  validate->callback([&] { status = instance_validate(g, validate_file); });
  std::string compose_mode = "noway";
  std::string compose_a;
  std::string compose_b;
  std::string compose_out;
  auto* compose = instance->add_subcommand("compose", "Join two instances");
  compose->add_option("--mode", compose_mode)->check(CLI::IsMember({"noway", "twoway"}));
  compose->add_option("a", compose_a)->required();
  compose->add_option("b", compose_b)->required();
  compose->add_option("-o,--output", compose_out)->required();
  compose->callback([&] { status = instance_compose(compose_mode, compose_a, compose_b, compose_out); });

  auto* bound = app.add_subcommand("bound", "Lower bounds");
  bound->require_subcommand(1);
  std::string mais_spec;
  auto* mais = bound->add_subcommand("mais", "Maximum acyclic induced subgraph");
  mais->add_option("instance", mais_spec)->required();
  mais->callback([&] { status = bound_mais(g, mais_spec); });

  auto* code = app.add_subcommand("code", "Verify codes");
  code->require_subcommand(1);
  std::string lin_inst;
  std::string lin_matrix;
  int lin_t = 1;
  auto* lin = code->add_subcommand("verify-linear", "Rank test for a linear encoder matrix");
  lin->add_option("--instance", lin_inst)->required();
  lin->add_option("--matrix", lin_matrix, "Matrix file or I1-binary")->required();
  lin->add_option("--t", lin_t)->check(CLI::PositiveNumber);
  lin->callback([&] { status = code_verify_linear(g, lin_inst, lin_matrix, lin_t); });
  std::string nl_inst;
  std::string nl_code;
  std::string nl_mode = "confusability";
  std::uint64_t nl_samples = 0;
  std::uint64_t nl_seed = ic::kDefaultSampleSeed;
  auto* nl = code->add_subcommand("verify-nonlinear", "Check a general code by confusability or by its decoders");
  nl->add_option("--instance", nl_inst)->required();
  nl->add_option("--code", nl_code, "Builtin code name or truth-table file")->required();
  nl->add_option("--mode", nl_mode)->check(CLI::IsMember({"confusability", "decoders"}));
  nl->add_option("--samples", nl_samples, "Sample count (decoders mode; 0 = exhaustive)");
  nl->add_option("--seed", nl_seed);
  nl->callback([&] { status = code_verify_nonlinear(g, nl_inst, nl_code, nl_mode, nl_samples, nl_seed); });

  auto* minrank = app.add_subcommand("minrank", "Scalar linear code search");
  minrank->require_subcommand(1);
  std::string s_inst;
  int s_q = 2;
  int s_rate = 1;
  std::string s_basis;
  std::string s_order = "default";
  std::optional<std::uint64_t> s_budget;
  auto* search = minrank->add_subcommand("search", "Decide whether a scalar code of the given length exists");
  search->add_option("--instance", s_inst)->required();
  search->add_option("--q", s_q)->required();
  search->add_option("--rate", s_rate)->required();
  search->add_option("--basis", s_basis, "Comma-separated acyclic set to pin");
  search->add_option("--order", s_order)->check(CLI::IsMember({"hint", "default"}));
  search->add_option("--budget", s_budget, "Node budget (default INDEXCODE_BUDGET or 1e9)");
  search->callback([&] { status = minrank_search(g, s_inst, s_q, s_rate, s_basis, s_order, s_budget); });
  std::string v_inst;
  int v_q = 2;
  int v_rmax = 1;
  std::optional<std::uint64_t> v_budget;
  auto* value = minrank->add_subcommand("value", "Smallest scalar code length up to --rmax");
  value->add_option("--instance", v_inst)->required();
  value->add_option("--q", v_q)->required();
  value->add_option("--rmax", v_rmax)->required();
  value->add_option("--budget", v_budget);
  value->callback([&] { status = minrank_value(g, v_inst, v_q, v_rmax, v_budget); });

  std::vector<std::string> claim_ids;
  bool timing = false;
  std::uint64_t repro_samples = 10'000'000;
  auto* rep = app.add_subcommand("repro", "Run the reproduction suite (all claims, or the listed ids)");
  rep->add_option("claims", claim_ids);
  rep->add_flag("--timing", timing, "Include run times (output no longer byte-stable)");
  rep->add_option("--samples", repro_samples, "Sample count for the I4 decoder check");
  rep->callback([&] { status = repro(g, claim_ids, timing, repro_samples); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const ic::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return status;
}
