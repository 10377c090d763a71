// Command-line front end: validate sources, print morphed theories,
// assemble and evaluate knowledge bases, run queries, check that a
// renaming preserves meaning, and export the inclusion graph.

#include <filesystem>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kpc/engine.hpp"
#include "kpc/library.hpp"
#include "kpc/oracle.hpp"
#include "kpc/stdlib.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace kpc;

namespace {

struct Options {
  std::string stdlib_root;
  std::vector<std::string> check_files;
  std::string morphism;
  bool eliminate_dead = false;
  std::string manifest;
  std::string goal;
  std::string facts_file;
  int trials = 20;
  unsigned seed = 1;
  bool as_json = false;
  std::vector<std::string> graph_manifests;
};

Manifest manifest_for(const Corpus& corpus, const std::string& arg) {
  if (fs::is_regular_file(arg)) return parse_manifest(read_text_file(arg), arg);
  auto it = corpus.manifests.find(arg);
  if (it == corpus.manifests.end())
    throw Error(ErrKind::FileNotFound, "no manifest file or bundled kb named '" + arg + "'");
  return it->second;
}

ResolvedMorphism resolve(const Corpus& corpus, const std::string& name) {
  if (!corpus.library.has_morphism(name))
    throw Error(ErrKind::UnknownMorphism, "unknown morphism '" + name + "'");
  const MorphismSource& m = corpus.library.morphism(name);
  FlatPattern src = flatten_pattern(m.source_pattern, corpus.library);
  auto issues = validate_morphism(m, src, Signature{});
  if (!issues.empty()) throw Error(issues.front().kind, issues.front().message);
  return complete_morphism(m, src);
}

void check_one(const Corpus& corpus, const std::string& path) {
  std::string ext = fs::path(path).extension().string();
  std::string text = read_text_file(path);
  if (ext == ".kpat") {
    PatternHeader h = scan_pattern_header(text, path);
    Signature ambient;
    for (auto& u : h.uses)
      ambient = merge_signatures(ambient, flatten_pattern(u, corpus.library).signature);
    PatternSource p = parse_pattern(text, &ambient, path);
    Signature full = merge_signatures(ambient, p.declared_signature);
    for (auto& c : p.clauses)
      if (!check_clause_safety(c, full).empty())
        throw Error(ErrKind::UnsafeClause, "unsafe clause: " + clause_text(c), path);
  } else if (ext == ".kmor") {
    MorphismSource m = parse_morphism(text, path);
    if (!corpus.library.has_pattern(m.source_pattern))
      throw Error(ErrKind::UnknownPattern, "unknown source pattern '" + m.source_pattern + "'",
                  path);
    auto issues =
        validate_morphism(m, flatten_pattern(m.source_pattern, corpus.library), Signature{});
    if (!issues.empty()) throw Error(issues.front().kind, issues.front().message, path);
  } else if (ext == ".kman") {
    AssembledKB kb = assemble_kb(parse_manifest(text, path), corpus.library);
    for (auto& w : kb.warnings) std::cerr << "warning: " << w << "\n";
  } else if (ext == ".kfact") {
    Signature lenient = corpus.library.lenient_fact_signature();
    parse_facts(text, &lenient, path);
  } else {
    throw Error(ErrKind::FileNotFound, "unrecognized file kind '" + ext + "'", path);
  }
}

int cmd_check(const Corpus& corpus, const Options& opt) {
  int failures = 0;
  for (auto& f : opt.check_files) {
    try {
      check_one(corpus, f);
      std::cout << "ok: " << f << "\n";
    } catch (const Error& e) {
      std::cout << "fail: " << f << "\n";
      std::cerr << e.what() << "\n";
      ++failures;
    }
  }
  return failures ? 1 : 0;
}

int cmd_morph(const Corpus& corpus, const Options& opt) {
  ResolvedMorphism r = resolve(corpus, opt.morphism);
  Theory t = apply_morphism(r);
  if (opt.eliminate_dead) {
    std::set<Symbol> visible;
    for (auto& [_, s] : r.visible_image_signature()) visible.insert(s);
    t = eliminate_dead_axioms(t, visible);
  }
  FlatPattern fp;
  fp.name = r.name;
  fp.signature = t.signature;
  fp.clauses = t.clauses;
  fp.clause_origins.assign(t.clauses.size(), r.source.name);
  std::cout << render(flat_to_source(fp));
  return 0;
}

int cmd_assemble(const Corpus& corpus, const Options& opt) {
  AssembledKB kb = assemble_kb(manifest_for(corpus, opt.manifest), corpus.library);
  for (auto& w : kb.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "kb " << kb.name << "\n";
  std::cout << "rules " << kb.rules.size() << "\n";
  std::cout << "facts " << kb.facts.size() << "\n";
  if (!kb.rules.empty()) std::cout << "\n";
  for (auto& c : kb.rules) std::cout << clause_text(c) << "\n";
  if (!kb.facts.empty()) std::cout << "\n";
  for (auto& a : kb.facts) std::cout << atom_text(a) << ".\n";
  return 0;
}

int cmd_run(const Corpus& corpus, const Options& opt) {
  AssembledKB kb = assemble_kb(manifest_for(corpus, opt.manifest), corpus.library);
  for (auto& w : kb.warnings) std::cerr << "warning: " << w << "\n";
  Model m = evaluate(kb);
  for (auto& a : m.atoms()) std::cout << atom_text(a) << ".\n";
  return 0;
}

json term_to_json(const Term& t) {
  if (std::holds_alternative<long long>(t)) return std::get<long long>(t);
  return term_text(t);
}

int cmd_query(const Corpus& corpus, const Options& opt) {
  AssembledKB kb = assemble_kb(manifest_for(corpus, opt.manifest), corpus.library);
  for (auto& w : kb.warnings) std::cerr << "warning: " << w << "\n";
  Model m = evaluate(kb);
  std::vector<Literal> goals = parse_query(opt.goal, m.signature);
  std::vector<Bindings> rows = query(m, goals);

  std::vector<std::string> vars;
  for (auto& g : goals) {
    switch (g.kind) {
      case Literal::Kind::Positive:
      case Literal::Kind::Negative: collect_vars(g.atom, vars); break;
      case Literal::Kind::Arith:
        collect_vars(g.result, vars);
        collect_vars(g.expr, vars);
        break;
      case Literal::Kind::Compare:
        collect_vars(g.lhs, vars);
        collect_vars(g.rhs, vars);
        break;
    }
  }
  if (opt.as_json) {
    json out = json::array();
    for (auto& row : rows) {
      json one = json::object();
      for (auto& [v, t] : row) one[v] = term_to_json(t);
      out.push_back(one);
    }
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  if (vars.empty()) {
    std::cout << (rows.empty() ? "no" : "yes") << "\n";
    return 0;
  }
  if (rows.empty()) {
    std::cout << "no\n";
    return 0;
  }
  for (auto& row : rows) {
    bool first = true;
    for (auto& [v, t] : row) {
      if (!first) std::cout << ", ";
      std::cout << v << " = " << term_text(t);
      first = false;
    }
    std::cout << "\n";
  }
  return 0;
}

json report_to_json(const EquivalenceReport& rep) {
  json j;
  j["equivalent"] = rep.equivalent;
  j["atoms"] = {{"direct", rep.atoms_direct},
                {"translated", rep.atoms_translated},
                {"bridged", rep.atoms_bridged}};
  auto atoms = [](const std::vector<Atom>& as) {
    json arr = json::array();
    for (auto& a : as) arr.push_back(atom_text(a));
    return arr;
  };
  j["only_direct"] = atoms(rep.only_direct);
  j["only_translated"] = atoms(rep.only_translated);
  j["only_bridged"] = atoms(rep.only_bridged);
  j["notes"] = rep.notes;
  return j;
}

int cmd_equiv(const Corpus& corpus, const Options& opt) {
  ResolvedMorphism r = resolve(corpus, opt.morphism);
  FlatPattern p = flatten_pattern(r.source.name, corpus.library);

  if (!opt.facts_file.empty()) {
    Signature sig = r.visible_image_signature();
    std::vector<Atom> facts = parse_facts(read_text_file(opt.facts_file), &sig, opt.facts_file);
    EquivalenceReport rep = check_equivalence(p, r, facts);
    if (opt.as_json)
      std::cout << report_to_json(rep).dump(2) << "\n";
    else
      std::cout << rep.to_text();
    return rep.equivalent ? 0 : 1;
  }

  std::mt19937 rng(opt.seed);
  int ok = 0;
  json trials = json::array();
  for (int k = 1; k <= opt.trials; ++k) {
    std::vector<Atom> facts = random_fact_base(r, rng);
    EquivalenceReport rep = check_equivalence(p, r, facts);
    if (opt.as_json) {
      json t = report_to_json(rep);
      t["trial"] = k;
      trials.push_back(std::move(t));
    } else if (rep.equivalent) {
      std::cout << "trial " << k << ": ok (" << rep.atoms_direct << " atoms)\n";
    } else {
      std::cout << "trial " << k << ": DIVERGENT\n" << rep.to_text();
    }
    if (rep.equivalent) ++ok;
  }
  if (opt.as_json) {
    json out;
    out["morphism"] = r.name;
    out["equivalent"] = ok == opt.trials;
    out["trials"] = std::move(trials);
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << ok << "/" << opt.trials << " equivalent\n";
  }
  return ok == opt.trials ? 0 : 1;
}

int cmd_graph(const Corpus& corpus, const Options& opt) {
  std::vector<Manifest> mans;
  if (opt.graph_manifests.empty()) {
    for (auto& [_, m] : corpus.manifests) mans.push_back(m);
  } else {
    for (auto& g : opt.graph_manifests) mans.push_back(manifest_for(corpus, g));
  }
  std::cout << export_inclusion_graph(corpus.library, mans);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"knowledge pattern compiler"};
  app.require_subcommand(1);
  app.add_option("--stdlib", opt.stdlib_root, "pattern library root (default: KPC_STDLIB or built-in)");

  auto* check = app.add_subcommand("check", "validate pattern, morphism, manifest or fact files");
  check->add_option("files", opt.check_files, "files to validate")->required();

  auto* morph = app.add_subcommand("morph", "print the renamed theory of a morphism");
  morph->add_option("morphism", opt.morphism, "morphism name")->required();
  morph->add_flag("--eliminate-dead", opt.eliminate_dead,
                  "drop axioms that cannot influence visible predicates");

  auto* assemble = app.add_subcommand("assemble", "print the rules and facts of a kb");
  assemble->add_option("manifest", opt.manifest, "manifest path or bundled kb name")->required();

  auto* run = app.add_subcommand("run", "evaluate a kb and print its model");
  run->add_option("manifest", opt.manifest, "manifest path or bundled kb name")->required();

  auto* q = app.add_subcommand("query", "evaluate a kb and answer a conjunctive query");
  q->add_option("manifest", opt.manifest, "manifest path or bundled kb name")->required();
  q->add_option("goal", opt.goal, "query text, e.g. \"?- powered(X).\"")->required();
  q->add_flag("--json", opt.as_json, "print solutions as JSON");

  auto* equiv = app.add_subcommand("equiv", "check a renaming against its source pattern");
  equiv->add_option("morphism", opt.morphism, "morphism name")->required();
  equiv->add_option("--facts", opt.facts_file, "fact file over the renamed vocabulary");
  equiv->add_option("--trials", opt.trials, "random fact bases to try")->check(CLI::PositiveNumber);
  equiv->add_option("--seed", opt.seed, "random seed");
  equiv->add_flag("--json", opt.as_json, "print the reports as JSON");

  auto* graph = app.add_subcommand("graph", "print the inclusion graph as DOT");
  graph->add_option("manifests", opt.graph_manifests, "manifest paths or bundled kb names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    Corpus corpus = load_corpus(opt.stdlib_root);
    if (check->parsed()) return cmd_check(corpus, opt);
    if (morph->parsed()) return cmd_morph(corpus, opt);
    if (assemble->parsed()) return cmd_assemble(corpus, opt);
    if (run->parsed()) return cmd_run(corpus, opt);
    if (q->parsed()) return cmd_query(corpus, opt);
    if (equiv->parsed()) return cmd_equiv(corpus, opt);
    if (graph->parsed()) return cmd_graph(corpus, opt);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 2;
}
