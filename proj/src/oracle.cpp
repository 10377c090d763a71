#include "kpc/oracle.hpp"

#include <algorithm>
#include <sstream>

namespace kpc {

BridgeRuleSet generate_bridge_rules(const ResolvedMorphism& r) {
  BridgeRuleSet out;
  for (auto& [src, img] : r.mapping) {
    if (is_hidden_name(img.name)) continue;
    if (src.kind != SymbolKind::Predicate) {
      out.constant_map.emplace(src, img);
      continue;
    }
    std::vector<Term> vars;
    for (int i = 0; i < src.arity; ++i) vars.push_back(Variable{"X" + std::to_string(i + 1)});
    Clause fwd{{img, vars}, {Literal::pos({src, vars})}};
    Clause bwd{{src, vars}, {Literal::pos({img, vars})}};
    out.rules.push_back(std::move(fwd));
    out.rules.push_back(std::move(bwd));
  }
  return out;
}

namespace {

// target symbol -> source symbol, non-hidden pairs only
std::map<Symbol, Symbol> reverse_mapping(const ResolvedMorphism& r) {
  std::map<Symbol, Symbol> rev;
  for (auto& [src, img] : r.mapping)
    if (!is_hidden_name(img.name)) rev.emplace(img, src);
  return rev;
}

Term map_const(const Term& t, const std::map<Symbol, Symbol>& table) {
  if (!is_const(t)) return t;
  auto it = table.find(std::get<Symbol>(t));
  return it == table.end() ? t : Term{it->second};
}

void declare_fact_constants(Signature& sig, const std::vector<Atom>& facts) {
  for (auto& a : facts)
    for (auto& t : a.args) {
      if (!is_const(t)) continue;
      const Symbol& s = std::get<Symbol>(t);
      if (!sig.contains_name(s.name)) sig.declare(s);
    }
}

AssembledKB make_kb(std::string name, Signature sig, std::vector<Clause> rules,
                    std::vector<Atom> facts) {
  AssembledKB kb;
  kb.name = std::move(name);
  kb.signature = std::move(sig);
  declare_fact_constants(kb.signature, facts);
  kb.rules = std::move(rules);
  kb.rule_origins.resize(kb.rules.size());
  kb.facts = std::move(facts);
  kb.fact_origins.resize(kb.facts.size());
  return kb;
}

using Relations = std::map<Symbol, std::set<Tuple>>;

Relations restrict_to(const Model& m, const std::set<Symbol>& preds) {
  Relations out;
  for (auto& [p, ts] : m.relations)
    if (preds.count(p) && !ts.empty()) out.emplace(p, ts);
  return out;
}

Relations map_relation_constants(const Relations& rels, const std::map<Symbol, Symbol>& table) {
  Relations out;
  for (auto& [p, ts] : rels) {
    auto& dst = out[p];
    for (auto& t : ts) {
      Tuple mapped;
      mapped.reserve(t.size());
      for (auto& x : t) mapped.push_back(map_const(x, table));
      dst.insert(std::move(mapped));
    }
  }
  return out;
}

std::vector<Atom> relations_to_atoms(const Relations& rels) {
  std::vector<Atom> out;
  for (auto& [p, ts] : rels)
    for (auto& t : ts) out.push_back({p, t});
  return out;
}

size_t relations_size(const Relations& rels) {
  size_t n = 0;
  for (auto& [_, ts] : rels) n += ts.size();
  return n;
}

}  // namespace

std::vector<Atom> translate_facts(const std::vector<Atom>& facts, const ResolvedMorphism& r) {
  std::map<Symbol, Symbol> rev = reverse_mapping(r);
  std::map<Symbol, Symbol> rev_consts;
  std::map<Symbol, Symbol> rev_preds;
  for (auto& [img, src] : rev)
    (img.kind == SymbolKind::Predicate ? rev_preds : rev_consts).emplace(img, src);

  std::vector<Atom> out;
  out.reserve(facts.size());
  for (auto& f : facts) {
    auto it = rev_preds.find(f.pred);
    if (it == rev_preds.end())
      throw Error(ErrKind::UntranslatableFact, "fact predicate '" + f.pred.name +
                                                   "' is not in the image of morphism '" +
                                                   r.name + "'");
    Atom t;
    t.pred = it->second;
    t.args.reserve(f.args.size());
    for (auto& a : f.args) t.args.push_back(map_const(a, rev_consts));
    out.push_back(std::move(t));
  }
  return out;
}

EquivalenceReport check_equivalence(const FlatPattern& p, const ResolvedMorphism& r,
                                    const std::vector<Atom>& facts) {
  EquivalenceReport rep;

  // Vocabulary capture makes the source-side routes see unintended
  // identifications; flag rather than silently diverge.
  for (auto& [src, img] : r.mapping) {
    if (is_hidden_name(img.name) || img.name == src.name) continue;
    if (p.signature.contains_name(img.name))
      rep.notes.push_back("target name '" + img.name +
                          "' collides with a distinct source symbol");
  }
  {
    std::set<std::string> image_names;
    for (auto& [_, img] : r.mapping) image_names.insert(img.name);
    for (auto& f : facts)
      for (auto& t : f.args) {
        if (!is_const(t)) continue;
        const std::string& n = std::get<Symbol>(t).name;
        if (!image_names.count(n) && p.signature.contains_name(n))
          rep.notes.push_back("fact constant '" + n +
                              "' collides with a non-identity source symbol");
      }
  }
  std::sort(rep.notes.begin(), rep.notes.end());
  rep.notes.erase(std::unique(rep.notes.begin(), rep.notes.end()), rep.notes.end());

  std::set<Symbol> visible;
  for (auto& [_, s] : r.visible_image_signature())
    if (s.kind == SymbolKind::Predicate) visible.insert(s);

  // Direct: morphed pattern with the facts as given.
  Theory morphed = apply_morphism(r);
  Model direct = evaluate(
      make_kb("oracle-direct", morphed.signature, morphed.clauses, facts));
  Relations rel_direct = restrict_to(direct, visible);

  // Translated: facts pulled back to the source vocabulary, evaluated under
  // the unmorphed pattern, image taken of the result.
  std::vector<Atom> back = translate_facts(facts, r);
  Model source_side =
      evaluate(make_kb("oracle-translated", p.signature, p.clauses, back));
  Relations rel_translated;
  {
    std::map<Symbol, Symbol> fwd_consts;
    for (auto& [src, img] : r.mapping)
      if (src.kind != SymbolKind::Predicate) fwd_consts.emplace(src, img);
    for (auto& [pred, ts] : source_side.relations) {
      auto mit = r.mapping.find(pred);
      if (mit == r.mapping.end()) continue;  // fact-base-only predicate
      const Symbol& img = mit->second;
      if (is_hidden_name(img.name) || ts.empty()) continue;
      auto& dst = rel_translated[img];
      for (auto& t : ts) {
        Tuple mapped;
        mapped.reserve(t.size());
        for (auto& x : t) mapped.push_back(map_const(x, fwd_consts));
        dst.insert(std::move(mapped));
      }
    }
  }

  // Bridged: source pattern plus bidirectional vocabulary bridges, facts
  // with constants pulled back; image predicates read off directly, their
  // constants pushed forward.
  BridgeRuleSet bridge = generate_bridge_rules(r);
  std::map<Symbol, Symbol> back_consts;
  for (auto& [src, img] : bridge.constant_map) back_consts.emplace(img, src);
  std::vector<Atom> bridged_facts;
  bridged_facts.reserve(facts.size());
  for (auto& f : facts) {
    Atom g;
    g.pred = f.pred;
    g.args.reserve(f.args.size());
    for (auto& a : f.args) g.args.push_back(map_const(a, back_consts));
    bridged_facts.push_back(std::move(g));
  }
  Signature bridged_sig = merge_signatures(p.signature, r.visible_image_signature());
  std::vector<Clause> bridged_rules = p.clauses;
  bridged_rules.insert(bridged_rules.end(), bridge.rules.begin(), bridge.rules.end());
  Model bridged_model = evaluate(
      make_kb("oracle-bridged", std::move(bridged_sig), std::move(bridged_rules), bridged_facts));
  Relations rel_bridged =
      map_relation_constants(restrict_to(bridged_model, visible), bridge.constant_map);

  rep.atoms_direct = relations_size(rel_direct);
  rep.atoms_translated = relations_size(rel_translated);
  rep.atoms_bridged = relations_size(rel_bridged);

  auto atoms_of = [](const Relations& r_) {
    auto v = relations_to_atoms(r_);
    return std::set<Atom>(v.begin(), v.end());
  };
  std::set<Atom> a = atoms_of(rel_direct), b = atoms_of(rel_translated),
                 c = atoms_of(rel_bridged);
  std::set<Atom> common;
  for (auto& x : a)
    if (b.count(x) && c.count(x)) common.insert(x);
  for (auto& x : a)
    if (!common.count(x)) rep.only_direct.push_back(x);
  for (auto& x : b)
    if (!common.count(x)) rep.only_translated.push_back(x);
  for (auto& x : c)
    if (!common.count(x)) rep.only_bridged.push_back(x);
  rep.equivalent =
      rep.only_direct.empty() && rep.only_translated.empty() && rep.only_bridged.empty();
  return rep;
}

std::string EquivalenceReport::to_text() const {
  std::ostringstream os;
  os << "direct route:     " << atoms_direct << " atoms\n";
  os << "translated route: " << atoms_translated << " atoms\n";
  os << "bridged route:    " << atoms_bridged << " atoms\n";
  auto dump = [&os](const char* label, const std::vector<Atom>& atoms) {
    for (auto& a : atoms) os << label << " " << atom_text(a) << "\n";
  };
  dump("only direct:", only_direct);
  dump("only translated:", only_translated);
  dump("only bridged:", only_bridged);
  for (auto& n : notes) os << "note: " << n << "\n";
  os << (equivalent ? "equivalent: yes" : "equivalent: NO") << "\n";
  return os.str();
}

std::vector<Atom> random_fact_base(const ResolvedMorphism& r, std::mt19937& rng,
                                   int max_individuals, int max_facts) {
  Signature vis = r.visible_image_signature();
  std::vector<Symbol> preds = vis.predicates();
  if (preds.empty()) return {};
  std::vector<Symbol> concepts, named;
  for (auto& [_, s] : vis) {
    if (s.kind == SymbolKind::Concept) concepts.push_back(s);
    if (s.kind == SymbolKind::Individual) named.push_back(s);
  }
  auto pick = [&rng](size_t n) {
    return std::uniform_int_distribution<size_t>(0, n - 1)(rng);
  };
  int n_ind = 1 + static_cast<int>(pick(static_cast<size_t>(max_individuals)));
  std::vector<Symbol> fresh;
  for (int i = 0; i < n_ind; ++i) fresh.push_back(make_individual("i" + std::to_string(i + 1)));

  int n_facts = 1 + static_cast<int>(pick(static_cast<size_t>(max_facts)));
  std::set<Atom> made;
  for (int k = 0; k < n_facts; ++k) {
    const Symbol& pred = preds[pick(preds.size())];
    Atom a;
    a.pred = pred;
    for (int j = 0; j < pred.arity; ++j) {
      size_t roll = pick(100);
      bool last = j == pred.arity - 1;
      if (last && !concepts.empty() && roll < 35)
        a.args.push_back(concepts[pick(concepts.size())]);
      else if (roll < 75 || (named.empty() && roll < 90))
        a.args.push_back(fresh[pick(fresh.size())]);
      else if (roll < 90)
        a.args.push_back(named[pick(named.size())]);
      else
        a.args.push_back(static_cast<long long>(pick(10)));
    }
    made.insert(std::move(a));
  }
  return {made.begin(), made.end()};
}

}  // namespace kpc
