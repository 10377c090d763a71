#pragma once
// Shared builders, random generators and brute-force reference oracles for
// the test suites. The oracles deliberately know nothing about the engine:
// plain adjacency-set closure and path enumeration.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kpc/engine.hpp"
#include "kpc/library.hpp"
#include "kpc/morphism.hpp"
#include "kpc/oracle.hpp"
#include "kpc/parser.hpp"
#include "kpc/stdlib.hpp"

namespace kpc::test {

inline Term V(const std::string& name) { return Variable{name}; }
inline Term ind(const std::string& name) { return make_individual(name); }
inline Term con(const std::string& name) { return make_concept(name); }

inline Atom atom(const std::string& pred, std::vector<Term> args) {
  return Atom{make_pred(pred, static_cast<int>(args.size())), std::move(args)};
}

// The shared corpus, loaded once per test binary.
inline const Corpus& corpus() {
  static Corpus c = load_corpus(KPC_STDLIB_DIR);
  return c;
}

// KB from parsed rule and fact text; unknown fact constants become
// individuals the way assembly would declare them.
inline AssembledKB make_kb(Signature sig, const std::string& rules_text,
                           const std::string& facts_text, const std::string& name = "test-kb") {
  AssembledKB kb;
  kb.name = name;
  kb.signature = std::move(sig);
  if (!facts_text.empty()) {
    for (auto& a : parse_facts(facts_text, &kb.signature)) {
      for (auto& t : a.args) {
        if (!is_const(t)) continue;
        const Symbol& s = std::get<Symbol>(t);
        if (!kb.signature.contains_name(s.name)) kb.signature.declare(s);
      }
      kb.facts.push_back(a);
      kb.fact_origins.push_back("inline");
    }
  }
  if (!rules_text.empty()) {
    for (auto& c : parse_rules(rules_text, kb.signature)) {
      kb.rules.push_back(c);
      kb.rule_origins.push_back({"", "", -1, "inline"});
    }
  }
  return kb;
}

inline AssembledKB kb_from_theory(const Theory& t, std::vector<Atom> facts,
                                  const std::string& name = "test-kb") {
  AssembledKB kb;
  kb.name = name;
  kb.signature = t.signature;
  kb.rules = t.clauses;
  kb.rule_origins.resize(kb.rules.size());
  for (auto& a : facts) {
    for (auto& arg : a.args) {
      if (!is_const(arg)) continue;
      const Symbol& s = std::get<Symbol>(arg);
      if (!kb.signature.contains_name(s.name)) kb.signature.declare(s);
    }
    kb.facts.push_back(a);
    kb.fact_origins.push_back("inline");
  }
  return kb;
}

// ---- brute-force graph oracles ---------------------------------------------

using Edge = std::pair<std::string, std::string>;

// Transitive closure by saturation over pairs; no reflexivity.
inline std::set<Edge> brute_closure(const std::set<Edge>& edges) {
  std::set<Edge> out = edges;
  for (;;) {
    size_t before = out.size();
    for (auto& [a, b] : std::set<Edge>(out))
      for (auto& [c, d] : std::set<Edge>(out))
        if (b == c) out.insert({a, d});
    if (out.size() == before) return out;
  }
}

// Nodes y such that some x in sources has a nonempty directed path
// x -> ... -> y in which every node after x avoids `blocked`. A cycle back
// to the start counts; per-node blocking keeps the set path-independent.
inline std::set<std::string> brute_unblocked_reach(const std::set<std::string>& sources,
                                                   const std::set<Edge>& edges,
                                                   const std::set<std::string>& blocked) {
  std::set<std::string> out;
  for (auto& s : sources) {
    std::vector<std::string> stack{s};
    std::set<std::string> expanded;
    while (!stack.empty()) {
      std::string u = stack.back();
      stack.pop_back();
      if (!expanded.insert(u).second) continue;
      for (auto& [a, b] : edges) {
        if (a != u || blocked.count(b)) continue;
        out.insert(b);
        stack.push_back(b);
      }
    }
  }
  return out;
}

// ---- random structures ------------------------------------------------------

inline int pick(std::mt19937& rng, int lo, int hi) {  // inclusive
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

struct RandomGraph {
  std::vector<std::string> nodes;
  std::set<Edge> edges;
};

inline RandomGraph random_graph(std::mt19937& rng, int max_nodes = 8) {
  RandomGraph g;
  int n = pick(rng, 1, max_nodes);
  for (int i = 0; i < n; ++i) g.nodes.push_back("n" + std::to_string(i + 1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && pick(rng, 0, 99) < 22) g.edges.insert({g.nodes[i], g.nodes[j]});
  return g;
}

// Self-contained pattern of positive safe Horn clauses, for the morphism
// algebra and dead-code properties. Predicates q0.., individuals k0..,
// occasional integer arguments.
inline PatternSource random_pattern(std::mt19937& rng, const std::string& name) {
  PatternSource p;
  p.name = name;
  int n_pred = pick(rng, 2, 5);
  int n_ind = pick(rng, 0, 2);
  std::vector<Symbol> preds;
  for (int i = 0; i < n_pred; ++i) {
    Symbol s = make_pred("q" + std::to_string(i), pick(rng, 1, 3));
    preds.push_back(s);
    p.declared_signature.declare(s);
  }
  std::vector<Symbol> inds;
  for (int i = 0; i < n_ind; ++i) {
    Symbol s = make_individual("k" + std::to_string(i));
    inds.push_back(s);
    p.declared_signature.declare(s);
  }
  auto rand_term = [&](std::vector<std::string>& vars) -> Term {
    int roll = pick(rng, 0, 99);
    if (roll < 60 || inds.empty()) {
      std::string v = "X" + std::to_string(pick(rng, 0, 4));
      vars.push_back(v);
      return Variable{v};
    }
    if (roll < 85) return inds[pick(rng, 0, static_cast<int>(inds.size()) - 1)];
    return Term{static_cast<long long>(pick(rng, 0, 9))};
  };
  int n_clauses = pick(rng, 1, 5);
  for (int ci = 0; ci < n_clauses; ++ci) {
    for (int attempt = 0; attempt < 50; ++attempt) {
      Clause c;
      std::vector<std::string> ignore;
      const Symbol& h = preds[pick(rng, 0, n_pred - 1)];
      c.head.pred = h;
      std::vector<std::string> head_vars;
      for (int i = 0; i < h.arity; ++i) c.head.args.push_back(rand_term(head_vars));
      int n_body = pick(rng, 1, 3);
      std::vector<int> slots;  // flattened body positions
      for (int i = 0; i < n_body; ++i) {
        const Symbol& b = preds[pick(rng, 0, n_pred - 1)];
        Atom a{b, {}};
        for (int j = 0; j < b.arity; ++j) {
          a.args.push_back(rand_term(ignore));
          slots.push_back(static_cast<int>(slots.size()));
        }
        c.body.push_back(Literal::pos(a));
      }
      if (slots.size() < head_vars.size()) continue;
      // Overwrite random distinct body slots so every head variable is bound.
      std::shuffle(slots.begin(), slots.end(), rng);
      size_t si = 0;
      for (auto& v : head_vars) {
        int s = slots[si++];
        for (auto& lit : c.body) {
          if (s < static_cast<int>(lit.atom.args.size())) {
            lit.atom.args[static_cast<size_t>(s)] = Variable{v};
            break;
          }
          s -= static_cast<int>(lit.atom.args.size());
        }
      }
      if (!check_clause_safety(c, p.declared_signature).empty()) continue;
      p.clauses.push_back(c);
      break;
    }
  }
  return p;
}

// Ground facts over the pattern's own predicates; constants come from the
// pattern's individuals plus a shared d1..d4 pool and small integers.
inline std::vector<Atom> random_pattern_facts(const Signature& sig, std::mt19937& rng,
                                              int max_facts = 10) {
  std::vector<Symbol> preds = sig.predicates();
  std::vector<Term> pool;
  for (auto& [_, s] : sig)
    if (s.kind == SymbolKind::Individual) pool.push_back(s);
  for (int i = 1; i <= 4; ++i) pool.push_back(make_individual("d" + std::to_string(i)));
  std::set<Atom> out;
  int n = pick(rng, 1, max_facts);
  for (int i = 0; i < n && !preds.empty(); ++i) {
    const Symbol& p = preds[static_cast<size_t>(pick(rng, 0, static_cast<int>(preds.size()) - 1))];
    Atom a{p, {}};
    for (int j = 0; j < p.arity; ++j) {
      if (pick(rng, 0, 99) < 20)
        a.args.push_back(Term{static_cast<long long>(pick(rng, 0, 9))});
      else
        a.args.push_back(pool[static_cast<size_t>(pick(rng, 0, static_cast<int>(pool.size()) - 1))]);
    }
    out.insert(a);
  }
  return {out.begin(), out.end()};
}

// Total injective renaming of every signature symbol: name -> prefix + name.
inline MorphismSource total_renaming(const FlatPattern& p, const std::string& name,
                                     const std::string& prefix) {
  MorphismSource m;
  m.name = name;
  m.source_pattern = p.name;
  for (auto& [n, s] : p.signature) {
    (void)s;
    m.pairs.emplace_back(n, prefix + n);
  }
  return m;
}

inline FlatPattern flat_of_theory(const std::string& name, const Theory& t) {
  FlatPattern fp;
  fp.name = name;
  fp.signature = t.signature;
  fp.clauses = t.clauses;
  fp.clause_origins.assign(t.clauses.size(), name);
  return fp;
}

}  // namespace kpc::test
