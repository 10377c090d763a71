#include "kpc/engine.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>

namespace kpc {

int StratificationReport::level_of(const Symbol& pred) const {
  for (size_t i = 0; i < strata.size(); ++i)
    for (auto& s : strata[i])
      if (s == pred) return static_cast<int>(i);
  return -1;
}

bool Model::contains(const Atom& a) const {
  auto it = relations.find(a.pred);
  return it != relations.end() && it->second.count(a.args) != 0;
}

const std::set<Tuple>& Model::tuples(const Symbol& pred) const {
  static const std::set<Tuple> empty;
  auto it = relations.find(pred);
  return it == relations.end() ? empty : it->second;
}

std::vector<Atom> Model::atoms() const {
  std::vector<Atom> out;
  for (auto& [p, ts] : relations)
    for (auto& t : ts) out.push_back({p, t});
  return out;
}

size_t Model::atom_count() const {
  size_t n = 0;
  for (auto& [_, ts] : relations) n += ts.size();
  return n;
}

// ---- stratification ---------------------------------------------------------

namespace {

struct Deps {
  std::vector<Symbol> preds;  // node id -> predicate
  std::map<Symbol, int> id;
  // out[u] contains v when some rule with head v uses u in its body;
  // derivations flow u -> v.
  std::vector<std::set<int>> pos_out, neg_out;
};

Deps build_deps(const AssembledKB& kb) {
  Deps g;
  for (auto& s : kb.signature.predicates()) {
    g.id.emplace(s, static_cast<int>(g.preds.size()));
    g.preds.push_back(s);
  }
  g.pos_out.resize(g.preds.size());
  g.neg_out.resize(g.preds.size());
  for (auto& c : kb.rules) {
    auto hit = g.id.find(c.head.pred);
    if (hit == g.id.end())
      throw Error(ErrKind::UndeclaredSymbol,
                  "rule head predicate '" + c.head.pred.name + "' is not in the signature");
    for (auto& l : c.body) {
      if (l.kind != Literal::Kind::Positive && l.kind != Literal::Kind::Negative) continue;
      auto bit = g.id.find(l.atom.pred);
      if (bit == g.id.end())
        throw Error(ErrKind::UndeclaredSymbol,
                    "body predicate '" + l.atom.pred.name + "' is not in the signature");
      (l.kind == Literal::Kind::Positive ? g.pos_out : g.neg_out)[bit->second].insert(hit->second);
    }
  }
  return g;
}

// Tarjan; components come out in reverse topological order of the
// condensation (successors first), which the level pass exploits.
struct SccState {
  const Deps& g;
  std::vector<int> index, low, comp;
  std::vector<bool> on_stack;
  std::vector<int> stack;
  int counter = 0, ncomp = 0;

  explicit SccState(const Deps& g_)
      : g(g_),
        index(g_.preds.size(), -1),
        low(g_.preds.size(), 0),
        comp(g_.preds.size(), -1),
        on_stack(g_.preds.size(), false) {}

  void dfs(int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    auto step = [&](int w) {
      if (index[w] < 0) {
        dfs(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    };
    for (int w : g.pos_out[v]) step(w);
    for (int w : g.neg_out[v]) step(w);
    if (low[v] == index[v]) {
      for (;;) {
        int w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = ncomp;
        if (w == v) break;
      }
      ++ncomp;
    }
  }
};

// Flow path v -> ... -> u inside one component, for the error message.
std::vector<int> path_within_comp(const Deps& g, const std::vector<int>& comp, int v, int u) {
  std::map<int, int> parent;
  std::vector<int> work{v};
  parent[v] = v;
  while (!work.empty()) {
    int x = work.front();
    work.erase(work.begin());
    if (x == u) break;
    auto push = [&](int w) {
      if (comp[w] == comp[v] && !parent.count(w)) {
        parent[w] = x;
        work.push_back(w);
      }
    };
    for (int w : g.pos_out[x]) push(w);
    for (int w : g.neg_out[x]) push(w);
  }
  std::vector<int> path;
  for (int x = u;; x = parent.at(x)) {
    path.push_back(x);
    if (x == v) break;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

StratificationReport stratify(const AssembledKB& kb) {
  Deps g = build_deps(kb);
  SccState scc(g);
  for (size_t i = 0; i < g.preds.size(); ++i)
    if (scc.index[i] < 0) scc.dfs(static_cast<int>(i));

  // A negative edge inside a component is a negation cycle.
  for (size_t u = 0; u < g.preds.size(); ++u)
    for (int v : g.neg_out[u])
      if (scc.comp[u] == scc.comp[v]) {
        std::vector<int> back = path_within_comp(g, scc.comp, v, static_cast<int>(u));
        std::string cycle = g.preds[u].name + " -\\+-> ";
        for (size_t i = 0; i < back.size(); ++i)
          cycle += g.preds[back[i]].name + (i + 1 < back.size() ? " -> " : "");
        throw Error(ErrKind::UnstratifiableNegation,
                    "predicate '" + g.preds[u].name +
                        "' depends negatively on itself: " + cycle);
      }

  // Minimal levels: components in topological order (decreasing Tarjan id),
  // each level is the max over incoming edges, +1 across a negative edge.
  std::vector<int> level(scc.ncomp, 0);
  std::vector<std::vector<std::pair<int, bool>>> incoming(scc.ncomp);  // (from comp, negative)
  for (size_t u = 0; u < g.preds.size(); ++u) {
    for (int v : g.pos_out[u])
      if (scc.comp[u] != scc.comp[v]) incoming[scc.comp[v]].push_back({scc.comp[u], false});
    for (int v : g.neg_out[u])
      if (scc.comp[u] != scc.comp[v]) incoming[scc.comp[v]].push_back({scc.comp[u], true});
  }
  for (int c = scc.ncomp - 1; c >= 0; --c)
    for (auto& [from, negative] : incoming[c])
      level[c] = std::max(level[c], level[from] + (negative ? 1 : 0));

  StratificationReport rep;
  int nlevels = 0;
  for (int c = 0; c < scc.ncomp; ++c) nlevels = std::max(nlevels, level[c] + 1);
  rep.strata.resize(nlevels);
  for (size_t i = 0; i < g.preds.size(); ++i)
    rep.strata[level[scc.comp[i]]].push_back(g.preds[i]);
  for (auto& s : rep.strata) std::sort(s.begin(), s.end());

  std::set<std::pair<Symbol, Symbol>> neg;
  for (size_t u = 0; u < g.preds.size(); ++u)
    for (int v : g.neg_out[u]) neg.insert({g.preds[u], g.preds[v]});
  rep.negative_edges.assign(neg.begin(), neg.end());
  return rep;
}

// ---- shared literal semantics -----------------------------------------------

namespace {

Term subst_term(const Term& t, const Bindings& b) {
  if (!is_var(t)) return t;
  auto it = b.find(std::get<Variable>(t).name);
  return it == b.end() ? t : it->second;
}

Atom ground_atom(const Atom& a, const Bindings& b) {
  Atom out;
  out.pred = a.pred;
  out.args.reserve(a.args.size());
  for (auto& t : a.args) {
    Term s = subst_term(t, b);
    if (is_var(s))
      throw Error(ErrKind::UnsafeClause, "variable '" + std::get<Variable>(s).name +
                                             "' unbound at evaluation of '" + atom_text(a) + "'");
    out.args.push_back(std::move(s));
  }
  return out;
}

// nullopt marks a type failure (the enclosing literal fails, no error).
std::optional<long long> eval_expr(const ArithExpr& e, const Bindings& b) {
  if (e.op == ArithExpr::Op::Leaf) {
    Term t = subst_term(e.leaf, b);
    if (is_var(t))
      throw Error(ErrKind::ArithmeticOnUnbound, "variable '" + std::get<Variable>(t).name +
                                                    "' is unbound in arithmetic");
    if (!is_int(t)) return std::nullopt;
    return std::get<long long>(t);
  }
  auto l = eval_expr(e.kids[0], b);
  auto r = eval_expr(e.kids[1], b);
  if (!l || !r) return std::nullopt;
  switch (e.op) {
    case ArithExpr::Op::Add: return *l + *r;
    case ArithExpr::Op::Sub: return *l - *r;
    case ArithExpr::Op::Mul: return *l * *r;
    case ArithExpr::Op::Div:
      if (*r == 0) return std::nullopt;
      return *l / *r;  // truncating
    case ArithExpr::Op::Leaf: break;
  }
  return std::nullopt;
}

// Mutates b when the result term is an unbound variable.
bool eval_arith_literal(const Literal& l, Bindings& b) {
  auto v = eval_expr(l.expr, b);
  if (!v) return false;
  Term res = subst_term(l.result, b);
  if (is_var(res)) {
    b[std::get<Variable>(res).name] = Term{*v};
    return true;
  }
  return is_int(res) && std::get<long long>(res) == *v;
}

bool eval_compare(const Literal& l, const Bindings& b) {
  Term lhs = subst_term(l.lhs, b);
  Term rhs = subst_term(l.rhs, b);
  if (is_var(lhs) || is_var(rhs))
    throw Error(ErrKind::ArithmeticOnUnbound, "unbound variable in comparison '" +
                                                  literal_text(l) + "'");
  if (l.op == CmpOp::Eq) return cmp(lhs, rhs) == 0;
  if (l.op == CmpOp::Ne) return cmp(lhs, rhs) != 0;
  if (!is_int(lhs) || !is_int(rhs)) return false;  // order needs integers
  long long a = std::get<long long>(lhs), c = std::get<long long>(rhs);
  switch (l.op) {
    case CmpOp::Lt: return a < c;
    case CmpOp::Le: return a <= c;
    case CmpOp::Gt: return a > c;
    case CmpOp::Ge: return a >= c;
    default: return false;
  }
}

// ---- semi-naive evaluator ----------------------------------------------------

bool unify_tuple(const std::vector<Term>& pat, const Tuple& tup, Bindings& b) {
  for (size_t i = 0; i < pat.size(); ++i) {
    const Term& p = pat[i];
    if (is_var(p)) {
      auto [it, inserted] = b.emplace(std::get<Variable>(p).name, tup[i]);
      if (!inserted && cmp(it->second, tup[i]) != 0) return false;
    } else if (cmp(p, tup[i]) != 0) {
      return false;
    }
  }
  return true;
}

using Relations = std::map<Symbol, std::set<Tuple>>;

const std::set<Tuple>& rel_of(const Relations& rs, const Symbol& pred) {
  static const std::set<Tuple> empty;
  auto it = rs.find(pred);
  return it == rs.end() ? empty : it->second;
}

struct RoundOut {
  Relations tuples;
  std::map<Atom, Derivation> prov;

  void add(const Model& m, Atom h, Derivation d) {
    if (m.contains(h)) return;
    if (tuples[h.pred].insert(h.args).second) prov.emplace(std::move(h), std::move(d));
  }
};

void merge_round(Model& m, RoundOut& out) {
  for (auto& [p, ts] : out.tuples) m.relations[p].insert(ts.begin(), ts.end());
  for (auto& [a, d] : out.prov) m.provenance.emplace(a, d);
}

// Fires one rule; position dp (when >= 0) draws from delta instead of the
// full relation. Body matches left to right.
void fire_rule(const Clause& c, int rule_index, int dp, const Relations& delta, const Model& m,
               RoundOut& out) {
  std::function<void(size_t, Bindings)> rec = [&](size_t li, Bindings b) {
    if (li == c.body.size()) {
      Atom h = ground_atom(c.head, b);
      out.add(m, std::move(h), Derivation{rule_index, std::move(b)});
      return;
    }
    const Literal& l = c.body[li];
    switch (l.kind) {
      case Literal::Kind::Positive: {
        const std::set<Tuple>& rel =
            dp == static_cast<int>(li) ? rel_of(delta, l.atom.pred) : m.tuples(l.atom.pred);
        for (const Tuple& t : rel) {
          Bindings nb = b;
          if (unify_tuple(l.atom.args, t, nb)) rec(li + 1, std::move(nb));
        }
        return;
      }
      case Literal::Kind::Negative:
        if (!m.contains(ground_atom(l.atom, b))) rec(li + 1, std::move(b));
        return;
      case Literal::Kind::Arith: {
        Bindings nb = std::move(b);
        if (eval_arith_literal(l, nb)) rec(li + 1, std::move(nb));
        return;
      }
      case Literal::Kind::Compare:
        if (eval_compare(l, b)) rec(li + 1, std::move(b));
        return;
    }
  };
  rec(0, {});
}

Model init_model(const AssembledKB& kb) {
  Model m;
  m.signature = kb.signature;
  m.strata = stratify(kb);
  for (auto& f : kb.facts)
    if (m.relations[f.pred].insert(f.args).second) m.provenance.emplace(f, Derivation{-1, {}});
  return m;
}

// Rule ids grouped by the stratum of their head predicate.
std::vector<std::vector<int>> rules_by_level(const AssembledKB& kb,
                                             const StratificationReport& rep) {
  std::map<Symbol, int> level;
  for (size_t i = 0; i < rep.strata.size(); ++i)
    for (auto& p : rep.strata[i]) level[p] = static_cast<int>(i);
  std::vector<std::vector<int>> out(rep.strata.size());
  for (size_t r = 0; r < kb.rules.size(); ++r)
    out[level.at(kb.rules[r].head.pred)].push_back(static_cast<int>(r));
  return out;
}

}  // namespace

Model evaluate(const AssembledKB& kb) {
  Model m = init_model(kb);
  auto grouped = rules_by_level(kb, m.strata);
  for (size_t s = 0; s < grouped.size(); ++s) {
    std::set<Symbol> stratum_preds(m.strata.strata[s].begin(), m.strata.strata[s].end());

    Relations delta;
    {
      RoundOut out;
      for (int ri : grouped[s]) fire_rule(kb.rules[ri], ri, -1, {}, m, out);
      merge_round(m, out);
      delta = std::move(out.tuples);
    }
    while (!delta.empty()) {
      RoundOut out;
      for (int ri : grouped[s]) {
        const Clause& c = kb.rules[ri];
        for (size_t li = 0; li < c.body.size(); ++li)
          if (c.body[li].kind == Literal::Kind::Positive &&
              stratum_preds.count(c.body[li].atom.pred))
            fire_rule(c, ri, static_cast<int>(li), delta, m, out);
      }
      merge_round(m, out);
      delta = std::move(out.tuples);
    }
  }
  return m;
}

// ---- naive reference evaluator -----------------------------------------------

namespace {

// Plain tuple match, written independently of unify_tuple: substitute first,
// then bind or compare position by position.
std::optional<Bindings> naive_extend(const std::vector<Term>& pat, const Tuple& tup,
                                     const Bindings& b) {
  Bindings nb = b;
  for (size_t i = 0; i < pat.size(); ++i) {
    Term cur = subst_term(pat[i], nb);
    if (is_var(cur))
      nb[std::get<Variable>(cur).name] = tup[i];
    else if (cmp(cur, tup[i]) != 0)
      return std::nullopt;
  }
  return nb;
}

// All substitutions satisfying the body against the full relations.
void enumerate_body(const Model& m, const std::vector<Literal>& body, size_t li,
                    const Bindings& b, const std::function<void(const Bindings&)>& sink) {
  if (li == body.size()) {
    sink(b);
    return;
  }
  const Literal& l = body[li];
  switch (l.kind) {
    case Literal::Kind::Positive:
      for (const Tuple& t : m.tuples(l.atom.pred))
        if (auto nb = naive_extend(l.atom.args, t, b)) enumerate_body(m, body, li + 1, *nb, sink);
      return;
    case Literal::Kind::Negative:
      if (!m.contains(ground_atom(l.atom, b))) enumerate_body(m, body, li + 1, b, sink);
      return;
    case Literal::Kind::Arith: {
      Bindings nb = b;
      if (eval_arith_literal(l, nb)) enumerate_body(m, body, li + 1, nb, sink);
      return;
    }
    case Literal::Kind::Compare:
      if (eval_compare(l, b)) enumerate_body(m, body, li + 1, b, sink);
      return;
  }
}

}  // namespace

Model evaluate_naive(const AssembledKB& kb) {
  Model m = init_model(kb);
  auto grouped = rules_by_level(kb, m.strata);
  for (size_t s = 0; s < grouped.size(); ++s) {
    for (;;) {
      std::vector<std::pair<Atom, Derivation>> fresh;
      for (int ri : grouped[s]) {
        const Clause& c = kb.rules[ri];
        enumerate_body(m, c.body, 0, {}, [&](const Bindings& b) {
          Atom h = ground_atom(c.head, b);
          if (!m.contains(h)) fresh.push_back({std::move(h), Derivation{ri, b}});
        });
      }
      bool changed = false;
      for (auto& [h, d] : fresh)
        if (m.relations[h.pred].insert(h.args).second) {
          m.provenance.emplace(h, d);
          changed = true;
        }
      if (!changed) break;
    }
  }
  return m;
}

// ---- queries ------------------------------------------------------------------

namespace {

// Range restriction for a conjunctive goal, mirroring clause safety without
// a head: negation, arithmetic inputs and comparisons only over variables
// bound by earlier positive literals or earlier arithmetic results.
void check_goal_safety(const std::vector<Literal>& goals) {
  std::set<std::string> bound;
  for (auto& l : goals) {
    std::vector<std::string> vars;
    switch (l.kind) {
      case Literal::Kind::Positive: {
        collect_vars(l.atom, vars);
        for (auto& v : vars) bound.insert(v);
        break;
      }
      case Literal::Kind::Negative: {
        collect_vars(l.atom, vars);
        for (auto& v : vars)
          if (!bound.count(v))
            throw Error(ErrKind::UnsafeQuery, "variable '" + v + "' in negated goal '" +
                                                  literal_text(l) + "' is not bound earlier");
        break;
      }
      case Literal::Kind::Arith: {
        collect_vars(l.expr, vars);
        for (auto& v : vars)
          if (!bound.count(v))
            throw Error(ErrKind::UnsafeQuery, "variable '" + v + "' in arithmetic goal '" +
                                                  literal_text(l) + "' is not bound earlier");
        std::vector<std::string> res;
        collect_vars(l.result, res);
        for (auto& v : res) bound.insert(v);
        break;
      }
      case Literal::Kind::Compare: {
        collect_vars(l.lhs, vars);
        collect_vars(l.rhs, vars);
        for (auto& v : vars)
          if (!bound.count(v))
            throw Error(ErrKind::UnsafeQuery, "variable '" + v + "' in comparison goal '" +
                                                  literal_text(l) + "' is not bound earlier");
        break;
      }
    }
  }
}

}  // namespace

std::vector<Bindings> query(const Model& m, const std::vector<Literal>& goals) {
  for (auto& l : goals) {
    if (l.kind != Literal::Kind::Positive && l.kind != Literal::Kind::Negative) continue;
    const Symbol* s = m.signature.find(l.atom.pred.name);
    if (!s || s->kind != SymbolKind::Predicate || s->arity != l.atom.pred.arity)
      throw Error(ErrKind::UnknownPredicate,
                  "predicate '" + l.atom.pred.name + "/" +
                      std::to_string(l.atom.pred.arity) + "' is not in the model");
  }
  check_goal_safety(goals);
  std::set<Bindings> sols;
  enumerate_body(m, goals, 0, {}, [&](const Bindings& b) { sols.insert(b); });
  return {sols.begin(), sols.end()};
}

// ---- integrity ------------------------------------------------------------------

IntegrityConstraint IntegrityConstraint::acyclic(Symbol pred) {
  IntegrityConstraint c;
  c.kind = Kind::Acyclic;
  c.name = "acyclic(" + pred.name + ")";
  c.pred = std::move(pred);
  return c;
}

IntegrityConstraint IntegrityConstraint::denial(std::string name, std::vector<Literal> body) {
  IntegrityConstraint c;
  c.kind = Kind::Denial;
  c.name = std::move(name);
  c.body = std::move(body);
  return c;
}

std::vector<IntegrityViolation> check_integrity(const Model& m,
                                                const std::vector<IntegrityConstraint>& cs) {
  std::vector<IntegrityViolation> out;
  for (auto& c : cs) {
    if (c.kind == IntegrityConstraint::Kind::Acyclic) {
      const Symbol* s = m.signature.find(c.pred.name);
      if (!s || s->kind != SymbolKind::Predicate)
        throw Error(ErrKind::UnknownPredicate,
                    "acyclicity constraint over unknown predicate '" + c.pred.name + "'");
      if (s->arity != 2)
        throw Error(ErrKind::InvalidDeclaration,
                    "acyclicity constraint needs a binary predicate, got '" + c.pred.name + "/" +
                        std::to_string(s->arity) + "'");
      for (auto& t : m.tuples(*s))
        if (cmp(t[0], t[1]) == 0) out.push_back({c.name, atom_text(Atom{*s, t})});
    } else {
      for (auto& b : query(m, c.body)) {
        std::string detail;
        for (auto& [v, t] : b) detail += (detail.empty() ? "" : ", ") + v + " = " + term_text(t);
        if (detail.empty()) detail = "true";
        out.push_back({c.name, detail});
      }
    }
  }
  return out;
}

// ---- derivation inspection -------------------------------------------------------

std::set<Symbol> derivation_predicates(const Model& m, const AssembledKB& kb, const Atom& a) {
  std::set<Symbol> out;
  if (!m.contains(a)) return out;
  std::set<Atom> done;
  std::function<void(const Atom&)> go = [&](const Atom& atom) {
    if (!done.insert(atom).second) return;
    out.insert(atom.pred);
    auto it = m.provenance.find(atom);
    if (it == m.provenance.end() || it->second.rule_index < 0) return;
    const Clause& c = kb.rules.at(it->second.rule_index);
    for (auto& l : c.body) {
      if (l.kind == Literal::Kind::Positive)
        go(ground_atom(l.atom, it->second.bindings));
      else if (l.kind == Literal::Kind::Negative)
        out.insert(l.atom.pred);
    }
  };
  go(a);
  return out;
}

}  // namespace kpc
