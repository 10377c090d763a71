#include "kpc/morphism.hpp"

#include <algorithm>
#include <sstream>

namespace kpc {

Signature ResolvedMorphism::image_signature() const {
  Signature out;
  for (auto& [_, img] : mapping) out.declare(img);
  return out;
}

Signature ResolvedMorphism::visible_image_signature() const {
  Signature out;
  for (auto& [src, img] : mapping)
    if (!hidden.count(src)) out.declare(img);
  return out;
}

std::vector<MorphismIssue> validate_morphism(const MorphismSource& m, const FlatPattern& source,
                                             const Signature& target_sig) {
  std::vector<MorphismIssue> out;
  std::set<std::string> seen;
  std::map<std::string, std::string> target_to_source;

  auto check_source_known = [&](const std::string& name) -> const Symbol* {
    const Symbol* s = source.signature.find(name);
    if (!s)
      out.push_back({ErrKind::UnknownSourceSymbol, name, "",
                     "source symbol '" + name + "' does not occur in pattern '" + source.name +
                         "'"});
    return s;
  };

  for (auto& [src, tgt] : m.pairs) {
    if (!seen.insert(src).second) {
      out.push_back({ErrKind::DoubleMapping, src, tgt,
                     "source symbol '" + src + "' is mapped more than once"});
      continue;
    }
    const Symbol* s = check_source_known(src);
    auto [it, fresh] = target_to_source.emplace(tgt, src);
    if (!fresh && it->second != src) {
      out.push_back({ErrKind::NonInjective, src, tgt,
                     "source symbols '" + it->second + "' and '" + src +
                         "' both map to target '" + tgt + "'"});
    }
    if (s) {
      if (const Symbol* t = target_sig.find(tgt)) {
        if (t->kind != s->kind || t->arity != s->arity) {
          std::ostringstream os;
          os << "target '" << tgt << "' is already declared as " << symbolkind_name(t->kind);
          if (t->kind == SymbolKind::Predicate) os << "/" << t->arity;
          os << " but '" << src << "' is " << symbolkind_name(s->kind);
          if (s->kind == SymbolKind::Predicate) os << "/" << s->arity;
          out.push_back({ErrKind::TargetSignatureConflict, src, tgt, os.str()});
        }
      }
    }
  }
  for (auto& h : m.explicit_hides) {
    if (!seen.insert(h).second) {
      out.push_back({ErrKind::DoubleMapping, h, "",
                     "source symbol '" + h + "' is both mapped and hidden"});
      continue;
    }
    check_source_known(h);
  }
  return out;
}

std::vector<std::string> lint_morphism_overlaps(const MorphismSource& m,
                                                const FlatPattern& source,
                                                const Signature& target_sig) {
  std::vector<std::string> out;
  for (auto& [src, tgt] : m.pairs) {
    if (src == tgt) continue;  // shared plumbing such as isa -> isa
    if (!source.signature.find(src)) continue;
    if (target_sig.find(tgt))
      out.push_back("morphism '" + m.name + "': target '" + tgt +
                    "' is already declared in the target signature (mapped from '" + src + "')");
  }
  return out;
}

ResolvedMorphism complete_morphism(const MorphismSource& m, const FlatPattern& source,
                                   int application_counter) {
  {
    Signature empty;
    auto issues = validate_morphism(m, source, empty);
    if (!issues.empty())
      throw Error(issues.front().kind,
                  "cannot complete morphism '" + m.name + "': " + issues.front().message);
  }

  ResolvedMorphism r;
  r.name = m.name;
  r.source = source;

  std::map<std::string, std::string> by_name(m.pairs.begin(), m.pairs.end());
  std::set<std::string> hide(m.explicit_hides.begin(), m.explicit_hides.end());
  std::set<std::string> used_targets;
  for (auto& [_, tgt] : m.pairs) used_targets.insert(tgt);

  for (auto& [name, sym] : source.signature) {
    auto it = by_name.find(name);
    if (it != by_name.end() && !hide.count(name)) {
      r.mapping.emplace(sym, Symbol{it->second, sym.kind, sym.arity});
      continue;
    }
    std::string fresh =
        "hidden:" + m.name + ":" + std::to_string(application_counter) + ":" + name;
    if (used_targets.count(fresh) || source.signature.contains_name(fresh))
      throw Error(ErrKind::HiddenNameCollision, "generated name '" + fresh + "' already in use");
    r.mapping.emplace(sym, Symbol{fresh, sym.kind, sym.arity});
    r.hidden.insert(sym);
  }
  return r;
}

namespace {

Term map_term(const Term& t, const std::map<Symbol, Symbol>& mapping) {
  if (!is_const(t)) return t;
  return mapping.at(std::get<Symbol>(t));
}

Atom map_atom(const Atom& a, const std::map<Symbol, Symbol>& mapping) {
  Atom out;
  out.pred = mapping.at(a.pred);
  out.args.reserve(a.args.size());
  for (auto& t : a.args) out.args.push_back(map_term(t, mapping));
  return out;
}

ArithExpr map_expr(const ArithExpr& e, const std::map<Symbol, Symbol>& mapping) {
  ArithExpr out = e;
  if (out.op == ArithExpr::Op::Leaf) {
    out.leaf = map_term(out.leaf, mapping);
    return out;
  }
  for (auto& k : out.kids) k = map_expr(k, mapping);
  return out;
}

}  // namespace

Clause map_clause(const Clause& c, const std::map<Symbol, Symbol>& mapping) {
  Clause out;
  out.head = map_atom(c.head, mapping);
  out.body.reserve(c.body.size());
  for (auto& l : c.body) {
    Literal nl = l;
    switch (l.kind) {
      case Literal::Kind::Positive:
      case Literal::Kind::Negative:
        nl.atom = map_atom(l.atom, mapping);
        break;
      case Literal::Kind::Arith:
        nl.result = map_term(l.result, mapping);
        nl.expr = map_expr(l.expr, mapping);
        break;
      case Literal::Kind::Compare:
        nl.lhs = map_term(l.lhs, mapping);
        nl.rhs = map_term(l.rhs, mapping);
        break;
    }
    out.body.push_back(std::move(nl));
  }
  return out;
}

Theory apply_morphism(const ResolvedMorphism& r) {
  Theory out;
  out.signature = r.image_signature();
  out.clauses.reserve(r.source.clauses.size());
  for (auto& c : r.source.clauses) out.clauses.push_back(map_clause(c, r.mapping));
  return out;
}

namespace {

void body_predicates(const Clause& c, std::set<Symbol>& out) {
  for (auto& l : c.body)
    if (l.kind == Literal::Kind::Positive || l.kind == Literal::Kind::Negative)
      out.insert(l.atom.pred);
}

}  // namespace

Theory eliminate_dead_axioms(const Theory& t, const std::set<Symbol>& visible) {
  for (auto& v : visible) {
    const Symbol* s = t.signature.find(v.name);
    if (!s || *s != v)
      throw Error(ErrKind::UndeclaredSymbol,
                  "visible symbol '" + v.name + "' is not declared in the theory");
  }

  // Edges head -> body predicate; reachable-from-visible heads are kept.
  std::map<Symbol, std::set<Symbol>> deps;
  for (auto& c : t.clauses) body_predicates(c, deps[c.head.pred]);

  std::set<Symbol> keep;
  std::vector<Symbol> work;
  for (auto& v : visible)
    if (v.kind == SymbolKind::Predicate && keep.insert(v).second) work.push_back(v);
  while (!work.empty()) {
    Symbol p = work.back();
    work.pop_back();
    auto it = deps.find(p);
    if (it == deps.end()) continue;
    for (auto& q : it->second)
      if (keep.insert(q).second) work.push_back(q);
  }

  Theory out;
  out.signature = t.signature;
  for (auto& c : t.clauses)
    if (keep.count(c.head.pred)) out.clauses.push_back(c);
  return out;
}

ResolvedMorphism compose(const ResolvedMorphism& r2, const ResolvedMorphism& r1) {
  ResolvedMorphism out;
  out.name = r2.name + "." + r1.name;
  out.source = r1.source;
  for (auto& [src, mid] : r1.mapping) {
    auto it = r2.mapping.find(mid);
    if (it == r2.mapping.end())
      throw Error(ErrKind::UnknownSourceSymbol,
                  "composition undefined: '" + mid.name + "' has no image under '" + r2.name +
                      "'");
    out.mapping.emplace(src, it->second);
    if (r1.hidden.count(src) || r2.hidden.count(mid)) out.hidden.insert(src);
  }
  return out;
}

ResolvedMorphism identity_morphism(const FlatPattern& p) {
  ResolvedMorphism r;
  r.name = p.name;
  r.source = p;
  for (auto& [_, s] : p.signature) r.mapping.emplace(s, s);
  return r;
}

}  // namespace kpc
