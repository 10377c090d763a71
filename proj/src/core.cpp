#include "kpc/core.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace kpc {

const char* errkind_name(ErrKind k) {
  switch (k) {
    case ErrKind::SyntaxError: return "SyntaxError";
    case ErrKind::DuplicateSignatureEntry: return "DuplicateSignatureEntry";
    case ErrKind::UndeclaredSymbolInAxiom: return "UndeclaredSymbolInAxiom";
    case ErrKind::DuplicateSourceKey: return "DuplicateSourceKey";
    case ErrKind::NonGroundFact: return "NonGroundFact";
    case ErrKind::EmptyManifest: return "EmptyManifest";
    case ErrKind::InvalidDeclaration: return "InvalidDeclaration";
    case ErrKind::ArityMismatch: return "ArityMismatch";
    case ErrKind::ConflictingDeclaration: return "ConflictingDeclaration";
    case ErrKind::UndeclaredSymbol: return "UndeclaredSymbol";
    case ErrKind::UnsafeClause: return "UnsafeClause";
    case ErrKind::CyclicUses: return "CyclicUses";
    case ErrKind::UnknownPattern: return "UnknownPattern";
    case ErrKind::UnknownMorphism: return "UnknownMorphism";
    case ErrKind::DoubleMapping: return "DoubleMapping";
    case ErrKind::UnknownSourceSymbol: return "UnknownSourceSymbol";
    case ErrKind::TargetSignatureConflict: return "TargetSignatureConflict";
    case ErrKind::NonInjective: return "NonInjective";
    case ErrKind::HiddenNameCollision: return "HiddenNameCollision";
    case ErrKind::UnstratifiableNegation: return "UnstratifiableNegation";
    case ErrKind::ArithmeticOnUnbound: return "ArithmeticOnUnbound";
    case ErrKind::UnknownPredicate: return "UnknownPredicate";
    case ErrKind::UnsafeQuery: return "UnsafeQuery";
    case ErrKind::UntranslatableFact: return "UntranslatableFact";
    case ErrKind::FileNotFound: return "FileNotFound";
  }
  return "Error";
}

static std::string format_error(ErrKind k, const std::string& msg, const std::string& file,
                                int line, int col) {
  std::ostringstream os;
  if (!file.empty()) {
    os << file << ":";
    if (line >= 0) {
      os << line << ":";
      if (col >= 0) os << col << ":";
    }
    os << " ";
  } else if (line >= 0) {
    os << "line " << line;
    if (col >= 0) os << ", col " << col;
    os << ": ";
  }
  os << "error[" << errkind_name(k) << "]: " << msg;
  return os.str();
}

Error::Error(ErrKind k, const std::string& msg, std::string file_, int line_, int col_)
    : std::runtime_error(format_error(k, msg, file_, line_, col_)),
      kind(k),
      file(std::move(file_)),
      line(line_),
      col(col_) {}

const char* symbolkind_name(SymbolKind k) {
  switch (k) {
    case SymbolKind::Predicate: return "pred";
    case SymbolKind::Concept: return "concept";
    case SymbolKind::Individual: return "individual";
  }
  return "?";
}

Symbol make_pred(std::string name, int arity) {
  return Symbol{std::move(name), SymbolKind::Predicate, arity};
}
Symbol make_concept(std::string name) { return Symbol{std::move(name), SymbolKind::Concept, 0}; }
Symbol make_individual(std::string name) {
  return Symbol{std::move(name), SymbolKind::Individual, 0};
}

bool is_hidden_name(const std::string& name) { return name.rfind("hidden:", 0) == 0; }

bool valid_symbol_name(const std::string& name) {
  if (name.empty()) return false;
  auto head = name[0];
  if (!(std::isalpha(static_cast<unsigned char>(head)) || head == '_')) return false;
  for (size_t i = 0; i < name.size(); ++i) {
    char c = name[i];
    bool word = std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    if (word) continue;
    // Internal hyphen only, with word characters on both sides.
    if (c == '-' && i + 1 < name.size() &&
        (std::isalnum(static_cast<unsigned char>(name[i + 1])) || name[i + 1] == '_'))
      continue;
    return false;
  }
  return true;
}

void Signature::declare(const Symbol& s) {
  auto it = entries_.find(s.name);
  if (it == entries_.end()) {
    entries_.emplace(s.name, s);
    return;
  }
  if (it->second == s) return;
  std::ostringstream os;
  os << "symbol '" << s.name << "' declared as " << symbolkind_name(it->second.kind);
  if (it->second.kind == SymbolKind::Predicate) os << "/" << it->second.arity;
  os << " and as " << symbolkind_name(s.kind);
  if (s.kind == SymbolKind::Predicate) os << "/" << s.arity;
  throw Error(ErrKind::ConflictingDeclaration, os.str());
}

const Symbol* Signature::find(const std::string& name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<Symbol> Signature::symbols() const {
  std::vector<Symbol> out;
  out.reserve(entries_.size());
  for (auto& [_, s] : entries_) out.push_back(s);
  return out;
}

std::vector<Symbol> Signature::predicates() const {
  std::vector<Symbol> out;
  for (auto& [_, s] : entries_)
    if (s.kind == SymbolKind::Predicate) out.push_back(s);
  return out;
}

Signature merge_signatures(const Signature& base, const Signature& ext) {
  Signature out = base;
  for (auto& [_, s] : ext) out.declare(s);
  return out;
}

bool is_var(const Term& t) { return std::holds_alternative<Variable>(t); }
bool is_const(const Term& t) { return std::holds_alternative<Symbol>(t); }
bool is_int(const Term& t) { return std::holds_alternative<long long>(t); }
bool is_ground(const Term& t) { return !is_var(t); }

bool Atom::ground() const {
  return std::all_of(args.begin(), args.end(), [](const Term& t) { return is_ground(t); });
}

ArithExpr ArithExpr::make_leaf(Term t) {
  ArithExpr e;
  e.op = Op::Leaf;
  e.leaf = std::move(t);
  return e;
}

ArithExpr ArithExpr::make_node(Op op, ArithExpr lhs, ArithExpr rhs) {
  ArithExpr e;
  e.op = op;
  e.kids.push_back(std::move(lhs));
  e.kids.push_back(std::move(rhs));
  return e;
}

const char* cmpop_text(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "\\=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

Literal Literal::pos(Atom a) {
  Literal l;
  l.kind = Kind::Positive;
  l.atom = std::move(a);
  return l;
}
Literal Literal::neg(Atom a) {
  Literal l;
  l.kind = Kind::Negative;
  l.atom = std::move(a);
  return l;
}
Literal Literal::arith(Term result, ArithExpr e) {
  Literal l;
  l.kind = Kind::Arith;
  l.result = std::move(result);
  l.expr = std::move(e);
  return l;
}
Literal Literal::compare(Term lhs, CmpOp op, Term rhs) {
  Literal l;
  l.kind = Kind::Compare;
  l.lhs = std::move(lhs);
  l.rhs = std::move(rhs);
  l.op = op;
  return l;
}

static int cmp3(long long a, long long b) { return a < b ? -1 : a > b ? 1 : 0; }
static int cmp3(int a, int b) { return a < b ? -1 : a > b ? 1 : 0; }
static int cmp3(const std::string& a, const std::string& b) { return a.compare(b); }

static int cmp(const Symbol& a, const Symbol& b) {
  if (int c = cmp3(a.name, b.name)) return c;
  if (int c = cmp3(static_cast<int>(a.kind), static_cast<int>(b.kind))) return c;
  return cmp3(a.arity, b.arity);
}

int cmp(const Term& a, const Term& b) {
  if (int c = cmp3(static_cast<int>(a.index()), static_cast<int>(b.index()))) return c;
  if (is_var(a)) return cmp3(std::get<Variable>(a).name, std::get<Variable>(b).name);
  if (is_const(a)) return cmp(std::get<Symbol>(a), std::get<Symbol>(b));
  return cmp3(std::get<long long>(a), std::get<long long>(b));
}

int cmp(const Atom& a, const Atom& b) {
  if (int c = cmp(a.pred, b.pred)) return c;
  if (int c = cmp3(static_cast<long long>(a.args.size()), static_cast<long long>(b.args.size())))
    return c;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (int c = cmp(a.args[i], b.args[i])) return c;
  return 0;
}

int cmp(const ArithExpr& a, const ArithExpr& b) {
  if (int c = cmp3(static_cast<int>(a.op), static_cast<int>(b.op))) return c;
  if (a.op == ArithExpr::Op::Leaf) return cmp(a.leaf, b.leaf);
  for (size_t i = 0; i < 2; ++i)
    if (int c = cmp(a.kids[i], b.kids[i])) return c;
  return 0;
}

int cmp(const Literal& a, const Literal& b) {
  if (int c = cmp3(static_cast<int>(a.kind), static_cast<int>(b.kind))) return c;
  switch (a.kind) {
    case Literal::Kind::Positive:
    case Literal::Kind::Negative:
      return cmp(a.atom, b.atom);
    case Literal::Kind::Arith:
      if (int c = cmp(a.result, b.result)) return c;
      return cmp(a.expr, b.expr);
    case Literal::Kind::Compare:
      if (int c = cmp3(static_cast<int>(a.op), static_cast<int>(b.op))) return c;
      if (int c = cmp(a.lhs, b.lhs)) return c;
      return cmp(a.rhs, b.rhs);
  }
  return 0;
}

int cmp(const Clause& a, const Clause& b) {
  if (int c = cmp(a.head, b.head)) return c;
  if (int c = cmp3(static_cast<long long>(a.body.size()), static_cast<long long>(b.body.size())))
    return c;
  for (size_t i = 0; i < a.body.size(); ++i)
    if (int c = cmp(a.body[i], b.body[i])) return c;
  return 0;
}

bool operator==(const Atom& a, const Atom& b) { return cmp(a, b) == 0; }
bool operator!=(const Atom& a, const Atom& b) { return cmp(a, b) != 0; }
bool operator<(const Atom& a, const Atom& b) { return cmp(a, b) < 0; }
bool operator==(const Clause& a, const Clause& b) { return cmp(a, b) == 0; }
bool operator!=(const Clause& a, const Clause& b) { return cmp(a, b) != 0; }
bool operator<(const Clause& a, const Clause& b) { return cmp(a, b) < 0; }
bool operator==(const Literal& a, const Literal& b) { return cmp(a, b) == 0; }

void collect_vars(const Term& t, std::vector<std::string>& out) {
  if (is_var(t)) out.push_back(std::get<Variable>(t).name);
}

void collect_vars(const ArithExpr& e, std::vector<std::string>& out) {
  if (e.op == ArithExpr::Op::Leaf) {
    collect_vars(e.leaf, out);
    return;
  }
  for (auto& k : e.kids) collect_vars(k, out);
}

void collect_vars(const Atom& a, std::vector<std::string>& out) {
  for (auto& t : a.args) collect_vars(t, out);
}

static void collect_vars(const Literal& l, std::vector<std::string>& out) {
  switch (l.kind) {
    case Literal::Kind::Positive:
    case Literal::Kind::Negative:
      collect_vars(l.atom, out);
      break;
    case Literal::Kind::Arith:
      collect_vars(l.result, out);
      collect_vars(l.expr, out);
      break;
    case Literal::Kind::Compare:
      collect_vars(l.lhs, out);
      collect_vars(l.rhs, out);
      break;
  }
}

std::vector<std::string> clause_vars(const Clause& c) {
  std::vector<std::string> seq;
  collect_vars(c.head, seq);
  for (auto& l : c.body) collect_vars(l, seq);
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (auto& v : seq)
    if (seen.insert(v).second) out.push_back(v);
  return out;
}

namespace {

Term rename_term(const Term& t, const std::map<std::string, std::string>& ren) {
  if (!is_var(t)) return t;
  return Variable{ren.at(std::get<Variable>(t).name)};
}

ArithExpr rename_expr(const ArithExpr& e, const std::map<std::string, std::string>& ren) {
  ArithExpr out = e;
  if (out.op == ArithExpr::Op::Leaf) {
    out.leaf = rename_term(out.leaf, ren);
    return out;
  }
  for (auto& k : out.kids) k = rename_expr(k, ren);
  return out;
}

Atom rename_atom(const Atom& a, const std::map<std::string, std::string>& ren) {
  Atom out = a;
  for (auto& t : out.args) t = rename_term(t, ren);
  return out;
}

}  // namespace

Clause canonical_clause(const Clause& c) {
  std::map<std::string, std::string> ren;
  int n = 0;
  for (auto& v : clause_vars(c)) ren.emplace(v, "V" + std::to_string(n++));
  Clause out;
  out.head = rename_atom(c.head, ren);
  for (auto& l : c.body) {
    Literal nl = l;
    switch (l.kind) {
      case Literal::Kind::Positive:
      case Literal::Kind::Negative:
        nl.atom = rename_atom(l.atom, ren);
        break;
      case Literal::Kind::Arith:
        nl.result = rename_term(l.result, ren);
        nl.expr = rename_expr(l.expr, ren);
        break;
      case Literal::Kind::Compare:
        nl.lhs = rename_term(l.lhs, ren);
        nl.rhs = rename_term(l.rhs, ren);
        break;
    }
    out.body.push_back(std::move(nl));
  }
  return out;
}

std::string safety_violation_text(const SafetyViolation& v) {
  std::ostringstream os;
  os << "unsafe variable '" << v.variable << "' in ";
  switch (v.where) {
    case SafetyViolation::Where::Head: os << "the head"; break;
    case SafetyViolation::Where::NegatedLiteral:
      os << "negated literal at body position " << v.literal_index;
      break;
    case SafetyViolation::Where::Arith:
      os << "arithmetic literal at body position " << v.literal_index;
      break;
    case SafetyViolation::Where::Compare:
      os << "comparison at body position " << v.literal_index;
      break;
  }
  os << " (must be bound by an earlier positive body atom)";
  return os.str();
}

namespace {

void require_declared(const Symbol& s, const Signature& sig, const Clause& c) {
  const Symbol* d = sig.find(s.name);
  if (d && *d == s) return;
  std::ostringstream os;
  os << "symbol '" << s.name << "' (" << symbolkind_name(s.kind);
  if (s.kind == SymbolKind::Predicate) os << "/" << s.arity;
  os << ") in clause '" << clause_text(c) << "' is not declared";
  throw Error(ErrKind::UndeclaredSymbol, os.str());
}

void require_atom_declared(const Atom& a, const Signature& sig, const Clause& c) {
  require_declared(a.pred, sig, c);
  for (auto& t : a.args)
    if (is_const(t)) require_declared(std::get<Symbol>(t), sig, c);
}

void check_unbound(const Term& t, const std::set<std::string>& bound,
                   SafetyViolation::Where where, int idx, std::vector<SafetyViolation>& out) {
  std::vector<std::string> vars;
  collect_vars(t, vars);
  for (auto& v : vars)
    if (!bound.count(v)) out.push_back({v, where, idx});
}

void check_unbound(const ArithExpr& e, const std::set<std::string>& bound,
                   SafetyViolation::Where where, int idx, std::vector<SafetyViolation>& out) {
  std::vector<std::string> vars;
  collect_vars(e, vars);
  for (auto& v : vars)
    if (!bound.count(v)) out.push_back({v, where, idx});
}

}  // namespace

std::vector<SafetyViolation> check_clause_safety(const Clause& c, const Signature& sig) {
  require_atom_declared(c.head, sig, c);
  for (auto& l : c.body)
    if (l.kind == Literal::Kind::Positive || l.kind == Literal::Kind::Negative)
      require_atom_declared(l.atom, sig, c);

  std::vector<SafetyViolation> out;
  std::set<std::string> bound;
  for (size_t i = 0; i < c.body.size(); ++i) {
    const Literal& l = c.body[i];
    int idx = static_cast<int>(i);
    switch (l.kind) {
      case Literal::Kind::Positive: {
        std::vector<std::string> vars;
        collect_vars(l.atom, vars);
        bound.insert(vars.begin(), vars.end());
        break;
      }
      case Literal::Kind::Negative:
        for (auto& t : l.atom.args)
          check_unbound(t, bound, SafetyViolation::Where::NegatedLiteral, idx, out);
        break;
      case Literal::Kind::Arith:
        check_unbound(l.expr, bound, SafetyViolation::Where::Arith, idx, out);
        // The result variable is bound by evaluation.
        if (is_var(l.result)) bound.insert(std::get<Variable>(l.result).name);
        break;
      case Literal::Kind::Compare:
        check_unbound(l.lhs, bound, SafetyViolation::Where::Compare, idx, out);
        check_unbound(l.rhs, bound, SafetyViolation::Where::Compare, idx, out);
        break;
    }
  }
  std::vector<std::string> head_vars;
  collect_vars(c.head, head_vars);
  std::set<std::string> reported;
  for (auto& v : head_vars)
    if (!bound.count(v) && reported.insert(v).second)
      out.push_back({v, SafetyViolation::Where::Head, -1});
  return out;
}

std::string symbol_text(const Symbol& s) {
  if (is_hidden_name(s.name)) return "'" + s.name + "'";
  return s.name;
}

std::string term_text(const Term& t) {
  if (is_var(t)) return std::get<Variable>(t).name;
  if (is_const(t)) return symbol_text(std::get<Symbol>(t));
  return std::to_string(std::get<long long>(t));
}

std::string expr_text(const ArithExpr& e) {
  if (e.op == ArithExpr::Op::Leaf) return term_text(e.leaf);
  const char* op = e.op == ArithExpr::Op::Add   ? "+"
                   : e.op == ArithExpr::Op::Sub ? "-"
                   : e.op == ArithExpr::Op::Mul ? "*"
                                                : "//";
  auto wrap = [](const ArithExpr& k) {
    std::string s = expr_text(k);
    return k.op == ArithExpr::Op::Leaf ? s : "(" + s + ")";
  };
  return wrap(e.kids[0]) + " " + op + " " + wrap(e.kids[1]);
}

std::string atom_text(const Atom& a) {
  std::string s = symbol_text(a.pred) + "(";
  for (size_t i = 0; i < a.args.size(); ++i) {
    if (i) s += ", ";
    s += term_text(a.args[i]);
  }
  return s + ")";
}

std::string literal_text(const Literal& l) {
  switch (l.kind) {
    case Literal::Kind::Positive: return atom_text(l.atom);
    case Literal::Kind::Negative: return "\\+ " + atom_text(l.atom);
    case Literal::Kind::Arith: return term_text(l.result) + " is " + expr_text(l.expr);
    case Literal::Kind::Compare:
      return term_text(l.lhs) + " " + cmpop_text(l.op) + " " + term_text(l.rhs);
  }
  return "?";
}

std::string clause_text(const Clause& c) {
  std::string s = atom_text(c.head);
  if (!c.body.empty()) {
    s += " :- ";
    for (size_t i = 0; i < c.body.size(); ++i) {
      if (i) s += ", ";
      s += literal_text(c.body[i]);
    }
  }
  return s + ".";
}

}  // namespace kpc
