#pragma once
// Core term language: symbols, signatures, terms, literals, clauses.
// All values are immutable once constructed and order deterministically,
// so models, reports and rendered output are reproducible byte for byte.

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace kpc {

enum class ErrKind {
  SyntaxError,
  DuplicateSignatureEntry,
  UndeclaredSymbolInAxiom,
  DuplicateSourceKey,
  NonGroundFact,
  EmptyManifest,
  InvalidDeclaration,
  ArityMismatch,
  ConflictingDeclaration,
  UndeclaredSymbol,
  UnsafeClause,
  CyclicUses,
  UnknownPattern,
  UnknownMorphism,
  DoubleMapping,
  UnknownSourceSymbol,
  TargetSignatureConflict,
  NonInjective,
  HiddenNameCollision,
  UnstratifiableNegation,
  ArithmeticOnUnbound,
  UnknownPredicate,
  UnsafeQuery,
  UntranslatableFact,
  FileNotFound,
};

const char* errkind_name(ErrKind k);

// Single error type for everything that aborts an operation. Validation
// passes that must report *all* problems (clause safety, morphism checks)
// return typed report vectors instead of throwing.
struct Error : std::runtime_error {
  ErrKind kind;
  std::string file;  // empty when not file-anchored
  int line = -1;
  int col = -1;

  Error(ErrKind k, const std::string& msg, std::string file_ = {}, int line_ = -1,
        int col_ = -1);
};

enum class SymbolKind { Predicate, Concept, Individual };

const char* symbolkind_name(SymbolKind k);

// A non-logical symbol. Predicates have arity >= 1; concepts and
// individuals are arity-0 constants. Equality is on all three fields.
struct Symbol {
  std::string name;
  SymbolKind kind = SymbolKind::Individual;
  int arity = 0;

  auto operator<=>(const Symbol&) const = default;
  bool operator==(const Symbol&) const = default;
};

Symbol make_pred(std::string name, int arity);
Symbol make_concept(std::string name);
Symbol make_individual(std::string name);

// True for names the surface grammar may introduce: nonempty, no whitespace
// or reserved punctuation, not keyword-shaped. Names created by the hiding
// machinery start with "hidden:" and bypass this check.
bool valid_symbol_name(const std::string& name);
bool is_hidden_name(const std::string& name);

// Name -> symbol map with no overloading: one (kind, arity) per name.
class Signature {
 public:
  // Merge semantics: redeclaring an identical symbol is a no-op; a (kind,
  // arity) mismatch throws ConflictingDeclaration.
  void declare(const Symbol& s);
  const Symbol* find(const std::string& name) const;
  bool contains_name(const std::string& name) const { return find(name) != nullptr; }
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  std::vector<Symbol> symbols() const;     // name order
  std::vector<Symbol> predicates() const;  // name order, kind == Predicate

  bool operator==(const Signature&) const = default;

 private:
  std::map<std::string, Symbol> entries_;
};

// Associative with the empty signature as identity; throws
// ConflictingDeclaration when the same name carries different (kind, arity).
Signature merge_signatures(const Signature& base, const Signature& ext);

// Variables start with an uppercase letter and are never declared; any
// declared name resolves to a constant regardless of case.
struct Variable {
  std::string name;
  auto operator<=>(const Variable&) const = default;
  bool operator==(const Variable&) const = default;
};

// variable | arity-0 constant | integer. The only value type is the integer.
using Term = std::variant<Variable, Symbol, long long>;

bool is_var(const Term& t);
bool is_const(const Term& t);
bool is_int(const Term& t);
bool is_ground(const Term& t);

struct Atom {
  Symbol pred;
  std::vector<Term> args;  // size == pred.arity

  bool ground() const;
};

// Arithmetic expression over variables and integer literals.
struct ArithExpr {
  enum class Op { Leaf, Add, Sub, Mul, Div };
  Op op = Op::Leaf;
  Term leaf = 0LL;              // Leaf only: Variable or integer
  std::vector<ArithExpr> kids;  // size 2 otherwise

  static ArithExpr make_leaf(Term t);
  static ArithExpr make_node(Op op, ArithExpr lhs, ArithExpr rhs);
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

const char* cmpop_text(CmpOp op);

struct Literal {
  enum class Kind { Positive, Negative, Arith, Compare };
  Kind kind = Kind::Positive;
  Atom atom;           // Positive / Negative
  Term result = 0LL;   // Arith: bound-or-fresh result term
  ArithExpr expr;      // Arith
  Term lhs = 0LL;      // Compare
  Term rhs = 0LL;      // Compare
  CmpOp op = CmpOp::Eq;

  static Literal pos(Atom a);
  static Literal neg(Atom a);
  static Literal arith(Term result, ArithExpr e);
  static Literal compare(Term lhs, CmpOp op, Term rhs);
};

// Horn clause: head atom plus ordered body. Facts have an empty body.
struct Clause {
  Atom head;
  std::vector<Literal> body;
};

// Total deterministic order used for set semantics and canonical output.
int cmp(const Term& a, const Term& b);
int cmp(const Atom& a, const Atom& b);
int cmp(const ArithExpr& a, const ArithExpr& b);
int cmp(const Literal& a, const Literal& b);
int cmp(const Clause& a, const Clause& b);

bool operator==(const Atom& a, const Atom& b);
bool operator!=(const Atom& a, const Atom& b);
bool operator<(const Atom& a, const Atom& b);
bool operator==(const Clause& a, const Clause& b);
bool operator!=(const Clause& a, const Clause& b);
bool operator<(const Clause& a, const Clause& b);
bool operator==(const Literal& a, const Literal& b);

void collect_vars(const Term& t, std::vector<std::string>& out);
void collect_vars(const ArithExpr& e, std::vector<std::string>& out);
void collect_vars(const Atom& a, std::vector<std::string>& out);
std::vector<std::string> clause_vars(const Clause& c);  // first-occurrence order

// Variables renamed V0, V1, ... in first-occurrence order (head first);
// two clauses are structurally equal iff their canonical forms compare equal.
Clause canonical_clause(const Clause& c);

struct SafetyViolation {
  enum class Where { Head, NegatedLiteral, Arith, Compare };
  std::string variable;
  Where where;
  int literal_index;  // body position; -1 for the head
};

std::string safety_violation_text(const SafetyViolation& v);

// Range restriction: every variable in the head, in a negated atom, in an
// arithmetic expression, or on either side of a comparison must be bound by
// an earlier positive body atom or an earlier arithmetic result. The result
// term of an arith literal may be fresh. Empty report == safe.
// Throws UndeclaredSymbol when a clause symbol is missing from sig.
std::vector<SafetyViolation> check_clause_safety(const Clause& c, const Signature& sig);

// Rendering helpers shared by diagnostics and the canonical renderer.
// Hidden names are emitted in the quoted form the grammar accepts.
std::string symbol_text(const Symbol& s);
std::string term_text(const Term& t);
std::string expr_text(const ArithExpr& e);
std::string atom_text(const Atom& a);
std::string literal_text(const Literal& l);
std::string clause_text(const Clause& c);

}  // namespace kpc
