#pragma once
// Stratified bottom-up evaluation of an assembled KB to its least fixpoint,
// a deliberately naive reference evaluator, conjunctive queries over the
// completed model, and integrity checking.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "kpc/core.hpp"
#include "kpc/library.hpp"

namespace kpc {

using Tuple = std::vector<Term>;  // ground argument vector
using Bindings = std::map<std::string, Term>;

struct StratificationReport {
  // strata[i] lists the predicates of level i, name order. Positive
  // dependencies may stay inside a level; every negative dependency crosses
  // strictly upward.
  std::vector<std::vector<Symbol>> strata;
  // (negated body predicate, depending head predicate), body-order dedup.
  std::vector<std::pair<Symbol, Symbol>> negative_edges;

  int level_of(const Symbol& pred) const;  // -1 when absent
};

// First derivation of an atom. rule_index == -1 marks an input fact.
struct Derivation {
  int rule_index = -1;
  Bindings bindings;
};

struct Model {
  Signature signature;
  StratificationReport strata;
  std::map<Symbol, std::set<Tuple>> relations;
  std::map<Atom, Derivation> provenance;

  bool contains(const Atom& a) const;
  const std::set<Tuple>& tuples(const Symbol& pred) const;
  std::vector<Atom> atoms() const;  // predicate name order, then tuple order
  size_t atom_count() const;

  bool operator==(const Model& o) const { return relations == o.relations; }
};

// Minimal-level stratification of the rule dependency graph. Throws
// UnstratifiableNegation with a cycle path when a predicate depends
// negatively on itself through any loop.
StratificationReport stratify(const AssembledKB& kb);

// Semi-naive fixpoint: per stratum, delta-driven re-firing; body literals
// match left to right; negation consults the completed lower strata;
// 'V is E' evaluates E under the current bindings (non-integer operands or
// division by zero fail the literal); order comparisons require integers,
// = and \= compare ground terms structurally.
Model evaluate(const AssembledKB& kb);

// Reference evaluator: re-fires every rule against the full relations until
// nothing changes. Same semantics, no delta bookkeeping; kept dumb on
// purpose so the two implementations can check each other.
Model evaluate_naive(const AssembledKB& kb);

// All substitutions over the goal's variables, lexicographically ordered.
// Goals must be range-restricted as a conjunction (UnsafeQuery) and mention
// only model predicates (UnknownPredicate).
std::vector<Bindings> query(const Model& m, const std::vector<Literal>& goals);

struct IntegrityConstraint {
  enum class Kind { Acyclic, Denial };
  Kind kind = Kind::Acyclic;
  std::string name;           // report label
  Symbol pred;                // Acyclic: a binary predicate
  std::vector<Literal> body;  // Denial: must have no satisfying substitution

  static IntegrityConstraint acyclic(Symbol pred);
  static IntegrityConstraint denial(std::string name, std::vector<Literal> body);
};

struct IntegrityViolation {
  std::string constraint;
  std::string detail;  // rendered witness, e.g. "reaches(a, a)" or bindings
};

// Violations are data, not errors: acyclic(p) reports every p(x, x) in the
// model; a denial reports every substitution satisfying its body.
std::vector<IntegrityViolation> check_integrity(const Model& m,
                                                const std::vector<IntegrityConstraint>& cs);

// Every predicate consulted in a's derivation tree: a's own predicate, the
// predicates of the positive body atoms recursively, and the predicates of
// negated body literals (consulted, not derived).
std::set<Symbol> derivation_predicates(const Model& m, const AssembledKB& kb, const Atom& a);

}  // namespace kpc
