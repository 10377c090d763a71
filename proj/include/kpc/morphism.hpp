#pragma once
// Renaming morphisms: validation, completion with deterministic fresh names
// for unmapped symbols, clause-preserving application, and reachability-based
// dead-axiom elimination.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "kpc/core.hpp"
#include "kpc/parser.hpp"

namespace kpc {

// A pattern flattened over its uses-closure: self-contained signature plus
// the deduplicated clause list, with the defining pattern per clause.
struct FlatPattern {
  std::string name;
  Signature signature;
  std::vector<Clause> clauses;
  std::vector<std::string> clause_origins;  // parallel to clauses
};

// Signature plus clauses; the shape a morphism application produces.
struct Theory {
  Signature signature;
  std::vector<Clause> clauses;
};

// Total, injective, kind- and arity-preserving symbol renaming over a
// flattened source pattern. Unmapped symbols carry generated hidden names.
struct ResolvedMorphism {
  std::string name;
  FlatPattern source;
  std::map<Symbol, Symbol> mapping;  // total over source.signature
  std::set<Symbol> hidden;           // source symbols that were gensym-hidden

  const Symbol& image(const Symbol& s) const { return mapping.at(s); }
  Signature image_signature() const;          // full image, hidden included
  Signature visible_image_signature() const;  // image minus hidden names
};

struct MorphismIssue {
  ErrKind kind;  // DoubleMapping | UnknownSourceSymbol | TargetSignatureConflict | NonInjective
  std::string source_symbol;
  std::string target_symbol;
  std::string message;
};

// Checks m against its flattened source and the (possibly empty) signature
// of the target the morphed theory will join. Empty report == valid.
std::vector<MorphismIssue> validate_morphism(const MorphismSource& m, const FlatPattern& source,
                                             const Signature& target_sig);

// Advisory only: pairs whose target already exists in target_sig under a
// different name mapping (isa-style identity pairs are expected plumbing
// and not reported).
std::vector<std::string> lint_morphism_overlaps(const MorphismSource& m,
                                                const FlatPattern& source,
                                                const Signature& target_sig);

// Totalizes the mapping: every unmapped or explicitly hidden source symbol
// gets the fresh name hidden:<morphism>:<counter>:<source-name>, preserving
// kind and arity. counter distinguishes repeated applications within one
// assembly. pre: validate_morphism(m, source, *) reported no source-side
// issues (throws on violations it would have reported).
ResolvedMorphism complete_morphism(const MorphismSource& m, const FlatPattern& source,
                                   int application_counter = 0);

// Rewrites every symbol occurrence through the mapping. Clause count, body
// order, literal structure and variable names are unchanged; the output
// signature is the image of the source signature.
Theory apply_morphism(const ResolvedMorphism& r);

// One clause through a symbol mapping that must cover every occurring symbol.
Clause map_clause(const Clause& c, const std::map<Symbol, Symbol>& mapping);

// Keeps exactly the clauses whose head predicate backward-reaches a visible
// predicate in the head -> body-predicate dependency graph. The model
// restricted to visible predicates is unchanged for every fact base.
// pre: visible names are declared in t.signature.
Theory eliminate_dead_axioms(const Theory& t, const std::set<Symbol>& visible);

// r2 after r1; defined when r1's image symbols cover r2's domain.
ResolvedMorphism compose(const ResolvedMorphism& r2, const ResolvedMorphism& r1);

// The identity renaming of a flattened pattern (handy for tests and
// identity includes).
ResolvedMorphism identity_morphism(const FlatPattern& p);

}  // namespace kpc
