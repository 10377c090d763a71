#pragma once
// Pattern libraries: the uses-inclusion DAG, flattening, KB assembly from
// manifests, and DOT export of the inclusion/morphism graph.

#include <map>
#include <string>
#include <vector>

#include "kpc/morphism.hpp"
#include "kpc/parser.hpp"

namespace kpc {

class PatternLibrary {
 public:
  // Parses and registers a pattern in dependency context: every pattern it
  // uses must already be loadable. add_pattern_text defers resolution until
  // finalize(); prefer load helpers below for whole directories.
  void add_pattern_text(std::string text, std::string filename = {});
  void add_morphism(MorphismSource m);

  // Parses all queued pattern texts in topological uses order.
  // Throws UnknownPattern / CyclicUses / parse errors.
  void finalize();

  bool has_pattern(const std::string& name) const { return patterns_.count(name) != 0; }
  bool has_morphism(const std::string& name) const { return morphisms_.count(name) != 0; }
  const PatternSource& pattern(const std::string& name) const;
  const MorphismSource& morphism(const std::string& name) const;
  std::vector<std::string> pattern_names() const;   // name order
  std::vector<std::string> morphism_names() const;  // name order

  // Merged signature of a pattern's strict uses-closure (without its own
  // declarations); what its axioms may reference beyond local declarations.
  Signature ambient_for(const std::string& name) const;

  // Lenient union of all flattened pattern signatures and all morphism
  // image signatures; first declaration of a name wins. For checking fact
  // files outside a manifest.
  Signature lenient_fact_signature() const;

 private:
  struct Pending {
    std::string text;
    std::string filename;
  };
  Signature ambient_for_uses(const std::vector<std::string>& uses) const;
  std::map<std::string, PatternSource> patterns_;
  std::map<std::string, MorphismSource> morphisms_;
  std::vector<Pending> pending_;

  friend std::vector<std::string> resolve_uses_order(const PatternLibrary& lib);
  friend FlatPattern flatten_pattern(const std::string& name, const PatternLibrary& lib);
};

// Dependencies-first order over all patterns. Throws CyclicUses with the
// cycle path, UnknownPattern for dangling uses.
std::vector<std::string> resolve_uses_order(const PatternLibrary& lib);

// Self-contained pattern: merged uses-closure signature, clauses in
// dependencies-first order, set semantics on structurally equal clauses
// (canonical variable naming). Every clause passes the safety check.
FlatPattern flatten_pattern(const std::string& name, const PatternLibrary& lib);

PatternSource flat_to_source(const FlatPattern& p);  // uses = [], for re-flatten tests

struct ClauseOrigin {
  std::string pattern;    // defining pattern
  std::string morphism;   // empty for identity includes and rule files
  int application = -1;   // manifest application index; -1 for rule files
  std::string file;       // rule file path when applicable
};

struct AssembledKB {
  std::string name;
  Signature signature;
  std::vector<Clause> rules;
  std::vector<ClauseOrigin> rule_origins;  // parallel to rules
  std::vector<Atom> facts;
  std::vector<std::string> fact_origins;  // parallel to facts: source file
  std::vector<std::string> warnings;      // morphism target-overlap lints
};

// Applies each manifest entry in order (morph applications use the entry
// index as the hidden-name counter), merges signatures, then loads facts
// (auto-declaring unknown arity-0 constants as individuals) and rule files.
// Every rule must be safe against the final signature. Errors are annotated
// with the application index.
AssembledKB assemble_kb(const Manifest& man, const PatternLibrary& lib);

// DOT export: one node per pattern, morphism (standing for its morphed
// theory) and KB; thin edges used -> user and theory -> KB, bold edges
// source pattern -> morphism. Nodes and edges are emitted in lexicographic
// order; output is byte-stable.
std::string export_inclusion_graph(const PatternLibrary& lib, const std::vector<Manifest>& mans);

// Whole file as a string; throws FileNotFound.
std::string read_text_file(const std::string& path);

}  // namespace kpc
