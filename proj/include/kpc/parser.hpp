#pragma once
// Surface language for pattern, morphism, manifest, fact and rule files.
//
//   pattern NAME {
//     summary "..."            (optional)
//     description "..."        (optional)
//     uses a, b                (optional)
//     signature { concept N  individual N  pred N/arity ... }
//     axioms { head :- lit, ... .  ... }
//   }
//
//   morphism NAME { source PAT   map src -> tgt ...   hide sym ... }
//
//   kb NAME { apply MOR | include PAT | facts "path" | rules "path" ... }
//
// Clause syntax is Prolog-like: negation '\+', arithmetic 'V is E' over
// + - * // (integer division), comparisons < <= > >= = \=, '%' comments.
// Identifiers may contain internal hyphens (reachable-from); subtraction
// therefore needs spaces around '-'. Variables are undeclared identifiers
// with an uppercase initial; any declared name is a constant. Quoted names
// ('hidden:...') are reserved for the renaming machinery's fresh symbols.

#include <optional>
#include <string>
#include <vector>

#include "kpc/core.hpp"

namespace kpc {

struct PatternSource {
  std::string name;
  std::string summary;      // may be empty
  std::string description;  // may be empty
  std::vector<std::string> uses;
  Signature declared_signature;  // local declarations only
  std::vector<Clause> clauses;

  bool operator==(const PatternSource&) const = default;
};

struct MorphismSource {
  std::string name;
  std::string source_pattern;
  std::vector<std::pair<std::string, std::string>> pairs;  // file order
  std::vector<std::string> explicit_hides;

  bool operator==(const MorphismSource&) const = default;
};

struct Manifest {
  struct Application {
    enum class Kind { Morphism, Include };
    Kind kind;
    std::string name;
    bool operator==(const Application&) const = default;
  };

  std::string kb_name;
  std::vector<Application> applications;
  std::vector<std::string> fact_files;
  std::vector<std::string> rule_files;
  std::string base_dir;  // directory the file paths resolve against

  bool operator==(const Manifest& o) const {
    return kb_name == o.kb_name && applications == o.applications &&
           fact_files == o.fact_files && rule_files == o.rule_files;
  }
};

// ambient: merged signature of the uses-closure; local declarations are
// checked against and merged over it. With no ambient only local
// declarations are in scope.
PatternSource parse_pattern(const std::string& text, const Signature* ambient = nullptr,
                            const std::string& filename = {});

// Cheap prescan of a pattern file: name and uses list only, no symbol
// resolution. Lets a library order whole-directory loads before full parses.
struct PatternHeader {
  std::string name;
  std::vector<std::string> uses;
};
PatternHeader scan_pattern_header(const std::string& text, const std::string& filename = {});

MorphismSource parse_morphism(const std::string& text, const std::string& filename = {});

Manifest parse_manifest(const std::string& text, const std::string& filename = {});

// Fact files: ground atoms, one statement per line. Constants resolve
// against sig when given; undeclared lowercase identifiers become
// provisional individuals, undeclared uppercase identifiers are variables
// and make the fact non-ground (NonGroundFact).
std::vector<Atom> parse_facts(const std::string& text, const Signature* sig = nullptr,
                              const std::string& filename = {});

// Rule files: bare clause sequence resolved against sig.
std::vector<Clause> parse_rules(const std::string& text, const Signature& sig,
                                const std::string& filename = {});

// Conjunctive query "?- lit, ... ." resolved against sig.
std::vector<Literal> parse_query(const std::string& text, const Signature& sig);

// Canonical text: parse(render(x)) == x, and any two sources that parse
// equal render identically.
std::string render(const PatternSource& p);
std::string render(const MorphismSource& m);
std::string render(const Manifest& m);
std::string render_facts(const std::vector<Atom>& facts);

}  // namespace kpc
