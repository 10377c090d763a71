#pragma once
// Ground-instance check that renaming preserves meaning: a morphed pattern
// evaluated over a fact base must agree with (a) the source pattern over
// back-translated facts, image taken afterwards, and (b) the source pattern
// joined to the target vocabulary by bidirectional bridge rules. Agreement
// is checked on the model restricted to the non-hidden target vocabulary.

#include <random>

#include "kpc/engine.hpp"
#include "kpc/morphism.hpp"

namespace kpc {

struct BridgeRuleSet {
  // For each non-hidden mapped predicate p -> q of arity n, exactly
  // q(X1..Xn) :- p(X1..Xn) and p(X1..Xn) :- q(X1..Xn). Identity pairs keep
  // their (tautological) rules.
  std::vector<Clause> rules;
  // Constants transfer by substitution, not rules.
  std::map<Symbol, Symbol> constant_map;  // source constant -> target constant
};

BridgeRuleSet generate_bridge_rules(const ResolvedMorphism& r);

// Inverse renaming of ground facts over the target vocabulary. Every fact
// predicate must be a non-hidden image (UntranslatableFact otherwise);
// constants that are images map back, anything else passes through as a
// shared individual.
std::vector<Atom> translate_facts(const std::vector<Atom>& facts, const ResolvedMorphism& r);

struct EquivalenceReport {
  bool equivalent = false;
  size_t atoms_direct = 0;      // morphed pattern + facts
  size_t atoms_translated = 0;  // source pattern + translated facts, forward image
  size_t atoms_bridged = 0;     // source pattern + bridge rules + facts
  // Atoms a route derives that are not common to all three.
  std::vector<Atom> only_direct, only_translated, only_bridged;
  // Vocabulary-capture warnings: target names or fact constants that
  // collide with distinct source symbols make the comparison unreliable.
  std::vector<std::string> notes;

  std::string to_text() const;
};

// pre: r is resolved over p; facts are ground atoms over r's non-hidden
// image vocabulary plus shared individuals and integers.
EquivalenceReport check_equivalence(const FlatPattern& p, const ResolvedMorphism& r,
                                    const std::vector<Atom>& facts);

// Deterministic-for-a-seed fact base over r's non-hidden image vocabulary:
// fresh individuals i1.., declared image constants and small integers as
// arguments, biased toward well-typed last-argument concepts.
std::vector<Atom> random_fact_base(const ResolvedMorphism& r, std::mt19937& rng,
                                   int max_individuals = 6, int max_facts = 12);

}  // namespace kpc
