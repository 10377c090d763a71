#include <doctest.h>

#include <algorithm>

#include "kpc/morphism.hpp"
#include "testutil.hpp"

using namespace kpc;
using namespace kpc::test;

TEST_SUITE_BEGIN("morphism");

static FlatPattern flat(const std::string& name) { return flatten_pattern(name, corpus().library); }

static bool has_issue(const std::vector<MorphismIssue>& issues, ErrKind k) {
  return std::any_of(issues.begin(), issues.end(),
                     [&](const MorphismIssue& i) { return i.kind == k; });
}

TEST_CASE("validation accepts the bundled morphisms") {
  for (auto& name : corpus().library.morphism_names()) {
    const MorphismSource& m = corpus().library.morphism(name);
    FlatPattern src = flat(m.source_pattern);
    CAPTURE(name);
    CHECK(validate_morphism(m, src, Signature{}).empty());
  }
}

TEST_CASE("validation: unknown source symbol") {
  MorphismSource m;
  m.name = "m";
  m.source_pattern = "container";
  m.pairs = {{"no_such_relation", "x"}};
  CHECK(has_issue(validate_morphism(m, flat("container"), {}), ErrKind::UnknownSourceSymbol));
  m.pairs.clear();
  m.explicit_hides = {"no_such_relation"};
  CHECK(has_issue(validate_morphism(m, flat("container"), {}), ErrKind::UnknownSourceSymbol));
}

TEST_CASE("validation: two sources cannot share a target") {
  MorphismSource m;
  m.name = "m";
  m.source_pattern = "container";
  m.pairs = {{"capacity", "size"}, {"occupied_space", "size"}};
  CHECK(has_issue(validate_morphism(m, flat("container"), {}), ErrKind::NonInjective));
}

TEST_CASE("validation: target must not clash with the kb signature") {
  Signature target;
  target.declare(make_pred("ram_size", 3));  // wrong arity for the image
  MorphismSource m;
  m.name = "m";
  m.source_pattern = "container";
  m.pairs = {{"capacity", "ram_size"}};
  CHECK(has_issue(validate_morphism(m, flat("container"), target),
                  ErrKind::TargetSignatureConflict));
  Signature target2;
  target2.declare(make_concept("ram_size"));  // wrong kind
  CHECK(has_issue(validate_morphism(m, flat("container"), target2),
                  ErrKind::TargetSignatureConflict));
  Signature target3;
  target3.declare(make_pred("ram_size", 2));  // same shape: fine, just lint
  CHECK(validate_morphism(m, flat("container"), target3).empty());
  CHECK_FALSE(lint_morphism_overlaps(m, flat("container"), target3).empty());
}

TEST_CASE("lint ignores identity pairs") {
  Signature target;
  target.declare(make_pred("isa", 2));
  MorphismSource m;
  m.name = "m";
  m.source_pattern = "container";
  m.pairs = {{"isa", "isa"}};
  CHECK(lint_morphism_overlaps(m, flat("container"), target).empty());
}

TEST_CASE("completion hides every unmapped symbol under a scoped fresh name") {
  const MorphismSource& m = corpus().library.morphism("computer-as-ram-container");
  FlatPattern src = flat("container");
  ResolvedMorphism r = complete_morphism(m, src, 0);
  // total over the source signature
  for (auto& [n, s] : src.signature) {
    (void)n;
    CHECK(r.mapping.count(s) == 1);
  }
  CHECK(r.hidden.size() == 5);  // the wall relations and their two rule heads
  for (auto& s : r.hidden) {
    const Symbol& img = r.image(s);
    CHECK(is_hidden_name(img.name));
    CHECK(img.name == "hidden:computer-as-ram-container:0:" + s.name);
    CHECK(img.kind == s.kind);
    CHECK(img.arity == s.arity);
  }
  // mapped symbols keep their stated names
  CHECK(r.image(make_pred("capacity", 2)).name == "ram_size");
  CHECK(r.image(make_concept("container")).name == "computer");
}

TEST_CASE("explicit hides beat leftover-name reuse") {
  MorphismSource m;
  m.name = "m";
  m.source_pattern = "two-state-object";
  m.pairs = {{"isa", "isa"}, {"TwoStateObject", "Valve"}};
  m.explicit_hides = {"in-state-1", "in-state-2"};
  ResolvedMorphism r = complete_morphism(m, flat("two-state-object"), 2);
  CHECK(r.hidden.size() == 2);
  CHECK(r.image(make_pred("in-state-1", 1)).name == "hidden:m:2:in-state-1");
}

TEST_CASE("repeated applications get disjoint fresh names") {
  const MorphismSource& m = corpus().library.morphism("computer-as-ram-container");
  FlatPattern src = flat("container");
  ResolvedMorphism r0 = complete_morphism(m, src, 0);
  ResolvedMorphism r1 = complete_morphism(m, src, 1);
  for (auto& s : r0.hidden) CHECK(r0.image(s).name != r1.image(s).name);
}

TEST_CASE("application rewrites clauses without touching their shape") {
  const MorphismSource& m = corpus().library.morphism("computer-as-ram-container");
  FlatPattern src = flat("container");
  ResolvedMorphism r = complete_morphism(m, src, 0);
  Theory t = apply_morphism(r);
  REQUIRE(t.clauses.size() == src.clauses.size());
  // the free_space rule becomes the available_ram rule verbatim
  Signature sig = t.signature;
  Clause expect = parse_rules(
      "available_ram(Computer, A) :- isa(Computer, computer), ram_size(Computer, S), "
      "occupied_ram(Computer, R), A is S - R.",
      sig)[0];
  bool found = false;
  for (auto& c : t.clauses) found = found || canonical_clause(c) == canonical_clause(expect);
  CHECK(found);
  // variable names and body order are preserved exactly
  for (size_t i = 0; i < t.clauses.size(); ++i) {
    CHECK(clause_vars(t.clauses[i]) == clause_vars(src.clauses[i]));
    CHECK(t.clauses[i].body.size() == src.clauses[i].body.size());
  }
}

TEST_CASE("identity morphism is a fixpoint of application") {
  for (auto& name : corpus().library.pattern_names()) {
    FlatPattern p = flat(name);
    Theory t = apply_morphism(identity_morphism(p));
    CHECK(t.signature == p.signature);
    CHECK(t.clauses == p.clauses);
  }
}

TEST_CASE("composition agrees with sequential application") {
  std::mt19937 rng(7001);
  for (int trial = 0; trial < 25; ++trial) {
    PatternSource ps = random_pattern(rng, "rp");
    FlatPattern p{ps.name, ps.declared_signature, ps.clauses, {}};
    p.clause_origins.assign(p.clauses.size(), p.name);
    ResolvedMorphism r1 = complete_morphism(total_renaming(p, "r1", "a_"), p, 0);
    Theory t1 = apply_morphism(r1);
    FlatPattern p1 = flat_of_theory("mid", t1);
    ResolvedMorphism r2 = complete_morphism(total_renaming(p1, "r2", "b_"), p1, 0);
    ResolvedMorphism rc = compose(r2, r1);
    Theory via_compose = apply_morphism(rc);
    Theory via_steps = apply_morphism(r2);
    CHECK(via_compose.clauses == via_steps.clauses);
    CHECK(via_compose.signature == via_steps.signature);
  }
}

TEST_CASE("dead axiom elimination drops only invisible support") {
  FlatPattern src = flat("container");
  ResolvedMorphism r =
      complete_morphism(corpus().library.morphism("computer-as-ram-container"), src, 0);
  Theory t = apply_morphism(r);
  std::set<Symbol> visible;
  for (auto& [n, s] : r.visible_image_signature()) {
    (void)n;
    if (s.kind == SymbolKind::Predicate) visible.insert(s);
  }
  Theory kept = eliminate_dead_axioms(t, visible);
  CHECK(kept.clauses.size() == 1);  // the wall rules go, the ram rule stays
  CHECK(kept.clauses[0].head.pred.name == "available_ram");
  // signature is untouched by design
  CHECK(kept.signature == t.signature);
}

TEST_CASE("elimination keeps whole support chains") {
  Signature sig;
  sig.declare(make_pred("a", 1));
  sig.declare(make_pred("b", 1));
  sig.declare(make_pred("c", 1));
  sig.declare(make_pred("d", 1));
  Theory t;
  t.signature = sig;
  t.clauses = parse_rules(
      "a(X) :- b(X).\n"
      "b(X) :- c(X).\n"
      "d(X) :- c(X).",
      sig);
  Theory kept = eliminate_dead_axioms(t, {make_pred("a", 1)});
  REQUIRE(kept.clauses.size() == 2);
  CHECK(kept.clauses[0].head.pred.name == "a");
  CHECK(kept.clauses[1].head.pred.name == "b");
}

TEST_SUITE_END();
