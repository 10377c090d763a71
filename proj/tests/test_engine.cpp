#include <doctest.h>

#include <algorithm>
#include <random>

#include "kpc/engine.hpp"
#include "testutil.hpp"

using namespace kpc;
using namespace kpc::test;

TEST_SUITE_BEGIN("engine");

static AssembledKB corpus_kb(const std::string& name) {
  return assemble_kb(corpus().manifests.at(name), corpus().library);
}

static AssembledKB blockable_kb(const RandomGraph& g, const std::set<std::string>& blocked) {
  FlatPattern f = flatten_pattern("blockable-dag", corpus().library);
  std::vector<Atom> facts;
  for (auto& n : g.nodes) facts.push_back(atom("isa", {ind(n), con("Node")}));
  for (auto& [a, b] : g.edges) facts.push_back(atom("to", {ind(a), ind(b)}));
  for (auto& b : blocked) facts.push_back(atom("blocked", {ind(b)}));
  return kb_from_theory(Theory{f.signature, f.clauses}, facts, "g");
}

static std::set<Edge> relation_pairs(const Model& m, const std::string& pred) {
  std::set<Edge> out;
  for (auto& t : m.tuples(make_pred(pred, 2))) {
    REQUIRE(is_const(t[0]));
    REQUIRE(is_const(t[1]));
    out.insert({std::get<Symbol>(t[0]).name, std::get<Symbol>(t[1]).name});
  }
  return out;
}

TEST_CASE("negation-free kbs sit in a single stratum") {
  AssembledKB kb = corpus_kb("computer-demo");
  StratificationReport r = stratify(kb);
  CHECK(r.strata.size() == 1);
  CHECK(r.negative_edges.empty());
  CHECK(r.level_of(make_pred("available_ram", 2)) == 0);
  CHECK(r.level_of(make_pred("nonexistent", 1)) == -1);
}

TEST_CASE("negation forces strictly higher strata") {
  AssembledKB kb = corpus_kb("demo-circuit");
  StratificationReport r = stratify(kb);
  CHECK(r.strata.size() >= 2);
  int open_level = r.level_of(make_pred("open", 1));
  int closed_level = r.level_of(make_pred("closed", 1));
  CHECK(open_level == 0);
  CHECK(closed_level > open_level);
  CHECK_FALSE(r.negative_edges.empty());
  for (auto& [from, to] : r.negative_edges) CHECK(r.level_of(to) > r.level_of(from));
}

TEST_CASE("negative self-dependency is rejected with a cycle path") {
  Signature sig;
  sig.declare(make_pred("p", 1));
  sig.declare(make_pred("q", 1));
  AssembledKB direct = make_kb(sig, "p(X) :- p(X), \\+ p(X).", "");
  try {
    stratify(direct);
    FAIL("expected UnstratifiableNegation");
  } catch (const Error& e) {
    CHECK(e.kind == ErrKind::UnstratifiableNegation);
    CHECK(std::string(e.what()).find("negatively") != std::string::npos);
  }
  AssembledKB loop = make_kb(sig, "p(X) :- q(X), \\+ q(X).\nq(X) :- p(X).", "");
  CHECK_THROWS_AS(stratify(loop), Error);
  // evaluate goes through stratify
  CHECK_THROWS_AS(evaluate(loop), Error);
}

TEST_CASE("computer kb derives exactly the two expected values") {
  Model m = evaluate(corpus_kb("computer-demo"));
  CHECK(m.contains(atom("available_ram", {ind("c1"), Term{384LL}})));
  CHECK(m.contains(atom("free_slots", {ind("c1"), Term{5LL}})));
  CHECK(m.tuples(make_pred("available_ram", 2)).size() == 1);
  CHECK(m.tuples(make_pred("free_slots", 2)).size() == 1);
  CHECK(m.atom_count() == 7);  // five facts + the two derived atoms
}

TEST_CASE("demo circuit: powered tracks the switch state") {
  Model closed_m = evaluate(corpus_kb("demo-circuit"));
  CHECK(closed_m.contains(atom("powered", {ind("light1")})));
  Model open_m = evaluate(corpus_kb("demo-circuit-open"));
  CHECK_FALSE(open_m.contains(atom("powered", {ind("light1")})));
  CHECK(open_m.tuples(make_pred("powered", 1)).empty());
}

TEST_CASE("empty rule set returns the facts, empty kb the empty model") {
  Signature sig;
  sig.declare(make_pred("p", 1));
  AssembledKB facts_only = make_kb(sig, "", "p(a).\np(b).");
  Model m = evaluate(facts_only);
  CHECK(m.atom_count() == 2);
  CHECK(m.contains(atom("p", {ind("a")})));
  AssembledKB empty = make_kb(Signature{}, "", "");
  CHECK(evaluate(empty).atom_count() == 0);
  CHECK(evaluate_naive(empty).atom_count() == 0);
}

TEST_CASE("arithmetic: truncating division, zero divisor, negative results") {
  Signature sig;
  sig.declare(make_pred("p", 2));
  sig.declare(make_pred("q", 1));
  auto run = [&](const std::string& rules, const std::string& facts) {
    return evaluate(make_kb(sig, rules, facts));
  };
  Model m1 = run("q(D) :- p(A, B), D is A // B.", "p(7, 2).");
  CHECK(m1.contains(atom("q", {Term{3LL}})));
  Model m2 = run("q(D) :- p(A, B), D is A // B.", "p(-7, 2).");
  CHECK(m2.contains(atom("q", {Term{-3LL}})));  // truncation toward zero
  Model m3 = run("q(D) :- p(A, B), D is A // B.", "p(7, 0).");
  CHECK(m3.tuples(make_pred("q", 1)).empty());  // fails the literal, no error
  Model m4 = run("q(D) :- p(A, B), D is A - B.", "p(3, 5).");
  CHECK(m4.contains(atom("q", {Term{-2LL}})));  // negative capacity is data
  Model m5 = run("q(D) :- p(A, B), D is A * B + 2.", "p(4, 5).");
  CHECK(m5.contains(atom("q", {Term{22LL}})));
}

TEST_CASE("arithmetic: non-integer operands fail the literal quietly") {
  Signature sig;
  sig.declare(make_pred("p", 2));
  sig.declare(make_pred("q", 1));
  Model m = evaluate(make_kb(sig, "q(D) :- p(A, B), D is A + B.", "p(c3, 1).\np(2, 2)."));
  CHECK(m.tuples(make_pred("q", 1)).size() == 1);
  CHECK(m.contains(atom("q", {Term{4LL}})));
}

TEST_CASE("arithmetic: bound result variables filter") {
  Signature sig;
  sig.declare(make_pred("p", 1));
  sig.declare(make_pred("q", 1));
  Model m = evaluate(make_kb(sig, "q(X) :- p(X), X is 2 + 2.", "p(4).\np(5).\np(c0)."));
  CHECK(m.tuples(make_pred("q", 1)).size() == 1);
  CHECK(m.contains(atom("q", {Term{4LL}})));
}

TEST_CASE("comparisons: structural equality, integer order") {
  Signature sig;
  sig.declare(make_pred("p", 1));
  sig.declare(make_pred("q", 1));
  sig.declare(make_pred("r", 1));
  sig.declare(make_individual("a"));
  Model m = evaluate(make_kb(sig,
                             "q(X) :- p(X), X = a.\n"
                             "r(X) :- p(X), X \\= a.",
                             "p(a).\np(b).\np(3)."));
  CHECK(m.tuples(make_pred("q", 1)).size() == 1);
  CHECK(m.tuples(make_pred("r", 1)).size() == 2);
  // order comparisons silently fail on non-integers
  Model m2 = evaluate(make_kb(sig, "q(X) :- p(X), X < 4.", "p(a).\np(3).\np(9)."));
  CHECK(m2.tuples(make_pred("q", 1)).size() == 1);
  CHECK(m2.contains(atom("q", {Term{3LL}})));
}

TEST_CASE("unbound arithmetic input is the defensive error") {
  Signature sig;
  sig.declare(make_pred("q", 1));
  // bypasses assembly's safety gate on purpose
  AssembledKB kb = make_kb(sig, "q(D) :- D is Y + 1.", "");
  try {
    evaluate(kb);
    FAIL("expected ArithmeticOnUnbound");
  } catch (const Error& e) {
    CHECK(e.kind == ErrKind::ArithmeticOnUnbound);
  }
}

TEST_CASE("reaches equals brute-force closure on random graphs") {
  std::mt19937 rng(4242);
  for (int trial = 0; trial < 40; ++trial) {
    RandomGraph g = random_graph(rng);
    Model m = evaluate(blockable_kb(g, {}));
    CHECK(relation_pairs(m, "reaches") == brute_closure(g.edges));
  }
}

TEST_CASE("to and from stay mutual converses") {
  std::mt19937 rng(4243);
  for (int trial = 0; trial < 10; ++trial) {
    RandomGraph g = random_graph(rng);
    Model m = evaluate(blockable_kb(g, {}));
    std::set<Edge> to = relation_pairs(m, "to");
    std::set<Edge> from = relation_pairs(m, "from");
    std::set<Edge> flipped;
    for (auto& [a, b] : from) flipped.insert({b, a});
    CHECK(to == flipped);
  }
}

TEST_CASE("unblocked reachability: subset of reaches and equal to path enumeration") {
  std::mt19937 rng(4244);
  for (int trial = 0; trial < 40; ++trial) {
    RandomGraph g = random_graph(rng);
    std::set<std::string> blocked;
    for (auto& n : g.nodes)
      if (pick(rng, 0, 99) < 25) blocked.insert(n);
    Model m = evaluate(blockable_kb(g, blocked));
    std::set<Edge> ur = relation_pairs(m, "unblocked-reaches");
    std::set<Edge> reach = relation_pairs(m, "reaches");
    for (auto& e : ur) CHECK(reach.count(e) == 1);
    for (auto& n : g.nodes) {
      std::set<std::string> got;
      for (auto& [a, b] : ur)
        if (a == n) got.insert(b);
      CHECK(got == brute_unblocked_reach({n}, g.edges, blocked));
    }
  }
}

TEST_CASE("semi-naive and naive evaluators agree") {
  for (auto& [name, man] : corpus().manifests) {
    CAPTURE(name);
    AssembledKB kb = assemble_kb(man, corpus().library);
    CHECK(evaluate(kb) == evaluate_naive(kb));
  }
  std::mt19937 rng(4245);
  for (int trial = 0; trial < 25; ++trial) {
    RandomGraph g = random_graph(rng);
    std::set<std::string> blocked;
    for (auto& n : g.nodes)
      if (pick(rng, 0, 99) < 25) blocked.insert(n);
    AssembledKB kb = blockable_kb(g, blocked);
    CHECK(evaluate(kb) == evaluate_naive(kb));
  }
}

TEST_CASE("model is independent of rule and fact order") {
  AssembledKB kb = corpus_kb("five-node-circuit");
  Model base = evaluate(kb);
  std::mt19937 rng(4246);
  for (int trial = 0; trial < 5; ++trial) {
    AssembledKB shuffled = kb;
    std::shuffle(shuffled.rules.begin(), shuffled.rules.end(), rng);
    std::shuffle(shuffled.facts.begin(), shuffled.facts.end(), rng);
    shuffled.rule_origins.assign(shuffled.rules.size(), {});
    shuffled.fact_origins.assign(shuffled.facts.size(), "");
    CHECK(evaluate(shuffled) == base);
    CHECK(evaluate_naive(shuffled) == base);
  }
}

TEST_CASE("adding base facts never removes positive derivations") {
  std::mt19937 rng(4247);
  for (int trial = 0; trial < 10; ++trial) {
    RandomGraph g = random_graph(rng, 6);
    FlatPattern f = flatten_pattern("dag", corpus().library);
    std::vector<Atom> facts;
    for (auto& [a, b] : g.edges) facts.push_back(atom("to", {ind(a), ind(b)}));
    AssembledKB kb = kb_from_theory(Theory{f.signature, f.clauses}, facts, "g");
    Model before = evaluate(kb);
    std::vector<Atom> more = facts;
    more.push_back(atom("to", {ind("extra1"), ind("extra2")}));
    if (!g.nodes.empty()) more.push_back(atom("to", {ind("extra2"), ind(g.nodes[0])}));
    AssembledKB bigger = kb_from_theory(Theory{f.signature, f.clauses}, more, "g2");
    Model after = evaluate(bigger);
    for (auto& [pred, tuples] : before.relations)
      for (auto& t : tuples) CHECK(after.tuples(pred).count(t) == 1);
  }
}

TEST_CASE("queries join, negate, compute and come back sorted") {
  Model m = evaluate(corpus_kb("demo-circuit"));
  const Signature& sig = m.signature;

  auto rows = query(m, parse_query("?- powered(X).", sig));
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].at("X") == Term{make_individual("light1")});

  rows = query(m, parse_query("?- wired-to(X, Y).", sig));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].at("X") == Term{make_individual("battery1")});
  CHECK(rows[1].at("X") == Term{make_individual("switch1")});

  rows = query(m, parse_query("?- wired-to(X, Y), wired-to(Y, Z).", sig));
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].at("Z") == Term{make_individual("light1")});

  rows = query(m, parse_query("?- isa(X, Electrical-Device), \\+ powered(X).", sig));
  CHECK(rows.size() == 2);  // battery1 and switch1

  Model mc = evaluate(corpus_kb("computer-demo"));
  rows = query(mc, parse_query("?- free_slots(c1, N).", mc.signature));
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].at("N") == Term{5LL});
  rows = query(mc, parse_query("?- free_slots(c1, N), M is N * 2, M > 9.", mc.signature));
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].at("M") == Term{10LL});
}

TEST_CASE("query errors: unknown predicates and unsafe goals") {
  Model m = evaluate(corpus_kb("demo-circuit"));
  std::vector<Literal> ghost{Literal::pos(atom("ghost", {V("X")}))};
  try {
    query(m, ghost);
    FAIL("expected UnknownPredicate");
  } catch (const Error& e) {
    CHECK(e.kind == ErrKind::UnknownPredicate);
  }
  try {
    query(m, parse_query("?- \\+ powered(X).", m.signature));
    FAIL("expected UnsafeQuery");
  } catch (const Error& e) {
    CHECK(e.kind == ErrKind::UnsafeQuery);
  }
}

TEST_CASE("ground queries answer with the empty binding") {
  Model m = evaluate(corpus_kb("demo-circuit"));
  auto rows = query(m, parse_query("?- powered(light1).", m.signature));
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].empty());
  CHECK(query(m, parse_query("?- powered(battery1).", m.signature)).empty());
}

TEST_CASE("integrity: cycles surface as violation data") {
  FlatPattern f = flatten_pattern("dag", corpus().library);
  AssembledKB chain = kb_from_theory(Theory{f.signature, f.clauses},
                                     {atom("to", {ind("a"), ind("b")}),
                                      atom("to", {ind("b"), ind("c")})});
  Model m = evaluate(chain);
  auto cs = std::vector<IntegrityConstraint>{IntegrityConstraint::acyclic(make_pred("reaches", 2))};
  CHECK(check_integrity(m, cs).empty());

  AssembledKB looped = kb_from_theory(Theory{f.signature, f.clauses},
                                      {atom("to", {ind("a"), ind("b")}),
                                       atom("to", {ind("b"), ind("a")})});
  auto violations = check_integrity(evaluate(looped), cs);
  REQUIRE(violations.size() == 2);
  CHECK(violations[0].detail == "reaches(a, a)");
  CHECK(violations[1].detail == "reaches(b, b)");
}

TEST_CASE("integrity: denial bodies act as data lint") {
  // the negative-capacity case stays evaluable; a denial surfaces it
  Signature sig;
  sig.declare(make_pred("free_space", 2));
  AssembledKB kb = make_kb(sig, "", "free_space(box, -2).\nfree_space(bin, 3).");
  Model m = evaluate(kb);
  auto denial = IntegrityConstraint::denial(
      "free-space-not-negative", parse_query("?- free_space(C, F), F < 0.", sig));
  auto violations = check_integrity(m, {denial});
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].constraint == "free-space-not-negative");
  CHECK(violations[0].detail.find("box") != std::string::npos);
  CHECK(violations[0].detail.find("-2") != std::string::npos);
}

TEST_CASE("integrity: acyclic needs a declared binary predicate") {
  Signature sig;
  sig.declare(make_pred("p", 1));
  sig.declare(make_pred("e", 2));
  Model m = evaluate(make_kb(sig, "", "e(a, b).\np(a)."));
  CHECK(check_integrity(m, {IntegrityConstraint::acyclic(make_pred("e", 2))}).empty());
  try {
    check_integrity(m, {IntegrityConstraint::acyclic(make_pred("ghost", 2))});
    FAIL("expected UnknownPredicate");
  } catch (const Error& e) {
    CHECK(e.kind == ErrKind::UnknownPredicate);
  }
  try {
    check_integrity(m, {IntegrityConstraint::acyclic(make_pred("p", 1))});
    FAIL("expected InvalidDeclaration");
  } catch (const Error& e) {
    CHECK(e.kind == ErrKind::InvalidDeclaration);
  }
}

TEST_CASE("provenance: facts and first derivations") {
  Model m = evaluate(corpus_kb("computer-demo"));
  Atom fact = atom("ram_size", {ind("c1"), Term{512LL}});
  REQUIRE(m.provenance.count(fact) == 1);
  CHECK(m.provenance.at(fact).rule_index == -1);
  Atom derived = atom("available_ram", {ind("c1"), Term{384LL}});
  REQUIRE(m.provenance.count(derived) == 1);
  CHECK(m.provenance.at(derived).rule_index >= 0);
  CHECK_FALSE(m.provenance.at(derived).bindings.empty());
}

TEST_CASE("derivations of one morphed rule never consult the other image") {
  AssembledKB kb = corpus_kb("computer-demo");
  Model m = evaluate(kb);
  auto preds_of = [&](const Atom& a) {
    std::set<std::string> names;
    for (auto& s : derivation_predicates(m, kb, a)) names.insert(s.name);
    return names;
  };
  auto ram = preds_of(atom("available_ram", {ind("c1"), Term{384LL}}));
  CHECK(ram.count("ram_size") == 1);
  CHECK(ram.count("expansion_slots") == 0);
  CHECK(ram.count("occupied_slots") == 0);
  CHECK(ram.count("free_slots") == 0);
  auto slots = preds_of(atom("free_slots", {ind("c1"), Term{5LL}}));
  CHECK(slots.count("expansion_slots") == 1);
  CHECK(slots.count("ram_size") == 0);
  CHECK(slots.count("occupied_ram") == 0);
  // atoms outside the model have no derivation story
  CHECK(derivation_predicates(m, kb, atom("free_slots", {ind("c1"), Term{99LL}})).empty());
}

TEST_SUITE_END();
