#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "pgen/augment.hpp"
#include "pgen/pddl.hpp"
#include "testdata.hpp"

using namespace pgen;
using augment::Comparator;
using augment::Scope;

namespace {

pddl::DomainSpec floor_tile() {
  return pddl::parse_domain(testdata::kFloorTileDomain);
}

augment::ValiditySpec floor_tile_spec(const pddl::DomainSpec& domain) {
  return augment::parse_instance_constraints(*domain.instance_constraints,
                                             domain);
}

std::vector<pddl::TypedName> toy_objects() {
  return {{"tile_0-0", "tile"}, {"tile_0-1", "tile"}, {"tile_1-0", "tile"},
          {"tile_1-1", "tile"}, {"robot1", "robot"},  {"robot2", "robot"},
          {"white", "color"},   {"black", "color"}};
}

augment::ValiditySpec parse_section(const pddl::DomainSpec& domain,
                                    const char* text) {
  return augment::parse_instance_constraints(sexpr::parse_one(text), domain);
}

const char* kMiniDomain =
    "(define (domain mini)"
    " (:types a b - object)"
    " (:predicates (p ?x - a ?y - b) (q ?x - a)))";

}  // namespace

TEST_CASE("instance-constraints of floor-tile parse to scoped constraints") {
  auto domain = floor_tile();
  auto spec = floor_tile_spec(domain);

  // The conjunction under one forall splits into separate constraints.
  REQUIRE(spec.constraints.size() == 4);
  int init_count = 0, goal_count = 0;
  for (const auto& c : spec.constraints)
    (c.scope == Scope::Init ? init_count : goal_count)++;
  CHECK(init_count == 3);
  CHECK(goal_count == 1);

  REQUIRE(spec.structures.size() == 1);
  CHECK(spec.structures[0].type_arg == "tile");
  CHECK(spec.structures[0].predicates ==
        std::array<std::string, 4>{"up", "down", "left", "right"});
  CHECK(spec.structures[0].aux_param == "tile_size");

  // robot and color keep count parameters; tile is grid-governed.
  CHECK(spec.params == std::vector<std::string>{"n_robot", "tile_size",
                                                "n_color"});
  REQUIRE(spec.derived_counts.size() == 1);
  CHECK(spec.derived_counts[0].first == "n_tile");
  CHECK(spec.derived_counts[0].second == "tile_size");
}

TEST_CASE("empty instance-constraints section") {
  auto domain = floor_tile();
  auto spec = parse_section(domain, "(:instance-constraints)");
  CHECK(spec.constraints.empty());
  CHECK(spec.structures.empty());
  CHECK(spec.bounds.empty());
}

TEST_CASE("appear outside goal scope is rejected") {
  auto domain = floor_tile();
  CHECK_THROWS_WITH_AS(
      parse_section(domain,
                    "(:instance-constraints (init (appear (clear ?t))))"),
      doctest::Contains("goal scope"), ParseError);
}

TEST_CASE("constraint parser rejects malformed input") {
  auto domain = floor_tile();
  CHECK_THROWS_WITH_AS(
      parse_section(domain, "(:instance-constraints (init (frobnicate x)))"),
      doctest::Contains("unknown keyword"), ParseError);
  CHECK_THROWS_WITH_AS(
      parse_section(domain,
                    "(:instance-constraints"
                    " (init (exactly-k (robot-at ?r _) 1 True)))"),
      doctest::Contains("unbound variable"), ParseError);
  CHECK_THROWS_WITH_AS(
      parse_section(domain,
                    "(:instance-constraints"
                    " (init (exactly-k (clear ?t ?t2) 1 True)))"),
      doctest::Contains("arguments"), ParseError);
  CHECK_THROWS_WITH_AS(
      parse_section(domain,
                    "(:instance-constraints (goal (isLRUDSquareGrid tile"
                    " up down left right)))"),
      doctest::Contains("init scope"), ParseError);
}

TEST_CASE("grid keyword accepts the prose spelling alias") {
  auto domain = floor_tile();
  auto spec = parse_section(domain,
                            "(:instance-constraints"
                            " (init (isLRUDquareGrid tile up down left"
                            " right)))");
  CHECK(spec.structures.size() == 1);
}

TEST_CASE("min/max bounds parse and check emptiness") {
  auto domain = floor_tile();
  auto spec = parse_section(domain,
                            "(:instance-constraints (min fuel 2)"
                            " (max fuel 7))");
  REQUIRE(spec.bounds.size() == 2);
  CHECK(spec.bounds[0].fluent == "fuel");
  CHECK(spec.bounds[0].value == 2);
  CHECK_THROWS_WITH_AS(parse_section(domain,
                                     "(:instance-constraints (min fuel 8)"
                                     " (max fuel 7))"),
                       doctest::Contains("empty"), SemanticError);
  CHECK_THROWS_WITH_AS(
      parse_section(domain, "(:instance-constraints (min clear 0))"),
      doctest::Contains("predicate"), ParseError);
}

TEST_CASE("expand unrolls forall per binding with full wildcard matches") {
  auto domain = floor_tile();
  auto spec = parse_section(domain,
                            "(:instance-constraints"
                            " (init (forall (?r - robot)"
                            "   (exactly-k (robot-at ?r _) 1 True))))");
  auto g = augment::expand(spec, domain, toy_objects());

  REQUIRE(g.cards.size() == 2);
  // Hand-enumerated oracle: one constraint per robot, each over the four
  // tiles in object order.
  const std::vector<std::string> tiles = {"tile_0-0", "tile_0-1", "tile_1-0",
                                          "tile_1-1"};
  const std::vector<std::string> robots = {"robot1", "robot2"};
  for (std::size_t r = 0; r < robots.size(); ++r) {
    const auto& card = g.cards[r];
    CHECK(card.scope == Scope::Init);
    CHECK(card.cmp == Comparator::Eq);
    CHECK(card.k == 1);
    CHECK(card.total_shape);
    REQUIRE(card.atoms.size() == 4);
    for (std::size_t t = 0; t < tiles.size(); ++t) {
      CHECK(card.atoms[t].predicate == "robot-at");
      CHECK(card.atoms[t].args ==
            std::vector<std::string>{robots[r], tiles[t]});
    }
  }
}

TEST_CASE("all-constant pattern expands to a singleton") {
  auto domain = floor_tile();
  auto spec = parse_section(domain,
                            "(:instance-constraints"
                            " (init (exactly-k (painted tile_0-0 white) 1"
                            " True)))");
  auto g = augment::expand(spec, domain, toy_objects());
  REQUIRE(g.cards.size() == 1);
  REQUIRE(g.cards[0].atoms.size() == 1);
  CHECK(g.cards[0].atoms[0] ==
        pddl::GroundAtom{"painted", {"tile_0-0", "white"}});
}

TEST_CASE("painted exactly-0 forces all painted atoms false") {
  auto domain = floor_tile();
  auto spec = parse_section(domain,
                            "(:instance-constraints"
                            " (init (forall (?t - tile)"
                            "   (exactly-k (painted ?t _) 0 True))))");
  auto g = augment::expand(spec, domain, toy_objects());
  REQUIRE(g.cards.size() == 4);
  for (const auto& card : g.cards) REQUIRE(card.atoms.size() == 2);

  // Brute-force oracle over all 2^8 assignments of the painted atoms:
  // exactly one assignment (all false) satisfies every constraint.
  std::vector<pddl::GroundAtom> universe;
  for (const auto& card : g.cards)
    for (const auto& atom : card.atoms) universe.push_back(atom);
  std::sort(universe.begin(), universe.end());
  universe.erase(std::unique(universe.begin(), universe.end()),
                 universe.end());
  REQUIRE(universe.size() == 8);

  int satisfying = 0;
  for (unsigned mask = 0; mask < 256; ++mask) {
    auto is_true = [&](const pddl::GroundAtom& a) {
      auto it = std::lower_bound(universe.begin(), universe.end(), a);
      return (mask >> (it - universe.begin())) & 1u;
    };
    bool ok = true;
    for (const auto& card : g.cards) {
      long long count = 0;
      for (const auto& atom : card.atoms)
        if (is_true(atom)) ++count;
      if (count != card.k) ok = false;
    }
    if (ok) ++satisfying;
  }
  CHECK(satisfying == 1);
}

TEST_CASE("wildcard matches equal the brute-force enumeration") {
  auto domain = pddl::parse_domain(kMiniDomain, false);
  std::vector<pddl::TypedName> objects = {
      {"a1", "a"}, {"a2", "a"}, {"a3", "a"}, {"b1", "b"}, {"b2", "b"}};
  auto spec = parse_section(domain,
                            "(:instance-constraints"
                            " (init (atmost-k (p _ _) 0 True)))");
  auto g = augment::expand(spec, domain, objects);
  REQUIRE(g.cards.size() == 1);

  // Independent enumerator: every type-correct (x, y) pair.
  std::set<pddl::GroundAtom> expected;
  for (const auto& x : objects)
    for (const auto& y : objects)
      if (x.type == "a" && y.type == "b")
        expected.insert({"p", {x.name, y.name}});
  std::set<pddl::GroundAtom> actual(g.cards[0].atoms.begin(),
                                    g.cards[0].atoms.end());
  CHECK(actual == expected);
  CHECK(actual.size() == 6);
}

TEST_CASE("grounding count scales with the quantified type") {
  auto domain = pddl::parse_domain(kMiniDomain, false);
  auto spec = parse_section(domain,
                            "(:instance-constraints"
                            " (init (forall (?x - a)"
                            "   (exactly-k (q ?x) 0 True))))");
  for (int m : {1, 3, 7}) {
    std::vector<pddl::TypedName> objects;
    for (int i = 0; i < m; ++i)
      objects.push_back({"a" + std::to_string(i), "a"});
    auto g = augment::expand(spec, domain, objects);
    CHECK(static_cast<int>(g.cards.size()) == m);
  }
}

TEST_CASE("expansion preserves constraint scope") {
  auto domain = floor_tile();
  auto spec = floor_tile_spec(domain);
  auto g = augment::expand(spec, domain, toy_objects());
  for (const auto& card : g.cards) CHECK(card.scope == Scope::Init);
  for (const auto& appear : g.appears) {
    CHECK(appear.negated);
    CHECK(appear.atom.predicate == "clear");
  }
  CHECK(g.appears.size() == 4);  // one per tile
}

TEST_CASE("statically unsatisfiable terms are reported") {
  auto domain = floor_tile();
  auto spec = parse_section(domain,
                            "(:instance-constraints"
                            " (init (exactly-k (robot-at robot1 _) 3 True)))");
  // Only 2 tiles here, so exactly-3 cannot hold.
  std::vector<pddl::TypedName> objects = {
      {"robot1", "robot"}, {"t1", "tile"}, {"t2", "tile"}};
  CHECK_THROWS_WITH_AS(augment::expand(spec, domain, objects),
                       doctest::Contains("unsatisfiable"), SemanticError);

  auto zero = parse_section(domain,
                            "(:instance-constraints"
                            " (init (exactly-k (robot-at robot1 _) 1 True)))");
  std::vector<pddl::TypedName> no_tiles = {{"robot1", "robot"}};
  CHECK_THROWS_AS(augment::expand(zero, domain, no_tiles), SemanticError);
}

TEST_CASE("xor and or expand to exactly-one and at-least-one over unions") {
  auto domain = floor_tile();
  auto spec = parse_section(domain,
                            "(:instance-constraints"
                            " (init (forall (?t - tile)"
                            "   (xor (clear ?t) (robot-at _ ?t))))"
                            " (init (or (clear _) (painted _ _))))");
  std::vector<pddl::TypedName> objects = {
      {"t1", "tile"}, {"t2", "tile"}, {"r1", "robot"}, {"c1", "color"}};
  auto g = augment::expand(spec, domain, objects);
  REQUIRE(g.cards.size() == 3);

  CHECK(g.cards[0].origin == augment::TermOrigin::XorTerm);
  CHECK(g.cards[0].cmp == Comparator::Eq);
  CHECK(g.cards[0].k == 1);
  REQUIRE(g.cards[0].atoms.size() == 2);  // clear(t1), robot-at(r1,t1)
  CHECK(g.cards[0].atoms[0] == pddl::GroundAtom{"clear", {"t1"}});
  CHECK(g.cards[0].atoms[1] == pddl::GroundAtom{"robot-at", {"r1", "t1"}});

  CHECK(g.cards[2].origin == augment::TermOrigin::OrTerm);
  CHECK(g.cards[2].cmp == Comparator::Ge);
  CHECK(g.cards[2].k == 1);
  CHECK(g.cards[2].atoms.size() == 4);  // 2 clear + 2 painted
}

TEST_CASE("negation flips cardinality terms and bare patterns") {
  auto domain = floor_tile();
  auto spec = parse_section(domain,
                            "(:instance-constraints"
                            " (init (not (atleast-k (clear _) 2 True)))"
                            " (init (not (painted _ _))))");
  std::vector<pddl::TypedName> objects = {
      {"t1", "tile"}, {"t2", "tile"}, {"c1", "color"}};
  auto g = augment::expand(spec, domain, objects);
  REQUIRE(g.cards.size() == 2);
  CHECK(g.cards[0].cmp == Comparator::Le);
  CHECK(g.cards[0].k == 1);
  CHECK(g.cards[1].cmp == Comparator::Eq);
  CHECK(g.cards[1].k == 0);
  CHECK(g.cards[1].atoms.size() == 2);

  auto bad = parse_section(domain,
                           "(:instance-constraints"
                           " (init (not (exactly-k (clear _) 1 True))))");
  CHECK_THROWS_WITH_AS(augment::expand(bad, domain, objects),
                       doctest::Contains("not supported"), SemanticError);
}

TEST_CASE("a False value counts false atoms") {
  auto domain = floor_tile();
  auto spec = parse_section(domain,
                            "(:instance-constraints"
                            " (init (exactly-k (clear _) 1 False)))");
  std::vector<pddl::TypedName> objects = {
      {"t1", "tile"}, {"t2", "tile"}, {"t3", "tile"}};
  auto g = augment::expand(spec, domain, objects);
  REQUIRE(g.cards.size() == 1);
  // exactly 1 of 3 false == exactly 2 true
  CHECK(g.cards[0].cmp == Comparator::Eq);
  CHECK(g.cards[0].k == 2);
}

TEST_CASE("integer cardinality values over predicates are rejected") {
  auto domain = floor_tile();
  auto spec = parse_section(domain,
                            "(:instance-constraints"
                            " (init (exactly-k (clear _) 1 5)))");
  std::vector<pddl::TypedName> objects = {{"t1", "tile"}};
  CHECK_THROWS_WITH_AS(augment::expand(spec, domain, objects),
                       doctest::Contains("Boolean"), SemanticError);
}
