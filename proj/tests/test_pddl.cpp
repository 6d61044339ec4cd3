#include <string>

#include "doctest.h"
#include "pgen/pddl.hpp"
#include "testdata.hpp"

using namespace pgen;

TEST_CASE("parse_domain reads the floor-tile domain") {
  auto domain = pddl::parse_domain(testdata::kFloorTileDomain);
  CHECK(domain.name == "floor-tile");
  CHECK(domain.predicates.size() == 10);
  CHECK(domain.find_predicate("robot-at") != nullptr);
  CHECK(domain.find_predicate("available-color") != nullptr);
  CHECK(domain.find_predicate("free-color") != nullptr);
  CHECK(domain.actions.size() == 7);

  const auto* move_up = domain.find_action("move_up");
  REQUIRE(move_up != nullptr);
  CHECK(move_up->params.size() == 3);
  CHECK(move_up->precondition.size() == 3);
  CHECK(move_up->add_effects.size() + move_up->del_effects.size() == 4);

  REQUIRE(domain.instance_constraints.has_value());
}

TEST_CASE("parse_domain accepts an empty predicates section") {
  auto domain = pddl::parse_domain("(define (domain d) (:predicates))", false);
  CHECK(domain.predicates.empty());
}

TEST_CASE("parse_domain rejects undeclared parameter types") {
  const char* text =
      "(define (domain d) (:predicates (p ?x - foo)))";
  CHECK_THROWS_WITH_AS(pddl::parse_domain(text, false),
                       doctest::Contains("foo"), ParseError);
  const char* action =
      "(define (domain d) (:types bar - object)"
      " (:action a :parameters (?x - foo)"
      "  :precondition (and) :effect (and)))";
  CHECK_THROWS_WITH_AS(pddl::parse_domain(action, false),
                       doctest::Contains("foo"), ParseError);
}

TEST_CASE("parse_domain rejects unknown sections and augmented off") {
  CHECK_THROWS_WITH_AS(
      pddl::parse_domain("(define (domain d) (:functions (cost)))", false),
      doctest::Contains("unknown section"), ParseError);
  CHECK_THROWS_AS(pddl::parse_domain(testdata::kFloorTileDomain, false),
                  ParseError);
}

TEST_CASE("parse_domain checks effect consistency") {
  const char* text =
      "(define (domain d) (:types t - object)"
      " (:predicates (p ?x - t))"
      " (:action a :parameters (?x - t)"
      "  :precondition (p ?x)"
      "  :effect (and (p ?x) (not (p ?x)))))";
  CHECK_THROWS_WITH_AS(pddl::parse_domain(text, false),
                       doctest::Contains("add and delete"), ParseError);
}

TEST_CASE("parse_problem reads the toy instance") {
  auto domain = pddl::parse_domain(testdata::kFloorTileDomain);
  auto inst = pddl::parse_problem(testdata::kToyProblem, domain);
  CHECK(inst.name == "toy");
  CHECK(inst.domain_name == "floor-tile");

  int tiles = 0, robots = 0, colors = 0;
  for (const auto& o : inst.objects) {
    if (o.type == "tile") ++tiles;
    if (o.type == "robot") ++robots;
    if (o.type == "color") ++colors;
  }
  CHECK(tiles == 4);
  CHECK(robots == 2);
  CHECK(colors == 2);

  CHECK(inst.init.size() == 16);
  CHECK(inst.goal.size() == 2);
  CHECK(inst.goal.count({"painted", {"tile_0-0", "white"}}) == 1);
  CHECK(inst.goal.count({"painted", {"tile_1-0", "black"}}) == 1);
}

TEST_CASE("parse_problem collapses duplicate init atoms") {
  auto domain = pddl::parse_domain(testdata::kFloorTileDomain);
  std::string text = testdata::kToyProblem;
  auto pos = text.find("(:init");
  text.insert(pos + 6, " (robot-at robot1 tile_0-1)");
  auto inst = pddl::parse_problem(text, domain);
  auto base = pddl::parse_problem(testdata::kToyProblem, domain);
  CHECK(inst.init == base.init);
}

TEST_CASE("parse_problem rejects degenerate inputs") {
  auto domain = pddl::parse_domain(testdata::kFloorTileDomain);
  CHECK_THROWS_WITH_AS(
      pddl::parse_problem("(define (problem p) (:domain floor-tile)"
                          " (:objects a - robot) (:init) (:goal (and)))",
                          domain),
      doctest::Contains("nonempty"), ParseError);
  CHECK_THROWS_WITH_AS(
      pddl::parse_problem("(define (problem p) (:domain floor-tile)"
                          " (:objects a - robot)"
                          " (:init (robot-at a nowhere))"
                          " (:goal (robot-at a nowhere)))",
                          domain),
      doctest::Contains("undeclared object"), ParseError);
  // missing :goal
  CHECK_THROWS_AS(
      pddl::parse_problem("(define (problem p) (:domain floor-tile)"
                          " (:objects a - robot) (:init))",
                          domain),
      ParseError);
  // arity mismatch
  CHECK_THROWS_WITH_AS(
      pddl::parse_problem("(define (problem p) (:domain floor-tile)"
                          " (:objects a - robot) (:init (robot-at a))"
                          " (:goal (free-color a)))",
                          domain),
      doctest::Contains("arguments"), ParseError);
}

TEST_CASE("emit_problem round-trips and is deterministic") {
  auto domain = pddl::parse_domain(testdata::kFloorTileDomain);
  auto inst = pddl::parse_problem(testdata::kToyProblem, domain);
  std::string once = pddl::emit_problem(inst);
  std::string twice = pddl::emit_problem(inst);
  CHECK(once == twice);

  auto reparsed = pddl::parse_problem(once, domain);
  CHECK(reparsed.name == inst.name);
  CHECK(reparsed.objects == inst.objects);
  CHECK(reparsed.init == inst.init);
  CHECK(reparsed.goal == inst.goal);
}

TEST_CASE("emit_problem lists one init atom for a one-atom instance") {
  auto domain = pddl::parse_domain(testdata::kFloorTileDomain);
  pddl::ProblemInstance inst;
  inst.name = "tiny";
  inst.domain_name = "floor-tile";
  inst.objects = {{"r1", "robot"}};
  inst.init = {{"free-color", {"r1"}}};
  inst.goal = {{"free-color", {"r1"}}};
  std::string text = pddl::emit_problem(inst);
  CHECK(text.find("(free-color r1)") != std::string::npos);
  auto reparsed = pddl::parse_problem(text, domain);
  CHECK(reparsed.init.size() == 1);
}
