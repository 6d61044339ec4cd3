#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "pgen/model.hpp"
#include "testdata.hpp"

using namespace pgen;
using augment::Scope;
using model::ConstraintModel;
using model::Constraint;

namespace {

struct Fixture {
  pddl::DomainSpec domain;
  augment::ValiditySpec validity;

  Fixture()
      : domain(pddl::parse_domain(testdata::kFloorTileDomain)),
        validity(augment::parse_instance_constraints(
            *domain.instance_constraints, domain)) {}

  model::GeneratorConfig config(long long s, long long robots,
                                long long colors) const {
    model::GeneratorConfig c;
    c.assignment = {{"tile_size", s}, {"n_robot", robots}, {"n_color", colors}};
    return c;
  }

  ConstraintModel compile(ConstraintModel::Mode mode, long long s,
                          long long robots, long long colors) const {
    auto cfg = config(s, robots, colors);
    auto objects = model::objects_from_config(domain, validity.structures, cfg);
    auto gspec = augment::expand(validity, domain, objects);
    return mode == ConstraintModel::Mode::Low
               ? model::compile_low(domain, gspec, cfg)
               : model::compile_high(domain, gspec, cfg);
  }
};

// Atoms a model forces true for the grid predicates, from either the
// structural biconditionals (low) or the fixed map (high).
std::set<pddl::GroundAtom> structural_true_atoms(const ConstraintModel& m) {
  std::set<pddl::GroundAtom> atoms;
  for (const auto& c : m.constraints)
    if (c.kind == Constraint::Kind::BiconditionalConst &&
        c.origin == Constraint::Origin::Structural && c.value)
      atoms.insert(m.variables[static_cast<std::size_t>(c.a)].atom);
  for (const auto& [var, value] : m.fixed)
    if (value) atoms.insert(m.variables[static_cast<std::size_t>(var)].atom);
  return atoms;
}

const std::set<pddl::GroundAtom> kToyGridAtoms = {
    {"up", {"tile_0-1", "tile_1-1"}},    {"up", {"tile_0-0", "tile_1-0"}},
    {"down", {"tile_1-1", "tile_0-1"}},  {"down", {"tile_1-0", "tile_0-0"}},
    {"right", {"tile_0-1", "tile_0-0"}}, {"right", {"tile_1-1", "tile_1-0"}},
    {"left", {"tile_0-0", "tile_0-1"}},  {"left", {"tile_1-0", "tile_1-1"}}};

}  // namespace

TEST_CASE("grid arithmetic matches the hand-enumerated 2x2 table") {
  // All 16 ordered pairs for side 2: up holds exactly for (3,1) and (4,2).
  std::set<std::pair<long long, long long>> up_pairs;
  for (long long u = 1; u <= 4; ++u)
    for (long long v = 1; v <= 4; ++v)
      if (model::grid_pair_holds(0, u, v, 2)) up_pairs.insert({u, v});
  CHECK(up_pairs == std::set<std::pair<long long, long long>>{{3, 1}, {4, 2}});

  std::set<std::pair<long long, long long>> left_pairs, right_pairs;
  for (long long u = 1; u <= 4; ++u)
    for (long long v = 1; v <= 4; ++v) {
      if (model::grid_pair_holds(2, u, v, 2)) left_pairs.insert({u, v});
      if (model::grid_pair_holds(3, u, v, 2)) right_pairs.insert({u, v});
    }
  CHECK(left_pairs ==
        std::set<std::pair<long long, long long>>{{2, 1}, {4, 3}});
  CHECK(right_pairs ==
        std::set<std::pair<long long, long long>>{{1, 2}, {3, 4}});
}

TEST_CASE("inverse coherence holds for all compiled sides") {
  for (long long s = 1; s <= 5; ++s) {
    const long long n = s * s;
    for (long long u = 1; u <= n; ++u)
      for (long long v = 1; v <= n; ++v) {
        CHECK(model::grid_pair_holds(0, u, v, s) ==
              model::grid_pair_holds(1, v, u, s));
        CHECK(model::grid_pair_holds(2, u, v, s) ==
              model::grid_pair_holds(3, v, u, s));
      }
  }
}

TEST_CASE("grid shape: corner, edge and interior tile degrees") {
  for (long long s = 2; s <= 5; ++s) {
    const long long n = s * s;
    long long deg2 = 0, deg3 = 0, deg4 = 0;
    for (long long u = 1; u <= n; ++u) {
      int defined = 0;
      for (int dir = 0; dir < 4; ++dir) {
        long long partner = model::grid_partner(dir, u, s);
        if (partner != 0) ++defined;
        // at most one partner per direction is structural
        CHECK(partner >= 0);
        CHECK(partner <= n);
      }
      if (defined == 2) ++deg2;
      if (defined == 3) ++deg3;
      if (defined == 4) ++deg4;
    }
    CHECK(deg2 == 4);
    CHECK(deg3 == 4 * (s - 2));
    CHECK(deg4 == (s - 2) * (s - 2));
  }
}

TEST_CASE("partner arithmetic agrees with pair arithmetic") {
  for (long long s = 1; s <= 4; ++s) {
    const long long n = s * s;
    for (int dir = 0; dir < 4; ++dir)
      for (long long u = 1; u <= n; ++u) {
        long long partner = model::grid_partner(dir, u, s);
        for (long long v = 1; v <= n; ++v)
          CHECK(model::grid_pair_holds(dir, u, v, s) == (v == partner));
      }
  }
}

TEST_CASE("objects_from_config synthesizes deterministic names") {
  Fixture f;
  auto objects = model::objects_from_config(f.domain, f.validity.structures,
                                            f.config(2, 2, 2));
  REQUIRE(objects.size() == 8);
  CHECK(objects[0] == pddl::TypedName{"robot1", "robot"});
  CHECK(objects[2] == pddl::TypedName{"tile_0-0", "tile"});
  CHECK(objects[5] == pddl::TypedName{"tile_1-1", "tile"});
  CHECK(objects[6] == pddl::TypedName{"white", "color"});
  CHECK(objects[7] == pddl::TypedName{"black", "color"});

  auto three = model::objects_from_config(f.domain, f.validity.structures,
                                          f.config(2, 1, 3));
  CHECK(three[5].name == "color1");
  CHECK(three[7].name == "color3");

  model::GeneratorConfig missing;
  missing.assignment = {{"tile_size", 2}, {"n_robot", 1}};
  CHECK_THROWS_WITH_AS(
      model::objects_from_config(f.domain, f.validity.structures, missing),
      doctest::Contains("n_color"), SemanticError);

  model::GeneratorConfig clash;
  clash.assignment = {{"tile_size", 2}, {"n_robot", 1}, {"n_color", 1},
                      {"n_tile", 5}};
  CHECK_THROWS_WITH_AS(
      model::objects_from_config(f.domain, f.validity.structures, clash),
      doctest::Contains("tile_size"), SemanticError);
}

TEST_CASE("low-mode structural constraint counts follow 4s^4") {
  Fixture f;
  auto m20 = f.compile(ConstraintModel::Mode::Low, 20, 1, 1);
  CHECK(model::count_constraints(m20).structural == 640000);

  auto m2 = f.compile(ConstraintModel::Mode::Low, 2, 2, 2);
  auto tally = model::count_constraints(m2);
  CHECK(tally.structural == 64);
  long long emitted = 0;
  for (const auto& c : m2.constraints)
    if (c.origin == Constraint::Origin::Structural) ++emitted;
  CHECK(emitted == tally.structural);
  CHECK(tally.fixed == 0);
  CHECK(m2.fixed.empty());
}

TEST_CASE("count law holds for sides 1..12 in both modes") {
  Fixture f;
  for (long long s = 1; s <= 12; ++s) {
    auto low = f.compile(ConstraintModel::Mode::Low, s, 1, 1);
    auto high = f.compile(ConstraintModel::Mode::High, s, 1, 1);
    CHECK(model::count_constraints(low).structural == 4 * s * s * s * s);
    CHECK(model::count_constraints(high).structural == 4 * s * s);
    long long emitted = 0;
    for (const auto& c : low.constraints)
      if (c.origin == Constraint::Origin::Structural) ++emitted;
    CHECK(emitted == 4 * s * s * s * s);
  }
}

TEST_CASE("low and high modes force the same structural atoms") {
  Fixture f;
  for (long long s = 1; s <= 3; ++s) {
    auto low = f.compile(ConstraintModel::Mode::Low, s, 1, 1);
    auto high = f.compile(ConstraintModel::Mode::High, s, 1, 1);
    CHECK(structural_true_atoms(low) == structural_true_atoms(high));
  }
}

TEST_CASE("the 2x2 structural fix is exactly the toy adjacency set") {
  Fixture f;
  auto low = f.compile(ConstraintModel::Mode::Low, 2, 2, 2);
  CHECK(structural_true_atoms(low) == kToyGridAtoms);
  auto high = f.compile(ConstraintModel::Mode::High, 2, 2, 2);
  CHECK(structural_true_atoms(high) == kToyGridAtoms);
  CHECK(high.fixed.size() == 8);
}

TEST_CASE("high mode absorbs total-shaped exactly-1 terms") {
  Fixture f;
  auto high = f.compile(ConstraintModel::Mode::High, 2, 2, 2);
  // robot-at and robot-has per robot: four absorbed groups, no residual
  // cardinality constraints for them.
  CHECK(high.choice_groups.size() == 4);
  auto tally = model::count_constraints(high);
  // painted exactly-0 per tile stays a cardinality constraint.
  CHECK(tally.cardinality == 4);
  CHECK(tally.logic == 4);  // goal: not-appear clear per tile

  auto low = f.compile(ConstraintModel::Mode::Low, 2, 2, 2);
  CHECK(low.choice_groups.empty());
  CHECK(model::count_constraints(low).cardinality == 8);
}

TEST_CASE("a plain cardinality spec compiles to vars and one constraint") {
  Fixture f;
  auto spec = augment::parse_instance_constraints(
      sexpr::parse_one("(:instance-constraints"
                       " (init (exactly-k (robot-at robot1 _) 1 True)))"),
      f.domain);
  std::vector<pddl::TypedName> objects = {{"robot1", "robot"},
                                          {"t1", "tile"},
                                          {"t2", "tile"},
                                          {"t3", "tile"},
                                          {"t4", "tile"}};
  auto gspec = augment::expand(spec, f.domain, objects);
  gspec.structures.clear();
  model::GeneratorConfig cfg;
  cfg.assignment = {{"n_robot", 1}, {"n_tile", 4}, {"n_color", 1}};
  // No template: plain counts drive synthesis; the compiled model only
  // carries the four referenced atoms.
  pddl::DomainSpec no_template_domain = f.domain;
  auto m = model::compile_low(no_template_domain, gspec, cfg);
  CHECK(m.bool_count() == 4);
  CHECK(m.constraints.size() == 1);
  CHECK(m.constraints[0].kind == Constraint::Kind::Cardinality);
}

TEST_CASE("without structure or absorbable terms low equals high") {
  Fixture f;
  auto spec = augment::parse_instance_constraints(
      sexpr::parse_one("(:instance-constraints"
                       " (goal (atleast-k (painted _ _) 1 True)))"),
      f.domain);
  std::vector<pddl::TypedName> objects = {
      {"t1", "tile"}, {"t2", "tile"}, {"c1", "color"}};
  auto gspec = augment::expand(spec, f.domain, objects);
  model::GeneratorConfig cfg;
  cfg.assignment = {{"n_robot", 1}, {"n_tile", 1}, {"n_color", 1}};
  auto low = model::compile_low(f.domain, gspec, cfg);
  auto high = model::compile_high(f.domain, gspec, cfg);
  // identical content; only the mode tag differs
  auto strip_mode = [](std::string text) {
    return text.substr(text.find('\n') + 1);
  };
  CHECK(strip_mode(model::model_listing(low)) ==
        strip_mode(model::model_listing(high)));
}

TEST_CASE("empty model tallies zero everywhere") {
  model::ConstraintModel m;
  auto tally = model::count_constraints(m);
  CHECK(tally.structural == 0);
  CHECK(tally.cardinality == 0);
  CHECK(tally.logic == 0);
  CHECK(tally.fixed == 0);
}

TEST_CASE("int bounds become ranged variables") {
  Fixture f;
  auto spec = augment::parse_instance_constraints(
      sexpr::parse_one("(:instance-constraints (min fuel 2) (max fuel 9))"),
      f.domain);
  auto gspec = augment::expand(spec, f.domain, {});
  model::GeneratorConfig cfg;
  cfg.assignment = {{"n_robot", 1}, {"n_tile", 1}, {"n_color", 1}};
  auto m = model::compile_low(f.domain, gspec, cfg);
  REQUIRE(m.int_count() == 1);
  const auto& var = m.variables.back();
  CHECK(var.name == "fuel");
  CHECK(var.lower == 2);
  CHECK(var.upper == 9);
}

TEST_CASE("model listing is deterministic and names atoms") {
  Fixture f;
  auto m = f.compile(ConstraintModel::Mode::High, 2, 1, 1);
  auto text = model::model_listing(m);
  CHECK(text == model::model_listing(m));
  CHECK(text.find("mode high") == 0);
  CHECK(text.find("fix (up tile_0-1 tile_1-1) = true") != std::string::npos);
  CHECK(text.find("choice one-of (robot-at robot1 tile_0-0)") !=
        std::string::npos);
  CHECK(text.find("appear (clear tile_0-0) = false") != std::string::npos);
}
