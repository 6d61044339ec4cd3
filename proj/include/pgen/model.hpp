#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "pgen/augment.hpp"
#include "pgen/pddl.hpp"

namespace pgen::model {

using augment::Comparator;
using augment::Scope;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct GeneratorConfig {
  std::map<std::string, long long> assignment;
  std::uint64_t seed = 0;
  // Default upper bound for integer fluents without a max declaration.
  long long int_default_max = std::numeric_limits<std::int32_t>::max();
};

inline long long require_param(const GeneratorConfig& config,
                               const std::string& name) {
  auto it = config.assignment.find(name);
  if (it == config.assignment.end())
    throw SemanticError("config is missing parameter '" + name + "'");
  if (it->second < 1)
    throw SemanticError("parameter '" + name + "' must be a positive integer");
  return it->second;
}

// ---------------------------------------------------------------------------
// Finite-domain model
// ---------------------------------------------------------------------------

struct FDVariable {
  int id = -1;
  enum class Kind { Bool, Int } kind = Kind::Bool;
  pddl::GroundAtom atom;  // Bool
  Scope scope = Scope::Init;
  std::string name;  // Int
  long long lower = 0, upper = 0;
};

struct Constraint {
  enum class Kind {
    Cardinality,        // |true vars| cmp k
    Biconditional,      // a <-> b
    BiconditionalConst, // a <-> value
    Xor,                // exactly one of a, b
    Implies,            // a -> b
    Clause              // at least one literal holds
  };
  enum class Origin {
    Term, XorTerm, OrTerm, NotTerm, Structural, Appear, ChoiceGroup, Blocking
  };

  Kind kind;
  Origin origin = Origin::Term;
  std::vector<int> vars;  // Cardinality
  Comparator cmp = Comparator::Eq;
  long long k = 0;
  int a = -1, b = -1;                        // pair forms
  bool value = false;                        // BiconditionalConst
  std::vector<std::pair<int, bool>> lits;    // Clause
  std::string note;
};

struct Tally {
  long long structural = 0;
  long long cardinality = 0;
  long long logic = 0;
  long long fixed = 0;
};

struct ConstraintModel {
  enum class Mode { Low, High };

  Mode mode = Mode::Low;
  std::vector<FDVariable> variables;
  std::vector<Constraint> constraints;
  // Constructive structural assignment (high mode): every listed variable is
  // forced to the given value before search starts.
  std::vector<std::pair<int, bool>> fixed;
  // Absorbed exactly-1 groups (high mode): search picks one member true.
  std::vector<std::vector<int>> choice_groups;
  // Structural accounting: one unit per emitted pair constraint in low mode,
  // four definedness decisions per tile in high mode.
  long long structural_units = 0;
  std::vector<pddl::TypedName> objects;

  std::unordered_map<std::string, int> index;

  static std::string key(Scope scope, const pddl::GroundAtom& atom) {
    return (scope == Scope::Init ? "i" : "g") + atom.str();
  }

  int find_var(Scope scope, const pddl::GroundAtom& atom) const {
    auto it = index.find(key(scope, atom));
    return it == index.end() ? -1 : it->second;
  }

  long long bool_count() const {
    long long n = 0;
    for (const auto& v : variables)
      if (v.kind == FDVariable::Kind::Bool) ++n;
    return n;
  }

  long long int_count() const {
    return static_cast<long long>(variables.size()) - bool_count();
  }
};

// ---------------------------------------------------------------------------
// Square-grid arithmetic (1-based tile indices, side s, n = s*s tiles)
// ---------------------------------------------------------------------------

// Directions are indexed as in the template: 0=up, 1=down, 2=left, 3=right.
inline bool grid_pair_holds(int dir, long long u, long long v, long long s) {
  switch (dir) {
    case 0: return u == v + s;
    case 1: return u == v - s;
    case 2: return u == v + 1 && v % s != 0;
    default: return u == v - 1 && u % s != 0;
  }
}

// Partner of tile u in the given direction, or 0 when undefined.
inline long long grid_partner(int dir, long long u, long long s) {
  const long long n = s * s;
  switch (dir) {
    case 0: return u - s >= 1 ? u - s : 0;
    case 1: return u + s <= n ? u + s : 0;
    case 2: return (u - 1 >= 1 && (u - 1) % s != 0) ? u - 1 : 0;
    default: return (u + 1 <= n && u % s != 0) ? u + 1 : 0;
  }
}

// Name of tile index u (1..s*s). Chosen so the arithmetic above reproduces
// the row/column adjacency naming of standard floor-tile instances:
// up(u,v) with u = v + s maps to (up <type>_{r-1}-{c} <type>_{r}-{c}).
inline std::string grid_tile_name(const std::string& type, long long u,
                                  long long s) {
  const long long j = s * s - u;
  return type + "_" + std::to_string(j / s) + "-" + std::to_string(j % s);
}

// ---------------------------------------------------------------------------
// Object synthesis
// ---------------------------------------------------------------------------

// Objects per declared type, counts taken from the config: grid-governed
// types get side^2 tiles with grid names, a two-valued color type uses
// white/black, and everything else is <type>1..<type>N.
inline std::vector<pddl::TypedName> objects_from_config(
    const pddl::DomainSpec& domain,
    const std::vector<augment::StructuralTemplate>& structures,
    const GeneratorConfig& config) {
  std::vector<pddl::TypedName> objects;
  for (const auto& type : domain.types) {
    const augment::StructuralTemplate* tmpl = nullptr;
    for (const auto& t : structures)
      if (t.type_arg == type.name) tmpl = &t;
    if (tmpl) {
      const long long s = require_param(config, tmpl->aux_param);
      auto declared = config.assignment.find("n_" + type.name);
      if (declared != config.assignment.end() && declared->second != s * s)
        throw SemanticError("n_" + type.name + " must equal " +
                            tmpl->aux_param + "^2 = " + std::to_string(s * s));
      for (long long row = 0; row < s; ++row)
        for (long long col = 0; col < s; ++col)
          objects.push_back({type.name + "_" + std::to_string(row) + "-" +
                                 std::to_string(col),
                             type.name});
    } else {
      const long long n = require_param(config, "n_" + type.name);
      if (type.name == "color" && n == 2) {
        objects.push_back({"white", "color"});
        objects.push_back({"black", "color"});
      } else {
        for (long long i = 1; i <= n; ++i)
          objects.push_back({type.name + std::to_string(i), type.name});
      }
    }
  }
  return objects;
}

// ---------------------------------------------------------------------------
// Compilation
// ---------------------------------------------------------------------------

namespace detail {

struct Compiler {
  const pddl::DomainSpec& domain;
  const augment::GroundedValiditySpec& gspec;
  const GeneratorConfig& config;
  ConstraintModel m;

  // Template predicate -> true atoms (high mode), used to pin referenced
  // structural atoms that were not materialized.
  std::map<std::string, std::set<pddl::GroundAtom>> template_true;
  std::set<std::string> template_preds;

  int add_bool(Scope scope, const pddl::GroundAtom& atom) {
    const std::string key = ConstraintModel::key(scope, atom);
    auto it = m.index.find(key);
    if (it != m.index.end()) return it->second;
    FDVariable var;
    var.id = static_cast<int>(m.variables.size());
    var.kind = FDVariable::Kind::Bool;
    var.atom = atom;
    var.scope = scope;
    m.index.emplace(key, var.id);
    m.variables.push_back(std::move(var));
    return static_cast<int>(m.variables.size()) - 1;
  }

  void compile_structures() {
    for (const auto& tmpl : gspec.structures) {
      const long long s = require_param(config, tmpl.aux_param);
      const long long n = s * s;
      for (int dir = 0; dir < 4; ++dir)
        template_preds.insert(tmpl.predicates[static_cast<std::size_t>(dir)]);
      if (m.mode == ConstraintModel::Mode::Low) {
        for (int dir = 0; dir < 4; ++dir) {
          const std::string& pred =
              tmpl.predicates[static_cast<std::size_t>(dir)];
          for (long long u = 1; u <= n; ++u) {
            for (long long v = 1; v <= n; ++v) {
              pddl::GroundAtom atom{
                  pred,
                  {grid_tile_name(tmpl.type_arg, u, s),
                   grid_tile_name(tmpl.type_arg, v, s)}};
              const int var = add_bool(Scope::Init, atom);
              Constraint c;
              c.kind = Constraint::Kind::BiconditionalConst;
              c.origin = Constraint::Origin::Structural;
              c.a = var;
              c.value = grid_pair_holds(dir, u, v, s);
              m.constraints.push_back(std::move(c));
              ++m.structural_units;
            }
          }
        }
      } else {
        // Constructive decoding: one definedness decision per tile and
        // direction; only the defined (true) atoms are materialized.
        for (int dir = 0; dir < 4; ++dir) {
          const std::string& pred =
              tmpl.predicates[static_cast<std::size_t>(dir)];
          for (long long u = 1; u <= n; ++u) {
            ++m.structural_units;
            const long long v = grid_partner(dir, u, s);
            if (v == 0) continue;
            pddl::GroundAtom atom{
                pred,
                {grid_tile_name(tmpl.type_arg, u, s),
                 grid_tile_name(tmpl.type_arg, v, s)}};
            const int var = add_bool(Scope::Init, atom);
            m.fixed.emplace_back(var, true);
            template_true[pred].insert(atom);
          }
        }
      }
    }
  }

  // In high mode a cardinality term may reference structural atoms that were
  // not materialized; they are pinned to their constructive value.
  int card_var(Scope scope, const pddl::GroundAtom& atom) {
    if (m.mode == ConstraintModel::Mode::High && scope == Scope::Init &&
        template_preds.count(atom.predicate)) {
      const int existing = m.find_var(scope, atom);
      if (existing >= 0) return existing;
      const int var = add_bool(scope, atom);
      m.fixed.emplace_back(var, false);
      return var;
    }
    return add_bool(scope, atom);
  }

  void compile_cards() {
    for (const auto& card : gspec.cards) {
      std::vector<int> vars;
      vars.reserve(card.atoms.size());
      for (const auto& atom : card.atoms) {
        const int var = card_var(card.scope, atom);
        bool seen = false;
        for (int v : vars) seen = seen || v == var;
        if (!seen) vars.push_back(var);
      }
      const bool absorb = m.mode == ConstraintModel::Mode::High &&
                          card.total_shape && card.scope == Scope::Init &&
                          !template_preds.count(card.atoms[0].predicate);
      Constraint c;
      c.vars = std::move(vars);
      c.cmp = card.cmp;
      c.k = card.k;
      c.note = card.source;
      if (absorb) {
        // Total-function decoding: the exactly-1 constraint is dropped in
        // favor of a direct choice; the group still propagates as exactly-1.
        c.kind = Constraint::Kind::Cardinality;
        c.origin = Constraint::Origin::ChoiceGroup;
        m.choice_groups.push_back(c.vars);
        m.constraints.push_back(std::move(c));
        continue;
      }
      switch (card.origin) {
        case augment::TermOrigin::Term:
          c.origin = Constraint::Origin::Term;
          break;
        case augment::TermOrigin::NotTerm:
          c.origin = Constraint::Origin::NotTerm;
          break;
        case augment::TermOrigin::OrTerm:
          c.origin = Constraint::Origin::OrTerm;
          break;
        case augment::TermOrigin::XorTerm:
          c.origin = Constraint::Origin::XorTerm;
          break;
      }
      if (card.origin == augment::TermOrigin::XorTerm && c.vars.size() == 2 &&
          c.cmp == Comparator::Eq && c.k == 1) {
        c.kind = Constraint::Kind::Xor;
        c.a = c.vars[0];
        c.b = c.vars[1];
      } else {
        c.kind = Constraint::Kind::Cardinality;
      }
      m.constraints.push_back(std::move(c));
    }
  }

  void compile_appears() {
    for (const auto& appear : gspec.appears) {
      const int var = add_bool(Scope::Goal, appear.atom);
      Constraint c;
      c.kind = Constraint::Kind::BiconditionalConst;
      c.origin = Constraint::Origin::Appear;
      c.a = var;
      c.value = !appear.negated;
      c.note = appear.atom.str();
      m.constraints.push_back(std::move(c));
    }
  }

  void compile_bounds() {
    std::map<std::string, std::pair<long long, long long>> ranges;
    for (const auto& bound : gspec.bounds) {
      auto [it, inserted] = ranges.emplace(
          bound.fluent, std::make_pair(0LL, config.int_default_max));
      if (bound.kind == augment::IntBound::Kind::Min)
        it->second.first = bound.value;
      else
        it->second.second = bound.value;
    }
    for (const auto& [name, range] : ranges) {
      FDVariable var;
      var.id = static_cast<int>(m.variables.size());
      var.kind = FDVariable::Kind::Int;
      var.name = name;
      var.lower = range.first;
      var.upper = range.second;
      if (var.lower > var.upper)
        throw SemanticError("bounds for '" + name + "' are empty");
      m.variables.push_back(std::move(var));
    }
  }

  ConstraintModel run(ConstraintModel::Mode mode) {
    m.mode = mode;
    m.objects = objects_from_config(domain, gspec.structures, config);
    compile_structures();
    compile_cards();
    compile_appears();
    compile_bounds();
    return std::move(m);
  }
};

}  // namespace detail

inline ConstraintModel compile_low(const pddl::DomainSpec& domain,
                                   const augment::GroundedValiditySpec& gspec,
                                   const GeneratorConfig& config) {
  detail::Compiler compiler{domain, gspec, config, {}, {}, {}};
  return compiler.run(ConstraintModel::Mode::Low);
}

inline ConstraintModel compile_high(const pddl::DomainSpec& domain,
                                    const augment::GroundedValiditySpec& gspec,
                                    const GeneratorConfig& config) {
  detail::Compiler compiler{domain, gspec, config, {}, {}, {}};
  return compiler.run(ConstraintModel::Mode::High);
}

// ---------------------------------------------------------------------------
// Accounting
// ---------------------------------------------------------------------------

inline Tally count_constraints(const ConstraintModel& m) {
  Tally tally;
  tally.structural = m.structural_units;
  tally.fixed = static_cast<long long>(m.fixed.size());
  for (const auto& c : m.constraints) {
    switch (c.origin) {
      case Constraint::Origin::Term:
      case Constraint::Origin::NotTerm:
        ++tally.cardinality;
        break;
      case Constraint::Origin::XorTerm:
      case Constraint::Origin::OrTerm:
      case Constraint::Origin::Appear:
        ++tally.logic;
        break;
      case Constraint::Origin::Structural:
      case Constraint::Origin::ChoiceGroup:
      case Constraint::Origin::Blocking:
        break;
    }
  }
  return tally;
}

// ---------------------------------------------------------------------------
// Listing (translate subcommand, golden tests)
// ---------------------------------------------------------------------------

inline std::string model_listing(const ConstraintModel& m) {
  std::ostringstream out;
  out << "mode " << (m.mode == ConstraintModel::Mode::Low ? "low" : "high")
      << "\n";
  for (const auto& v : m.variables) {
    if (v.kind == FDVariable::Kind::Bool)
      out << "var b" << v.id << ' ' << augment::scope_name(v.scope) << ' '
          << v.atom.str() << "\n";
    else
      out << "var i" << v.id << ' ' << v.name << " [" << v.lower << ".."
          << v.upper << "]\n";
  }
  for (const auto& [var, value] : m.fixed)
    out << "fix " << m.variables[static_cast<std::size_t>(var)].atom.str()
        << " = " << (value ? "true" : "false") << "\n";
  for (const auto& group : m.choice_groups) {
    out << "choice one-of";
    for (int v : group)
      out << ' ' << m.variables[static_cast<std::size_t>(v)].atom.str();
    out << "\n";
  }
  for (const auto& c : m.constraints) {
    switch (c.kind) {
      case Constraint::Kind::BiconditionalConst:
        out << (c.origin == Constraint::Origin::Structural ? "structural "
                                                           : "appear ")
            << m.variables[static_cast<std::size_t>(c.a)].atom.str() << " = "
            << (c.value ? "true" : "false") << "\n";
        break;
      case Constraint::Kind::Cardinality: {
        if (c.origin == Constraint::Origin::ChoiceGroup) break;
        const char* label =
            c.origin == Constraint::Origin::XorTerm ||
                    c.origin == Constraint::Origin::OrTerm
                ? "logic"
                : "cardinality";
        out << label << " count(";
        for (std::size_t i = 0; i < c.vars.size(); ++i) {
          if (i) out << ' ';
          out << m.variables[static_cast<std::size_t>(c.vars[i])].atom.str();
        }
        out << ") " << augment::comparator_name(c.cmp) << ' ' << c.k << "\n";
        break;
      }
      case Constraint::Kind::Xor:
        out << "logic xor("
            << m.variables[static_cast<std::size_t>(c.a)].atom.str() << ' '
            << m.variables[static_cast<std::size_t>(c.b)].atom.str() << ")\n";
        break;
      case Constraint::Kind::Biconditional:
        out << "logic iff(b" << c.a << " b" << c.b << ")\n";
        break;
      case Constraint::Kind::Implies:
        out << "logic implies(b" << c.a << " b" << c.b << ")\n";
        break;
      case Constraint::Kind::Clause:
        out << "clause\n";
        break;
    }
  }
  return out.str();
}

}  // namespace pgen::model
