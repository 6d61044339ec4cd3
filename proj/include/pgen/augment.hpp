#pragma once

#include <array>
#include <charconv>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pgen/pddl.hpp"
#include "pgen/sexpr.hpp"

namespace pgen {

// Semantic error raised after parsing: statically unsatisfiable terms,
// missing parameters, unsupported formula shapes.
class SemanticError : public std::runtime_error {
public:
  explicit SemanticError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace augment {

enum class Scope { Init, Goal };

inline const char* scope_name(Scope s) {
  return s == Scope::Init ? "init" : "goal";
}

// ---------------------------------------------------------------------------
// Parsed constraint language
// ---------------------------------------------------------------------------

struct PatternArg {
  enum class Kind { Variable, Constant, Wildcard } kind;
  std::string text;  // variable name (without '?') or object name
};

// A schematic fluent: predicate applied to variables, constants and '_'
// wildcards. Denotes the set of type-correct ground atoms it matches.
struct FluentPattern {
  std::string predicate;
  std::vector<PatternArg> args;

  std::string str() const {
    std::string out = "(" + predicate;
    for (const auto& a : args) {
      out += ' ';
      switch (a.kind) {
        case PatternArg::Kind::Variable: out += '?' + a.text; break;
        case PatternArg::Kind::Constant: out += a.text; break;
        case PatternArg::Kind::Wildcard: out += '_'; break;
      }
    }
    return out + ")";
  }
};

enum class CardKind { ExactlyK, AtLeastK, AtMostK };

struct CardinalityTerm {
  CardKind kind;
  FluentPattern pattern;
  long long k = 0;
  bool value = true;          // Boolean indicator target
  bool value_is_int = false;  // accepted syntactically; rejected on Boolean
  long long int_value = 0;    // predicates when expanded
};

struct Formula {
  enum class Kind { Card, Appear, PatternLit, Not, And, Or, Xor, Forall };
  Kind kind;
  std::optional<CardinalityTerm> card;   // Card
  std::optional<FluentPattern> pattern;  // Appear, PatternLit
  std::vector<Formula> children;         // Not:1, And/Or:n, Xor:2, Forall:1
  std::vector<pddl::TypedName> binders;  // Forall
};

struct ValidityConstraint {
  Scope scope;
  Formula body;
};

// Declarative structure over adjacency predicates; only square grids with
// up/down/left/right links are supported.
struct StructuralTemplate {
  std::string type_arg;                        // e.g. tile
  std::array<std::string, 4> predicates;       // up, down, left, right
  std::string aux_param;                       // e.g. tile_size
};

struct IntBound {
  std::string fluent;
  enum class Kind { Min, Max } kind;
  long long value = 0;
};

struct ValiditySpec {
  std::vector<ValidityConstraint> constraints;
  std::vector<StructuralTemplate> structures;
  std::vector<IntBound> bounds;
  // Free generator parameters: n_<type> per object type without a structural
  // template, plus each template's auxiliary size parameter. Types governed
  // by a grid template have their count derived as aux_param squared.
  std::vector<std::string> params;
  std::vector<std::pair<std::string, std::string>> derived_counts;  // n_<type> -> aux
};

// ---------------------------------------------------------------------------
// Grounded form
// ---------------------------------------------------------------------------

enum class Comparator { Eq, Ge, Le };

inline const char* comparator_name(Comparator c) {
  switch (c) {
    case Comparator::Eq: return "=";
    case Comparator::Ge: return ">=";
    default: return "<=";
  }
}

enum class TermOrigin { Term, XorTerm, OrTerm, NotTerm };

// A ground cardinality constraint: |true atoms of `atoms`| cmp k.
struct GroundCardinality {
  Scope scope;
  Comparator cmp;
  long long k;
  std::vector<pddl::GroundAtom> atoms;
  TermOrigin origin = TermOrigin::Term;
  // Exactly-1-true over all objects in one argument position: eligible for
  // total-function absorption under the high-level encoding.
  bool total_shape = false;
  std::string source;  // pattern text for listings and messages
};

struct GroundAppear {
  pddl::GroundAtom atom;
  bool negated;
};

struct GroundedValiditySpec {
  std::vector<GroundCardinality> cards;
  std::vector<GroundAppear> appears;
  std::vector<StructuralTemplate> structures;
  std::vector<IntBound> bounds;
};

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

using pddl::DomainSpec;
using pddl::TypedName;

[[noreturn]] inline void fail(const sexpr::Node& at, const std::string& msg) {
  throw ParseError(at.line, at.col, msg);
}

inline long long parse_int(const sexpr::Node& n, const char* what) {
  if (!n.is_atom()) fail(n, std::string("expected ") + what);
  long long value = 0;
  auto [ptr, ec] = std::from_chars(n.token.data(),
                                   n.token.data() + n.token.size(), value);
  if (ec != std::errc() || ptr != n.token.data() + n.token.size())
    fail(n, std::string("expected ") + what + ", got '" + n.token + "'");
  return value;
}

struct Env {
  std::vector<TypedName> bound;

  bool is_bound(std::string_view var) const {
    for (const auto& b : bound)
      if (b.name == var) return true;
    return false;
  }
};

inline FluentPattern parse_pattern(const sexpr::Node& n,
                                   const DomainSpec& domain, const Env& env) {
  if (!n.is_list() || n.children.empty() || !n.children[0].is_atom())
    fail(n, "expected a fluent pattern (predicate args...)");
  FluentPattern pattern;
  pattern.predicate = n.children[0].token;
  const pddl::PredicateDecl* decl = domain.find_predicate(pattern.predicate);
  if (!decl) fail(n, "unknown predicate '" + pattern.predicate + "'");
  if (decl->params.size() != n.children.size() - 1)
    fail(n, "predicate '" + pattern.predicate + "' expects " +
                std::to_string(decl->params.size()) + " arguments, got " +
                std::to_string(n.children.size() - 1));
  for (std::size_t i = 1; i < n.children.size(); ++i) {
    const sexpr::Node& arg = n.children[i];
    if (!arg.is_atom()) fail(arg, "expected a pattern argument");
    if (arg.token == "_") {
      pattern.args.push_back({PatternArg::Kind::Wildcard, ""});
    } else if (pddl::is_variable(arg.token)) {
      std::string var = arg.token.substr(1);
      if (!env.is_bound(var))
        fail(arg, "unbound variable '?" + var + "'");
      pattern.args.push_back({PatternArg::Kind::Variable, std::move(var)});
    } else if (pddl::is_identifier(arg.token)) {
      pattern.args.push_back({PatternArg::Kind::Constant, arg.token});
    } else {
      fail(arg, "bad pattern argument '" + arg.token + "'");
    }
  }
  return pattern;
}

inline Formula parse_formula(const sexpr::Node& n, const DomainSpec& domain,
                             Scope scope, Env& env);

inline Formula parse_card(const sexpr::Node& n, CardKind kind,
                          const DomainSpec& domain, const Env& env) {
  if (n.children.size() != 4)
    fail(n, "cardinality term takes (keyword pattern k value)");
  CardinalityTerm term;
  term.kind = kind;
  term.pattern = parse_pattern(n.children[1], domain, env);
  term.k = parse_int(n.children[2], "a nonnegative integer k");
  if (term.k < 0) fail(n.children[2], "k must be nonnegative");
  const sexpr::Node& value = n.children[3];
  if (sexpr::atom_is(value, "true")) {
    term.value = true;
  } else if (sexpr::atom_is(value, "false")) {
    term.value = false;
  } else {
    term.value_is_int = true;
    term.int_value = parse_int(value, "a Boolean or integer value");
  }
  Formula f;
  f.kind = Formula::Kind::Card;
  f.card = std::move(term);
  return f;
}

inline Formula parse_formula(const sexpr::Node& n, const DomainSpec& domain,
                             Scope scope, Env& env) {
  if (!n.is_list() || n.children.empty() || !n.children[0].is_atom())
    fail(n, "expected a constraint formula");
  const sexpr::Node& head = n.children[0];

  if (sexpr::atom_is(head, "exactly-k"))
    return parse_card(n, CardKind::ExactlyK, domain, env);
  if (sexpr::atom_is(head, "atleast-k"))
    return parse_card(n, CardKind::AtLeastK, domain, env);
  if (sexpr::atom_is(head, "atmost-k"))
    return parse_card(n, CardKind::AtMostK, domain, env);

  if (sexpr::atom_is(head, "appear")) {
    if (scope != Scope::Goal)
      fail(n, "appear is only valid in goal scope");
    if (n.children.size() != 2) fail(n, "appear takes one fluent pattern");
    Formula f;
    f.kind = Formula::Kind::Appear;
    f.pattern = parse_pattern(n.children[1], domain, env);
    return f;
  }

  if (sexpr::atom_is(head, "not")) {
    if (n.children.size() != 2) fail(n, "(not ...) takes one formula");
    Formula f;
    f.kind = Formula::Kind::Not;
    f.children.push_back(parse_formula(n.children[1], domain, scope, env));
    return f;
  }

  if (sexpr::atom_is(head, "and") || sexpr::atom_is(head, "or")) {
    Formula f;
    f.kind = sexpr::atom_is(head, "and") ? Formula::Kind::And
                                         : Formula::Kind::Or;
    for (std::size_t i = 1; i < n.children.size(); ++i)
      f.children.push_back(parse_formula(n.children[i], domain, scope, env));
    if (f.children.empty()) fail(n, "empty conjunction/disjunction");
    return f;
  }

  if (sexpr::atom_is(head, "xor")) {
    if (n.children.size() != 3) fail(n, "xor takes exactly two operands");
    Formula f;
    f.kind = Formula::Kind::Xor;
    f.children.push_back(parse_formula(n.children[1], domain, scope, env));
    f.children.push_back(parse_formula(n.children[2], domain, scope, env));
    for (const Formula& c : f.children)
      if (c.kind != Formula::Kind::PatternLit &&
          c.kind != Formula::Kind::Appear)
        fail(n, "xor operands must be fluent patterns");
    return f;
  }

  if (sexpr::atom_is(head, "forall")) {
    if (n.children.size() != 3 || !n.children[1].is_list())
      fail(n, "forall takes a binder list and one body formula");
    Formula f;
    f.kind = Formula::Kind::Forall;
    f.binders = pddl::detail::parse_typed_list(n.children[1].children, 0, true,
                                               n.children[1]);
    if (f.binders.empty()) fail(n.children[1], "empty forall binder list");
    for (const auto& b : f.binders) {
      if (!domain.type_declared(b.type))
        fail(n.children[1], "undeclared type '" + b.type + "' in forall");
      if (env.is_bound(b.name))
        fail(n.children[1], "variable '?" + b.name + "' is already bound");
    }
    for (const auto& b : f.binders) env.bound.push_back(b);
    f.children.push_back(parse_formula(n.children[2], domain, scope, env));
    for (std::size_t i = 0; i < f.binders.size(); ++i) env.bound.pop_back();
    return f;
  }

  // A bare fluent pattern used as a literal: true iff at least one matching
  // ground atom is true.
  if (domain.find_predicate(head.token)) {
    Formula f;
    f.kind = Formula::Kind::PatternLit;
    f.pattern = parse_pattern(n, domain, env);
    return f;
  }

  fail(head, "unknown keyword '" + head.token + "' in constraint");
}

// Splits top-level conjunctions (pushing forall through and) so each
// resulting constraint carries one term tree.
inline void normalize(Scope scope, Formula&& f,
                      std::vector<ValidityConstraint>& out) {
  if (f.kind == Formula::Kind::And) {
    for (Formula& child : f.children) normalize(scope, std::move(child), out);
    return;
  }
  if (f.kind == Formula::Kind::Forall &&
      f.children.front().kind == Formula::Kind::And) {
    for (Formula& child : f.children.front().children) {
      Formula wrapped;
      wrapped.kind = Formula::Kind::Forall;
      wrapped.binders = f.binders;
      wrapped.children.push_back(std::move(child));
      normalize(scope, std::move(wrapped), out);
    }
    return;
  }
  out.push_back({scope, std::move(f)});
}

inline bool is_grid_keyword(const sexpr::Node& n) {
  return sexpr::atom_is(n, "isLRUDSquareGrid") ||
         sexpr::atom_is(n, "isLRUDquareGrid");
}

inline StructuralTemplate parse_grid_template(const sexpr::Node& n,
                                              const DomainSpec& domain) {
  if (n.children.size() != 6)
    fail(n, "isLRUDSquareGrid takes (type up down left right)");
  StructuralTemplate tmpl;
  tmpl.type_arg = pddl::detail::require_identifier(n.children[1], "type name");
  if (!domain.type_declared(tmpl.type_arg))
    fail(n.children[1], "undeclared type '" + tmpl.type_arg + "'");
  for (int i = 0; i < 4; ++i) {
    const std::string& pred = pddl::detail::require_identifier(
        n.children[static_cast<std::size_t>(i) + 2], "predicate name");
    const pddl::PredicateDecl* decl = domain.find_predicate(pred);
    if (!decl) fail(n, "unknown predicate '" + pred + "'");
    if (decl->params.size() != 2 ||
        !domain.type_compatible(tmpl.type_arg, decl->params[0].type) ||
        !domain.type_compatible(tmpl.type_arg, decl->params[1].type))
      fail(n, "grid predicate '" + pred + "' must have arity 2 over '" +
                  tmpl.type_arg + "'");
    tmpl.predicates[static_cast<std::size_t>(i)] = pred;
  }
  tmpl.aux_param = tmpl.type_arg + "_size";
  return tmpl;
}

}  // namespace detail

// Semantic analysis of the (:instance-constraints ...) section.
inline ValiditySpec parse_instance_constraints(const sexpr::Node& section,
                                               const pddl::DomainSpec& domain) {
  using detail::fail;
  ValiditySpec spec;
  if (!section.is_list() || section.children.empty() ||
      !sexpr::atom_is(section.children[0], ":instance-constraints"))
    fail(section, "expected (:instance-constraints ...)");

  for (std::size_t i = 1; i < section.children.size(); ++i) {
    const sexpr::Node& entry = section.children[i];
    if (!entry.is_list() || entry.children.empty() ||
        !entry.children[0].is_atom())
      fail(entry, "expected (init ...), (goal ...), (min ...) or (max ...)");
    const sexpr::Node& head = entry.children[0];

    if (sexpr::atom_is(head, "min") || sexpr::atom_is(head, "max")) {
      if (entry.children.size() != 3)
        fail(entry, "min/max take a fluent name and an integer");
      IntBound bound;
      bound.fluent =
          pddl::detail::require_identifier(entry.children[1], "fluent name");
      if (domain.find_predicate(bound.fluent))
        fail(entry.children[1], "min/max apply to integer fluents; '" +
                                    bound.fluent + "' is a predicate");
      bound.kind = sexpr::atom_is(head, "min") ? IntBound::Kind::Min
                                               : IntBound::Kind::Max;
      bound.value = detail::parse_int(entry.children[2], "an integer bound");
      spec.bounds.push_back(bound);
      continue;
    }

    Scope scope;
    if (sexpr::atom_is(head, "init")) {
      scope = Scope::Init;
    } else if (sexpr::atom_is(head, "goal")) {
      scope = Scope::Goal;
    } else {
      fail(head, "unknown keyword '" + head.token + "'");
    }
    if (entry.children.size() != 2)
      fail(entry, "init/goal take exactly one constraint");
    const sexpr::Node& body = entry.children[1];

    if (body.is_list() && !body.children.empty() &&
        detail::is_grid_keyword(body.children[0])) {
      if (scope != Scope::Init)
        fail(body, "structural templates are only valid in init scope");
      spec.structures.push_back(detail::parse_grid_template(body, domain));
      continue;
    }

    detail::Env env;
    detail::normalize(scope, detail::parse_formula(body, domain, scope, env),
                      spec.constraints);
  }

  // min <= max per fluent when both are declared
  for (const auto& lo : spec.bounds) {
    if (lo.kind != IntBound::Kind::Min) continue;
    for (const auto& hi : spec.bounds) {
      if (hi.kind == IntBound::Kind::Max && hi.fluent == lo.fluent &&
          lo.value > hi.value)
        throw SemanticError("bounds for '" + lo.fluent + "' are empty: min " +
                            std::to_string(lo.value) + " > max " +
                            std::to_string(hi.value));
    }
  }

  // One generator parameter per object type; grid-governed types use the
  // template's size parameter instead, with their count derived as size^2.
  for (const auto& type : domain.types) {
    const StructuralTemplate* tmpl = nullptr;
    for (const auto& t : spec.structures)
      if (t.type_arg == type.name) {
        if (tmpl)
          throw SemanticError("multiple structural templates for type '" +
                              type.name + "'");
        tmpl = &t;
      }
    if (tmpl) {
      spec.params.push_back(tmpl->aux_param);
      spec.derived_counts.emplace_back("n_" + type.name, tmpl->aux_param);
    } else {
      spec.params.push_back("n_" + type.name);
    }
  }
  for (std::size_t a = 0; a < spec.params.size(); ++a)
    for (std::size_t b = a + 1; b < spec.params.size(); ++b)
      if (spec.params[a] == spec.params[b])
        throw SemanticError("duplicate generator parameter '" +
                            spec.params[a] + "'");
  return spec;
}

// ---------------------------------------------------------------------------
// Grounding
// ---------------------------------------------------------------------------

namespace detail {

struct Binding {
  std::string var;
  std::string object;
};

inline std::vector<std::string> objects_of_type(
    const DomainSpec& domain, const std::vector<TypedName>& objects,
    std::string_view type) {
  std::vector<std::string> out;
  for (const auto& o : objects)
    if (domain.type_compatible(o.type, type)) out.push_back(o.name);
  return out;
}

// All type-correct instantiations of the pattern's wildcard positions, with
// variables resolved through `bindings`.
inline std::vector<pddl::GroundAtom> match_pattern(
    const FluentPattern& pattern, const DomainSpec& domain,
    const std::vector<TypedName>& objects,
    const std::vector<Binding>& bindings) {
  const pddl::PredicateDecl* decl = domain.find_predicate(pattern.predicate);
  std::vector<std::vector<std::string>> choices(pattern.args.size());
  for (std::size_t i = 0; i < pattern.args.size(); ++i) {
    const PatternArg& arg = pattern.args[i];
    switch (arg.kind) {
      case PatternArg::Kind::Wildcard:
        choices[i] = objects_of_type(domain, objects, decl->params[i].type);
        break;
      case PatternArg::Kind::Variable: {
        const std::string* bound = nullptr;
        for (const auto& b : bindings)
          if (b.var == arg.text) bound = &b.object;
        if (!bound)
          throw SemanticError("unbound variable '?" + arg.text +
                              "' in pattern " + pattern.str());
        choices[i] = {*bound};
        break;
      }
      case PatternArg::Kind::Constant: {
        const TypedName* obj = nullptr;
        for (const auto& o : objects)
          if (o.name == arg.text) obj = &o;
        if (!obj)
          throw SemanticError("unknown object '" + arg.text + "' in pattern " +
                              pattern.str());
        if (!domain.type_compatible(obj->type, decl->params[i].type))
          throw SemanticError("object '" + arg.text +
                              "' has incompatible type in pattern " +
                              pattern.str());
        choices[i] = {arg.text};
        break;
      }
    }
  }
  std::vector<pddl::GroundAtom> atoms;
  pddl::GroundAtom atom;
  atom.predicate = pattern.predicate;
  atom.args.resize(pattern.args.size());
  std::size_t total = 1;
  for (const auto& c : choices) total *= c.size();
  atoms.reserve(total);
  std::vector<std::size_t> idx(pattern.args.size(), 0);
  if (total == 0) return atoms;
  for (;;) {
    for (std::size_t i = 0; i < idx.size(); ++i) atom.args[i] = choices[i][idx[i]];
    atoms.push_back(atom);
    std::size_t pos = idx.size();
    while (pos > 0) {
      --pos;
      if (++idx[pos] < choices[pos].size()) break;
      idx[pos] = 0;
      if (pos == 0) return atoms;
    }
    if (idx.size() == 0) return atoms;
  }
}

inline int wildcard_count(const FluentPattern& p) {
  int n = 0;
  for (const auto& a : p.args)
    if (a.kind == PatternArg::Kind::Wildcard) ++n;
  return n;
}

struct Expander {
  const DomainSpec& domain;
  const std::vector<TypedName>& objects;
  GroundedValiditySpec& out;

  void emit_card(Scope scope, const CardinalityTerm& term,
                 const std::vector<Binding>& bindings, bool negate) {
    if (term.value_is_int)
      throw SemanticError(
          "integer-valued cardinality over predicate '" +
          term.pattern.predicate +
          "'; predicate atoms take Boolean values (use True or False)");
    GroundCardinality card;
    card.scope = scope;
    card.source = term.pattern.str();
    card.atoms = match_pattern(term.pattern, domain, objects, bindings);
    const long long n = static_cast<long long>(card.atoms.size());

    CardKind kind = term.kind;
    long long k = term.k;
    if (negate) {
      switch (kind) {
        case CardKind::AtLeastK:
          if (k == 0)
            throw SemanticError("negated atleast-0 over " + card.source +
                                " is statically unsatisfiable");
          kind = CardKind::AtMostK;
          k = k - 1;
          break;
        case CardKind::AtMostK:
          kind = CardKind::AtLeastK;
          k = k + 1;
          break;
        case CardKind::ExactlyK:
          throw SemanticError("negated exactly-k over " + card.source +
                              " is not supported");
      }
      card.origin = TermOrigin::NotTerm;
    }
    // A 'False' target counts false atoms; rewrite to a count of true atoms.
    if (!term.value) {
      switch (kind) {
        case CardKind::ExactlyK: k = n - k; break;
        case CardKind::AtLeastK: kind = CardKind::AtMostK; k = n - k; break;
        case CardKind::AtMostK: kind = CardKind::AtLeastK; k = n - k; break;
      }
      if (k < 0)
        throw SemanticError("statically unsatisfiable term over " +
                            card.source + ": k exceeds the " +
                            std::to_string(n) + " matched atoms");
    }
    switch (kind) {
      case CardKind::ExactlyK: card.cmp = Comparator::Eq; break;
      case CardKind::AtLeastK: card.cmp = Comparator::Ge; break;
      case CardKind::AtMostK: card.cmp = Comparator::Le; break;
    }
    card.k = k;
    if ((card.cmp != Comparator::Le && card.k > n) || card.k < 0)
      throw SemanticError("statically unsatisfiable term over " + card.source +
                          ": requires " + std::to_string(card.k) +
                          " true atoms out of " + std::to_string(n));
    card.total_shape = !negate && term.value &&
                       term.kind == CardKind::ExactlyK && term.k == 1 &&
                       wildcard_count(term.pattern) == 1 && n >= 1;
    out.cards.push_back(std::move(card));
  }

  void emit_pattern_card(Scope scope, const std::vector<pddl::GroundAtom>& atoms,
                         Comparator cmp, long long k, TermOrigin origin,
                         const std::string& source) {
    GroundCardinality card;
    card.scope = scope;
    card.cmp = cmp;
    card.k = k;
    card.atoms = atoms;
    card.origin = origin;
    card.source = source;
    const long long n = static_cast<long long>(card.atoms.size());
    if (cmp != Comparator::Le && k > n)
      throw SemanticError("statically unsatisfiable term over " + source +
                          ": requires " + std::to_string(k) +
                          " true atoms out of " + std::to_string(n));
    out.cards.push_back(std::move(card));
  }

  // Union of matches over pattern/appear operands (or, xor).
  std::vector<pddl::GroundAtom> operand_union(
      const std::vector<Formula>& children,
      const std::vector<Binding>& bindings, std::string& source) {
    std::vector<pddl::GroundAtom> atoms;
    for (const Formula& c : children) {
      if (c.kind != Formula::Kind::PatternLit &&
          c.kind != Formula::Kind::Appear)
        throw SemanticError(
            "or/xor operands must be fluent patterns or appear terms");
      auto matched = match_pattern(*c.pattern, domain, objects, bindings);
      atoms.insert(atoms.end(), matched.begin(), matched.end());
      if (!source.empty()) source += ' ';
      source += c.pattern->str();
    }
    return atoms;
  }

  void expand_formula(Scope scope, const Formula& f,
                      std::vector<Binding>& bindings, bool negate) {
    switch (f.kind) {
      case Formula::Kind::Card:
        emit_card(scope, *f.card, bindings, negate);
        return;
      case Formula::Kind::Appear: {
        if (scope != Scope::Goal)
          throw SemanticError("appear is only valid in goal scope");
        auto atoms = match_pattern(*f.pattern, domain, objects, bindings);
        for (auto& atom : atoms)
          out.appears.push_back({std::move(atom), negate});
        return;
      }
      case Formula::Kind::PatternLit: {
        auto atoms = match_pattern(*f.pattern, domain, objects, bindings);
        if (negate)
          emit_pattern_card(scope, atoms, Comparator::Eq, 0,
                            TermOrigin::NotTerm, f.pattern->str());
        else
          emit_pattern_card(scope, atoms, Comparator::Ge, 1, TermOrigin::Term,
                            f.pattern->str());
        return;
      }
      case Formula::Kind::Not:
        if (negate)
          expand_formula(scope, f.children[0], bindings, false);
        else
          expand_formula(scope, f.children[0], bindings, true);
        return;
      case Formula::Kind::And:
        if (negate)
          throw SemanticError("negated conjunctions are not supported");
        for (const Formula& c : f.children)
          expand_formula(scope, c, bindings, false);
        return;
      case Formula::Kind::Or: {
        if (negate)
          throw SemanticError("negated disjunctions are not supported");
        std::string source;
        auto atoms = operand_union(f.children, bindings, source);
        emit_pattern_card(scope, atoms, Comparator::Ge, 1, TermOrigin::OrTerm,
                          "(or " + source + ")");
        return;
      }
      case Formula::Kind::Xor: {
        if (negate) throw SemanticError("negated xor is not supported");
        std::string source;
        auto atoms = operand_union(f.children, bindings, source);
        emit_pattern_card(scope, atoms, Comparator::Eq, 1, TermOrigin::XorTerm,
                          "(xor " + source + ")");
        return;
      }
      case Formula::Kind::Forall: {
        if (negate) throw SemanticError("negated forall is not supported");
        expand_forall(scope, f, bindings, 0);
        return;
      }
    }
  }

  void expand_forall(Scope scope, const Formula& f,
                     std::vector<Binding>& bindings, std::size_t binder) {
    if (binder == f.binders.size()) {
      expand_formula(scope, f.children[0], bindings, false);
      return;
    }
    const TypedName& b = f.binders[binder];
    for (const std::string& obj :
         objects_of_type(domain, objects, b.type)) {
      bindings.push_back({b.name, obj});
      expand_forall(scope, f, bindings, binder + 1);
      bindings.pop_back();
    }
  }
};

}  // namespace detail

// Unrolls quantifiers over the given objects and expands every pattern to its
// explicit ground atom set. One ground constraint is produced per binding of
// the quantified variables.
inline GroundedValiditySpec expand(const ValiditySpec& spec,
                                   const pddl::DomainSpec& domain,
                                   const std::vector<pddl::TypedName>& objects) {
  GroundedValiditySpec out;
  out.structures = spec.structures;
  out.bounds = spec.bounds;
  detail::Expander expander{domain, objects, out};
  for (const ValidityConstraint& c : spec.constraints) {
    std::vector<detail::Binding> bindings;
    expander.expand_formula(c.scope, c.body, bindings, false);
  }
  return out;
}

}  // namespace augment
}  // namespace pgen
