#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pgen/sexpr.hpp"

namespace pgen::pddl {

// ---------------------------------------------------------------------------
// AST types
// ---------------------------------------------------------------------------

struct TypedName {
  std::string name;
  std::string type = "object";

  friend bool operator==(const TypedName&, const TypedName&) = default;
};

struct PredicateDecl {
  std::string name;
  std::vector<TypedName> params;
};

// A predicate applied to argument names. In action schemas the arguments are
// parameter variables (leading '?'); grounding substitutes objects.
struct Literal {
  std::string predicate;
  std::vector<std::string> args;
};

struct ActionSchema {
  std::string name;
  std::vector<TypedName> params;
  std::vector<Literal> precondition;  // positive conjunction
  std::vector<Literal> add_effects;
  std::vector<Literal> del_effects;
};

struct GroundAtom {
  std::string predicate;
  std::vector<std::string> args;

  friend auto operator<=>(const GroundAtom&, const GroundAtom&) = default;

  std::string str() const {
    std::string out = "(" + predicate;
    for (const auto& a : args) {
      out += ' ';
      out += a;
    }
    out += ')';
    return out;
  }
};

// Generation provenance attached to emitted instances (meta sidecar).
struct Provenance {
  std::map<std::string, long long> params;
  std::uint64_t seed = 0;
  std::string encoding;
  long long nodes = 0;
  long long propagations = 0;
  long long restarts = 0;
  double wall_ms = 0.0;
  std::string result;
};

struct ProblemInstance {
  std::string name;
  std::string domain_name;
  std::vector<TypedName> objects;
  std::set<GroundAtom> init;  // closed world: absent atoms are false
  std::set<GroundAtom> goal;  // positive conjunction
  std::optional<Provenance> provenance;
};

struct DomainSpec {
  std::string name;
  std::vector<TypedName> types;  // name + parent type
  std::vector<PredicateDecl> predicates;
  std::vector<ActionSchema> actions;
  // Raw (:instance-constraints ...) section when parsed with `augmented`;
  // semantic analysis lives in the augment module.
  std::optional<sexpr::Node> instance_constraints;

  const PredicateDecl* find_predicate(std::string_view name) const {
    for (const auto& p : predicates)
      if (p.name == name) return &p;
    return nullptr;
  }

  const ActionSchema* find_action(std::string_view name) const {
    for (const auto& a : actions)
      if (a.name == name) return &a;
    return nullptr;
  }

  bool type_declared(std::string_view t) const {
    if (t == "object") return true;
    for (const auto& d : types)
      if (d.name == t) return true;
    return false;
  }

  // Walks the parent chain; "object" is the implicit root.
  bool type_compatible(std::string_view sub, std::string_view super) const {
    if (super == "object" || sub == super) return true;
    std::string cur(sub);
    for (int guard = 0; guard < 64; ++guard) {
      const TypedName* decl = nullptr;
      for (const auto& d : types)
        if (d.name == cur) {
          decl = &d;
          break;
        }
      if (!decl || decl->type == "object") return false;
      if (decl->type == super) return true;
      cur = decl->type;
    }
    return false;
  }
};

// ---------------------------------------------------------------------------
// Lexical checks
// ---------------------------------------------------------------------------

inline bool is_identifier(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s.front())))
    return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '-' || c == '_';
  });
}

inline bool is_variable(std::string_view s) {
  return s.size() >= 2 && s.front() == '?' && is_identifier(s.substr(1));
}

namespace detail {

[[noreturn]] inline void fail(const sexpr::Node& at, const std::string& msg) {
  throw ParseError(at.line, at.col, msg);
}

inline const std::string& require_identifier(const sexpr::Node& n,
                                              const char* what) {
  if (!n.is_atom() || !is_identifier(n.token))
    fail(n, std::string("expected ") + what + ", got '" +
                (n.is_atom() ? n.token : std::string("(...)")) + "'");
  return n.token;
}

// Parses a PDDL typed list: name... [- type] repeated. `variables` selects
// '?var' tokens instead of plain identifiers.
inline std::vector<TypedName> parse_typed_list(
    const std::vector<sexpr::Node>& items, std::size_t begin, bool variables,
    const sexpr::Node& context) {
  std::vector<TypedName> out;
  std::size_t pending_from = 0;
  for (std::size_t i = begin; i < items.size(); ++i) {
    const sexpr::Node& n = items[i];
    if (n.is_atom() && n.token == "-") {
      if (i + 1 >= items.size()) fail(n, "dangling '-' in typed list");
      const std::string& type =
          require_identifier(items[i + 1], "type name after '-'");
      if (out.size() == pending_from)
        fail(n, "'-' with no preceding names in typed list");
      for (std::size_t j = pending_from; j < out.size(); ++j)
        out[j].type = type;
      pending_from = out.size();
      ++i;
      continue;
    }
    if (!n.is_atom()) fail(n, "expected a name in typed list");
    if (variables) {
      if (!is_variable(n.token))
        fail(n, "expected a ?variable, got '" + n.token + "'");
      out.push_back({n.token.substr(1), "object"});
    } else {
      out.push_back({require_identifier(n, "name"), "object"});
    }
  }
  (void)context;
  return out;
}

struct LiteralSplit {
  std::vector<Literal> positive;
  std::vector<Literal> negative;
};

inline Literal parse_atom_node(const sexpr::Node& n) {
  if (!n.is_list() || n.children.empty() || !n.children[0].is_atom())
    fail(n, "expected (predicate args...)");
  Literal lit;
  lit.predicate = n.children[0].token;
  for (std::size_t i = 1; i < n.children.size(); ++i) {
    if (!n.children[i].is_atom()) fail(n.children[i], "expected an argument");
    lit.args.push_back(n.children[i].token);
  }
  return lit;
}

// Accepts a single literal or an (and ...) of literals.
inline LiteralSplit parse_condition(const sexpr::Node& n, bool allow_negated) {
  LiteralSplit out;
  std::vector<const sexpr::Node*> work;
  if (n.is_list() && !n.children.empty() &&
      sexpr::atom_is(n.children[0], "and")) {
    for (std::size_t i = 1; i < n.children.size(); ++i)
      work.push_back(&n.children[i]);
  } else {
    work.push_back(&n);
  }
  for (const sexpr::Node* item : work) {
    if (item->is_list() && !item->children.empty() &&
        sexpr::atom_is(item->children[0], "not")) {
      if (!allow_negated)
        fail(*item, "negated literals are not allowed here");
      if (item->children.size() != 2)
        fail(*item, "(not ...) takes exactly one literal");
      out.negative.push_back(parse_atom_node(item->children[1]));
    } else {
      out.positive.push_back(parse_atom_node(*item));
    }
  }
  return out;
}

// Checks a schema literal against declarations and the parameter list.
inline void check_schema_literal(const DomainSpec& domain,
                                 const std::vector<TypedName>& params,
                                 const Literal& lit, const sexpr::Node& at) {
  const PredicateDecl* decl = domain.find_predicate(lit.predicate);
  if (!decl) fail(at, "unknown predicate '" + lit.predicate + "'");
  if (decl->params.size() != lit.args.size())
    fail(at, "predicate '" + lit.predicate + "' expects " +
                 std::to_string(decl->params.size()) + " arguments, got " +
                 std::to_string(lit.args.size()));
  for (std::size_t i = 0; i < lit.args.size(); ++i) {
    const std::string& arg = lit.args[i];
    if (!is_variable(arg))
      fail(at, "argument '" + arg + "' of '" + lit.predicate +
                   "' must be an action parameter variable");
    const std::string var = arg.substr(1);
    const TypedName* param = nullptr;
    for (const auto& p : params)
      if (p.name == var) {
        param = &p;
        break;
      }
    if (!param)
      fail(at, "variable '?" + var + "' is not a parameter of the action");
    if (!domain.type_compatible(param->type, decl->params[i].type))
      fail(at, "variable '?" + var + "' of type '" + param->type +
                   "' is not compatible with parameter type '" +
                   decl->params[i].type + "' of '" + lit.predicate + "'");
  }
}

inline ActionSchema parse_action(const DomainSpec& domain,
                                 const sexpr::Node& section) {
  ActionSchema action;
  const auto& items = section.children;
  if (items.size() < 2 || !items[1].is_atom())
    fail(section, "expected (:action name ...)");
  action.name = require_identifier(items[1], "action name");
  std::size_t i = 2;
  const sexpr::Node* precondition = nullptr;
  const sexpr::Node* effect = nullptr;
  while (i < items.size()) {
    const sexpr::Node& key = items[i];
    if (i + 1 >= items.size()) fail(key, "missing value after action keyword");
    if (sexpr::atom_is(key, ":parameters")) {
      if (!items[i + 1].is_list()) fail(items[i + 1], "expected (parameters)");
      action.params =
          parse_typed_list(items[i + 1].children, 0, true, items[i + 1]);
    } else if (sexpr::atom_is(key, ":precondition")) {
      precondition = &items[i + 1];
    } else if (sexpr::atom_is(key, ":effect")) {
      effect = &items[i + 1];
    } else {
      fail(key, "unknown action keyword '" +
                    (key.is_atom() ? key.token : std::string("(...)")) + "'");
    }
    i += 2;
  }
  for (const auto& p : action.params) {
    if (!domain.type_declared(p.type))
      fail(section, "undeclared type '" + p.type + "' in parameters of '" +
                        action.name + "'");
  }
  for (std::size_t a = 0; a < action.params.size(); ++a)
    for (std::size_t b = a + 1; b < action.params.size(); ++b)
      if (action.params[a].name == action.params[b].name)
        fail(section, "duplicate parameter '?" + action.params[a].name +
                          "' in action '" + action.name + "'");
  if (precondition) {
    LiteralSplit pre = parse_condition(*precondition, false);
    action.precondition = std::move(pre.positive);
    for (const auto& lit : action.precondition)
      check_schema_literal(domain, action.params, lit, *precondition);
  }
  if (effect) {
    LiteralSplit eff = parse_condition(*effect, true);
    action.add_effects = std::move(eff.positive);
    action.del_effects = std::move(eff.negative);
    for (const auto& lit : action.add_effects)
      check_schema_literal(domain, action.params, lit, *effect);
    for (const auto& lit : action.del_effects)
      check_schema_literal(domain, action.params, lit, *effect);
    for (const auto& add : action.add_effects)
      for (const auto& del : action.del_effects)
        if (add.predicate == del.predicate && add.args == del.args)
          fail(*effect, "atom '" + add.predicate +
                            "' appears in both add and delete effects of '" +
                            action.name + "'");
  }
  return action;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// parse_domain
// ---------------------------------------------------------------------------

inline DomainSpec parse_domain(std::string_view text, bool augmented = true) {
  using detail::fail;
  const sexpr::Node root = sexpr::parse_one(text);
  if (!root.is_list() || root.children.size() < 2 ||
      !sexpr::atom_is(root.children[0], "define"))
    fail(root, "expected (define (domain ...) ...)");
  const sexpr::Node& head = root.children[1];
  if (!head.is_list() || head.children.size() != 2 ||
      !sexpr::atom_is(head.children[0], "domain"))
    fail(head, "expected (domain name)");

  DomainSpec domain;
  domain.name = detail::require_identifier(head.children[1], "domain name");

  for (std::size_t s = 2; s < root.children.size(); ++s) {
    const sexpr::Node& section = root.children[s];
    if (!section.is_list() || section.children.empty() ||
        !section.children[0].is_atom())
      fail(section, "expected a (:section ...) form");
    const sexpr::Node& tag = section.children[0];
    if (sexpr::atom_is(tag, ":requirements")) {
      for (std::size_t i = 1; i < section.children.size(); ++i)
        if (!section.children[i].is_atom() ||
            section.children[i].token.front() != ':')
          fail(section.children[i], "expected a :requirement flag");
    } else if (sexpr::atom_is(tag, ":types")) {
      domain.types =
          detail::parse_typed_list(section.children, 1, false, section);
    } else if (sexpr::atom_is(tag, ":predicates")) {
      for (std::size_t i = 1; i < section.children.size(); ++i) {
        const sexpr::Node& p = section.children[i];
        if (!p.is_list() || p.children.empty())
          fail(p, "expected (predicate ?params...)");
        PredicateDecl decl;
        decl.name = detail::require_identifier(p.children[0], "predicate name");
        decl.params = detail::parse_typed_list(p.children, 1, true, p);
        if (domain.find_predicate(decl.name))
          fail(p, "duplicate predicate '" + decl.name + "'");
        domain.predicates.push_back(std::move(decl));
      }
    } else if (sexpr::atom_is(tag, ":action")) {
      ActionSchema action = detail::parse_action(domain, section);
      if (domain.find_action(action.name))
        fail(section, "duplicate action '" + action.name + "'");
      domain.actions.push_back(std::move(action));
    } else if (sexpr::atom_is(tag, ":instance-constraints")) {
      if (!augmented)
        fail(tag, "unknown section ':instance-constraints' "
                  "(augmented parsing disabled)");
      domain.instance_constraints = section;
    } else {
      fail(tag, "unknown section '" + tag.token + "'");
    }
  }

  // Parent types must themselves be declared (or be the implicit root).
  for (const auto& t : domain.types)
    if (!domain.type_declared(t.type))
      throw ParseError(1, 1, "undeclared parent type '" + t.type + "'");
  for (const auto& p : domain.predicates)
    for (const auto& param : p.params)
      if (!domain.type_declared(param.type))
        throw ParseError(1, 1, "undeclared type '" + param.type +
                                   "' in predicate '" + p.name + "'");
  return domain;
}

// ---------------------------------------------------------------------------
// parse_problem
// ---------------------------------------------------------------------------

namespace detail {

inline GroundAtom check_ground_atom(const DomainSpec& domain,
                                    const std::vector<TypedName>& objects,
                                    const Literal& lit,
                                    const sexpr::Node& at) {
  const PredicateDecl* decl = domain.find_predicate(lit.predicate);
  if (!decl) fail(at, "unknown predicate '" + lit.predicate + "'");
  if (decl->params.size() != lit.args.size())
    fail(at, "predicate '" + lit.predicate + "' expects " +
                 std::to_string(decl->params.size()) + " arguments, got " +
                 std::to_string(lit.args.size()));
  GroundAtom atom{lit.predicate, lit.args};
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    const TypedName* obj = nullptr;
    for (const auto& o : objects)
      if (o.name == atom.args[i]) {
        obj = &o;
        break;
      }
    if (!obj) fail(at, "undeclared object '" + atom.args[i] + "'");
    if (!domain.type_compatible(obj->type, decl->params[i].type))
      fail(at, "object '" + obj->name + "' of type '" + obj->type +
                   "' is not compatible with parameter type '" +
                   decl->params[i].type + "' of '" + lit.predicate + "'");
  }
  return atom;
}

}  // namespace detail

inline ProblemInstance parse_problem(std::string_view text,
                                     const DomainSpec& domain) {
  using detail::fail;
  const sexpr::Node root = sexpr::parse_one(text);
  if (!root.is_list() || root.children.size() < 2 ||
      !sexpr::atom_is(root.children[0], "define"))
    fail(root, "expected (define (problem ...) ...)");
  const sexpr::Node& head = root.children[1];
  if (!head.is_list() || head.children.size() != 2 ||
      !sexpr::atom_is(head.children[0], "problem"))
    fail(head, "expected (problem name)");

  ProblemInstance inst;
  inst.name = detail::require_identifier(head.children[1], "problem name");

  bool saw_init = false, saw_goal = false;
  for (std::size_t s = 2; s < root.children.size(); ++s) {
    const sexpr::Node& section = root.children[s];
    if (!section.is_list() || section.children.empty() ||
        !section.children[0].is_atom())
      fail(section, "expected a (:section ...) form");
    const sexpr::Node& tag = section.children[0];
    if (sexpr::atom_is(tag, ":domain")) {
      if (section.children.size() != 2)
        fail(section, "expected (:domain name)");
      inst.domain_name =
          detail::require_identifier(section.children[1], "domain name");
      if (inst.domain_name != domain.name)
        fail(section, "problem references domain '" + inst.domain_name +
                          "' but '" + domain.name + "' was loaded");
    } else if (sexpr::atom_is(tag, ":objects")) {
      inst.objects =
          detail::parse_typed_list(section.children, 1, false, section);
      for (const auto& o : inst.objects) {
        if (!domain.type_declared(o.type))
          fail(section, "undeclared type '" + o.type + "' for object '" +
                            o.name + "'");
      }
      for (std::size_t a = 0; a < inst.objects.size(); ++a)
        for (std::size_t b = a + 1; b < inst.objects.size(); ++b)
          if (inst.objects[a].name == inst.objects[b].name)
            fail(section, "duplicate object '" + inst.objects[a].name + "'");
    } else if (sexpr::atom_is(tag, ":init")) {
      saw_init = true;
      for (std::size_t i = 1; i < section.children.size(); ++i) {
        Literal lit = detail::parse_atom_node(section.children[i]);
        inst.init.insert(detail::check_ground_atom(domain, inst.objects, lit,
                                                   section.children[i]));
      }
    } else if (sexpr::atom_is(tag, ":goal")) {
      saw_goal = true;
      if (section.children.size() != 2)
        fail(section, "expected (:goal condition)");
      detail::LiteralSplit split =
          detail::parse_condition(section.children[1], false);
      for (const auto& lit : split.positive)
        inst.goal.insert(detail::check_ground_atom(domain, inst.objects, lit,
                                                   section.children[1]));
      if (inst.goal.empty())
        fail(section, "goal must be a nonempty conjunction");
    } else {
      fail(tag, "unknown section '" + tag.token + "'");
    }
  }
  if (!saw_init) fail(root, "missing :init section");
  if (!saw_goal) fail(root, "missing :goal section");
  return inst;
}

// ---------------------------------------------------------------------------
// emit_problem
// ---------------------------------------------------------------------------

// Canonical emission: objects grouped by type (in order of first appearance),
// atoms sorted by (predicate, args). Byte-identical output for equal inputs.
inline std::string emit_problem(const ProblemInstance& inst) {
  std::ostringstream out;
  out << "(define (problem " << inst.name << ")\n";
  out << "  (:domain " << inst.domain_name << ")\n";
  out << "  (:objects";
  std::vector<std::string> type_order;
  for (const auto& o : inst.objects)
    if (std::find(type_order.begin(), type_order.end(), o.type) ==
        type_order.end())
      type_order.push_back(o.type);
  for (const auto& type : type_order) {
    out << "\n   ";
    for (const auto& o : inst.objects)
      if (o.type == type) out << ' ' << o.name;
    out << " - " << type;
  }
  out << ")\n";
  out << "  (:init";
  for (const auto& atom : inst.init) out << "\n    " << atom.str();
  out << ")\n";
  out << "  (:goal (and";
  for (const auto& atom : inst.goal) out << "\n    " << atom.str();
  out << "))\n";
  out << ")\n";
  return out.str();
}

}  // namespace pgen::pddl
