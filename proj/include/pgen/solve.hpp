#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pgen/model.hpp"
#include "pgen/pddl.hpp"
#include "pgen/rng.hpp"

namespace pgen::solve {

using model::Constraint;
using model::ConstraintModel;
using model::FDVariable;

struct Assignment {
  // Indexed by variable id: 0/1 for Booleans, the value for integers.
  std::vector<long long> values;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct SolveStats {
  long long nodes = 0;
  long long propagations = 0;
  long long restarts = 0;
  double wall_ms = 0.0;
  enum class Result { Sat, Unsat, Timeout } result = Result::Unsat;
};

inline const char* result_name(SolveStats::Result r) {
  switch (r) {
    case SolveStats::Result::Sat: return "sat";
    case SolveStats::Result::Unsat: return "unsat";
    default: return "timeout";
  }
}

struct SolveOutcome {
  SolveStats stats;
  std::optional<Assignment> assignment;
};

struct SolveOptions {
  bool enable_restarts = false;
  long long restart_base = 512;  // nodes before the first restart (geometric)
};

// ---------------------------------------------------------------------------
// Search engine
// ---------------------------------------------------------------------------

namespace detail {

class Searcher {
public:
  Searcher(const ConstraintModel& m, const std::vector<Constraint>& extra)
      : m_(m), extra_(extra) {
    nvars_ = static_cast<int>(m.variables.size());
    value_.assign(static_cast<std::size_t>(nvars_), -1);
    const std::size_t total = m.constraints.size() + extra.size();
    var_cons_.assign(static_cast<std::size_t>(nvars_), {});
    in_queue_.assign(total, 0);
    watch_.assign(2 * static_cast<std::size_t>(nvars_), {});
    for (std::size_t ci = 0; ci < total; ++ci) {
      const Constraint& c = constraint(ci);
      if (c.kind == Constraint::Kind::Clause) {
        // Clauses use two watched literals instead of the eager queue:
        // solution-blocking stacks thousands of wide clauses and scanning
        // them on every assignment does not scale.
        init_watches(static_cast<int>(ci));
        continue;
      }
      auto link = [&](int v) {
        if (v >= 0) var_cons_[static_cast<std::size_t>(v)].push_back(
            static_cast<int>(ci));
      };
      for (int v : c.vars) link(v);
      link(c.a);
      link(c.b);
    }
  }

  const Constraint& constraint(std::size_t ci) const {
    return ci < m_.constraints.size() ? m_.constraints[ci]
                                      : extra_[ci - m_.constraints.size()];
  }

  std::size_t constraint_count() const {
    return m_.constraints.size() + extra_.size();
  }

  bool is_bool(int var) const {
    return m_.variables[static_cast<std::size_t>(var)].kind ==
           FDVariable::Kind::Bool;
  }

  // Assigns and records; returns false on contradiction with a prior value.
  bool assign(int var, bool val, bool decision) {
    std::int8_t& slot = value_[static_cast<std::size_t>(var)];
    if (slot != -1) return slot == static_cast<std::int8_t>(val);
    slot = static_cast<std::int8_t>(val);
    trail_.push_back(var);
    if (!decision) ++stats.propagations;
    for (int ci : var_cons_[static_cast<std::size_t>(var)]) enqueue(ci);
    // literals (var, !val) just became false: update their watchers
    return update_watches(var, !val);
  }

  void enqueue(int ci) {
    if (!in_queue_[static_cast<std::size_t>(ci)]) {
      in_queue_[static_cast<std::size_t>(ci)] = 1;
      queue_.push_back(ci);
    }
  }

  void enqueue_all() {
    for (std::size_t ci = 0; ci < constraint_count(); ++ci)
      if (constraint(ci).kind != Constraint::Kind::Clause)
        enqueue(static_cast<int>(ci));
  }

  // Runs constraint rules to fixpoint. Returns false on conflict.
  bool propagate() {
    if (root_conflict_) return false;
    for (int ci : unit_clauses_) {
      const auto& [v, val] = constraint(static_cast<std::size_t>(ci)).lits[0];
      if (!assign(v, val, false)) {
        clear_queue();
        return false;
      }
    }
    while (!queue_.empty()) {
      const int ci = queue_.back();
      queue_.pop_back();
      in_queue_[static_cast<std::size_t>(ci)] = 0;
      if (!examine(ci)) {
        clear_queue();
        return false;
      }
    }
    return true;
  }

  void clear_queue() {
    for (int ci : queue_) in_queue_[static_cast<std::size_t>(ci)] = 0;
    queue_.clear();
  }

  std::size_t mark() const { return trail_.size(); }

  void backtrack(std::size_t mark) {
    while (trail_.size() > mark) {
      value_[static_cast<std::size_t>(trail_.back())] = -1;
      trail_.pop_back();
    }
    clear_queue();
  }

  std::int8_t value(int var) const {
    return value_[static_cast<std::size_t>(var)];
  }

  const std::vector<int>& trail() const { return trail_; }

  SolveStats stats;

private:
  bool force(int var, bool val) { return assign(var, val, false); }

  bool examine(int ci) {
    const Constraint& c = constraint(static_cast<std::size_t>(ci));
    switch (c.kind) {
      case Constraint::Kind::Cardinality: {
        long long t = 0, u = 0;
        for (int v : c.vars) {
          const std::int8_t val = value(v);
          if (val == 1) ++t;
          else if (val == -1) ++u;
        }
        const long long n = static_cast<long long>(c.vars.size());
        (void)n;
        switch (c.cmp) {
          case model::Comparator::Eq:
            if (t > c.k || t + u < c.k) return false;
            if (u == 0) return true;
            if (t == c.k) return force_unassigned(c, false);
            if (t + u == c.k) return force_unassigned(c, true);
            return true;
          case model::Comparator::Ge:
            if (t + u < c.k) return false;
            if (t < c.k && t + u == c.k) return force_unassigned(c, true);
            return true;
          case model::Comparator::Le:
            if (t > c.k) return false;
            if (t == c.k && u > 0) return force_unassigned(c, false);
            return true;
        }
        return true;
      }
      case Constraint::Kind::BiconditionalConst:
        return force(c.a, c.value);
      case Constraint::Kind::Biconditional: {
        const std::int8_t a = value(c.a), b = value(c.b);
        if (a != -1 && b != -1) return a == b;
        if (a != -1) return force(c.b, a == 1);
        if (b != -1) return force(c.a, b == 1);
        return true;
      }
      case Constraint::Kind::Xor: {
        const std::int8_t a = value(c.a), b = value(c.b);
        if (a != -1 && b != -1) return a != b;
        if (a != -1) return force(c.b, a != 1);
        if (b != -1) return force(c.a, b != 1);
        return true;
      }
      case Constraint::Kind::Implies: {
        const std::int8_t a = value(c.a), b = value(c.b);
        if (a == 1 && b == 0) return false;
        if (a == 1 && b == -1) return force(c.b, true);
        if (b == 0 && a == -1) return force(c.a, false);
        return true;
      }
      case Constraint::Kind::Clause:
        return true;  // handled by the watched-literal scheme
    }
    return true;
  }

  bool force_unassigned(const Constraint& c, bool val) {
    for (int v : c.vars)
      if (value(v) == -1 && !force(v, val)) return false;
    return true;
  }

  // --- two-watched-literal handling for clauses ---

  std::size_t watch_slot(int var, bool phase) const {
    return 2 * static_cast<std::size_t>(var) + (phase ? 1 : 0);
  }

  void init_watches(int ci) {
    const Constraint& c = constraint(static_cast<std::size_t>(ci));
    if (c.lits.empty()) {
      root_conflict_ = true;
      return;
    }
    if (wpos_.size() <= static_cast<std::size_t>(ci))
      wpos_.resize(static_cast<std::size_t>(ci) + 1, {0, 0});
    if (c.lits.size() == 1) {
      unit_clauses_.push_back(ci);
      wpos_[static_cast<std::size_t>(ci)] = {0, 0};
      watch_[watch_slot(c.lits[0].first, c.lits[0].second)].push_back(ci);
      return;
    }
    wpos_[static_cast<std::size_t>(ci)] = {0, 1};
    watch_[watch_slot(c.lits[0].first, c.lits[0].second)].push_back(ci);
    watch_[watch_slot(c.lits[1].first, c.lits[1].second)].push_back(ci);
  }

  bool lit_true(const std::pair<int, bool>& lit) const {
    const std::int8_t v = value(lit.first);
    return v != -1 && (v == 1) == lit.second;
  }

  // Literals requiring `phase` on `var` just became false. Watches are lazy:
  // they are not unwound on backtracking, only rechecked on refalsification.
  bool update_watches(int var, bool phase) {
    auto& list = watch_[watch_slot(var, phase)];
    std::size_t i = 0;
    while (i < list.size()) {
      const int ci = list[i];
      const Constraint& c = constraint(static_cast<std::size_t>(ci));
      auto& wp = wpos_[static_cast<std::size_t>(ci)];
      const int slot =
          (c.lits[static_cast<std::size_t>(wp[0])].first == var &&
           c.lits[static_cast<std::size_t>(wp[0])].second == phase)
              ? 0
              : 1;
      const auto& other = c.lits[static_cast<std::size_t>(wp[1 - slot])];
      if (wp[0] != wp[1] && lit_true(other)) {
        ++i;
        continue;
      }
      bool moved = false;
      for (std::size_t j = 0; j < c.lits.size(); ++j) {
        if (static_cast<int>(j) == wp[0] || static_cast<int>(j) == wp[1])
          continue;
        const auto& candidate = c.lits[j];
        const std::int8_t have = value(candidate.first);
        if (have == -1 || (have == 1) == candidate.second) {
          wp[slot] = static_cast<int>(j);
          watch_[watch_slot(candidate.first, candidate.second)].push_back(ci);
          list[i] = list.back();
          list.pop_back();
          moved = true;
          break;
        }
      }
      if (moved) continue;
      // clause is unit or conflicting on the other watch
      const std::int8_t have = value(other.first);
      if (wp[0] != wp[1] && have == -1) {
        if (!assign(other.first, other.second, false)) return false;
        ++i;
        continue;
      }
      if (wp[0] != wp[1] && (have == 1) == other.second) {
        ++i;
        continue;
      }
      return false;
    }
    return true;
  }

  const ConstraintModel& m_;
  const std::vector<Constraint>& extra_;
  int nvars_ = 0;
  std::vector<std::int8_t> value_;
  std::vector<int> trail_;
  std::vector<std::vector<int>> var_cons_;
  std::vector<int> queue_;
  std::vector<char> in_queue_;
  std::vector<std::vector<int>> watch_;
  std::vector<std::array<int, 2>> wpos_;
  std::vector<int> unit_clauses_;
  bool root_conflict_ = false;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// propagate (exposed for unit tests and diagnostics)
// ---------------------------------------------------------------------------

struct PropagationResult {
  bool conflict = false;
  std::vector<std::pair<int, bool>> forced;  // excluding the given partial
};

inline PropagationResult propagate(
    const ConstraintModel& m,
    const std::vector<std::pair<int, bool>>& partial) {
  static const std::vector<Constraint> kNoExtra;
  detail::Searcher searcher(m, kNoExtra);
  PropagationResult out;
  std::vector<char> given(m.variables.size(), 0);
  for (const auto& [var, val] : m.fixed) {
    given[static_cast<std::size_t>(var)] = 1;
    if (!searcher.assign(var, val, true)) {
      out.conflict = true;
      return out;
    }
  }
  for (const auto& [var, val] : partial) {
    given[static_cast<std::size_t>(var)] = 1;
    if (!searcher.assign(var, val, true)) {
      out.conflict = true;
      return out;
    }
  }
  searcher.enqueue_all();
  if (!searcher.propagate()) {
    out.conflict = true;
    return out;
  }
  for (int var : searcher.trail())
    if (!given[static_cast<std::size_t>(var)])
      out.forced.emplace_back(var, searcher.value(var) == 1);
  return out;
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

namespace detail {

struct DecisionOrders {
  // Per choice group: member order; per var: value tried first.
  std::vector<std::vector<int>> group_order;
  std::vector<char> first_value;

  static DecisionOrders make(const ConstraintModel& m, std::uint64_t seed) {
    DecisionOrders d;
    d.group_order.reserve(m.choice_groups.size());
    for (std::size_t g = 0; g < m.choice_groups.size(); ++g) {
      std::vector<int> order = m.choice_groups[g];
      Rng rng(mix_seed(seed, 0x9000 + g));
      rng.shuffle(order);
      d.group_order.push_back(std::move(order));
    }
    Rng rng(mix_seed(seed, 0x7a1e));
    d.first_value.resize(m.variables.size());
    for (std::size_t v = 0; v < m.variables.size(); ++v)
      d.first_value[v] = rng.coin() ? 1 : 0;
    return d;
  }
};

struct Frame {
  bool is_group = false;
  std::vector<int> alternatives;  // group: member vars; var: values (0/1)
  int var = -1;                   // var decisions
  std::size_t next = 0;
  std::size_t trail_mark = 0;
};

inline SolveOutcome search(const ConstraintModel& m,
                           const std::vector<Constraint>& extra,
                           std::uint64_t seed, double time_limit_ms,
                           const SolveOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed_ms = [&]() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start)
        .count();
  };

  SolveOutcome out;
  long long restart_at =
      opts.enable_restarts ? opts.restart_base
                           : std::numeric_limits<long long>::max();
  std::uint64_t attempt_seed = seed;
  long long total_nodes = 0, total_props = 0, restarts = 0;

  for (;;) {  // restart loop
    Searcher searcher(m, extra);
    DecisionOrders orders = DecisionOrders::make(m, attempt_seed);
    searcher.stats.nodes = 1;

    bool root_ok = true;
    for (const auto& [var, val] : m.fixed)
      if (!searcher.assign(var, val, false)) root_ok = false;
    searcher.enqueue_all();
    if (root_ok) root_ok = searcher.propagate();
    if (!root_ok) {
      out.stats = searcher.stats;
      out.stats.nodes += total_nodes;
      out.stats.propagations += total_props;
      out.stats.restarts = restarts;
      out.stats.result = SolveStats::Result::Unsat;
      out.stats.wall_ms = elapsed_ms();
      return out;
    }

    std::vector<Frame> stack;
    bool exhausted = false;
    bool timed_out = false;

    auto next_frame = [&]() -> std::optional<Frame> {
      for (std::size_t g = 0; g < m.choice_groups.size(); ++g) {
        bool satisfied = false;
        for (int v : m.choice_groups[g])
          if (searcher.value(v) == 1) satisfied = true;
        if (satisfied) continue;
        Frame f;
        f.is_group = true;
        for (int v : orders.group_order[g])
          if (searcher.value(v) == -1) f.alternatives.push_back(v);
        if (f.alternatives.empty()) continue;  // group closed by propagation
        return f;
      }
      for (std::size_t v = 0; v < m.variables.size(); ++v) {
        if (m.variables[v].kind != FDVariable::Kind::Bool) continue;
        if (searcher.value(static_cast<int>(v)) != -1) continue;
        Frame f;
        f.var = static_cast<int>(v);
        const int first = orders.first_value[v];
        f.alternatives = {first, 1 - first};
        return f;
      }
      return std::nullopt;
    };

    auto enter = [&](Frame& f) -> bool {
      // apply alternative f.next, propagate
      ++searcher.stats.nodes;
      const std::size_t alt = f.next++;
      f.trail_mark = searcher.mark();
      bool ok;
      if (f.is_group)
        ok = searcher.assign(f.alternatives[alt], true, true);
      else
        ok = searcher.assign(f.var, f.alternatives[alt] == 1, true);
      return ok && searcher.propagate();
    };

    for (;;) {
      if ((searcher.stats.nodes & 255) == 0 && time_limit_ms > 0 &&
          elapsed_ms() > time_limit_ms) {
        timed_out = true;
        break;
      }
      if (opts.enable_restarts && searcher.stats.nodes >= restart_at) break;

      auto f = next_frame();
      if (!f) {
        // all Booleans assigned: a solution
        Assignment a;
        a.values.resize(m.variables.size(), 0);
        for (std::size_t v = 0; v < m.variables.size(); ++v) {
          const FDVariable& var = m.variables[v];
          if (var.kind == FDVariable::Kind::Bool) {
            a.values[v] = searcher.value(static_cast<int>(v)) == 1 ? 1 : 0;
          } else {
            Rng rng(mix_seed(attempt_seed, 0x17 + v));
            a.values[v] = rng.uniform(var.lower, var.upper);
          }
        }
        out.assignment = std::move(a);
        out.stats = searcher.stats;
        out.stats.nodes += total_nodes;
        out.stats.propagations += total_props;
        out.stats.restarts = restarts;
        out.stats.result = SolveStats::Result::Sat;
        out.stats.wall_ms = elapsed_ms();
        return out;
      }

      stack.push_back(std::move(*f));
      bool ok = enter(stack.back());
      while (!ok) {
        // chronological backtracking
        while (!stack.empty() &&
               stack.back().next >= stack.back().alternatives.size()) {
          searcher.backtrack(stack.back().trail_mark);
          stack.pop_back();
        }
        if (stack.empty()) {
          exhausted = true;
          break;
        }
        searcher.backtrack(stack.back().trail_mark);
        ok = enter(stack.back());
      }
      if (exhausted || timed_out) break;
    }

    total_nodes += searcher.stats.nodes;
    total_props += searcher.stats.propagations;
    if (timed_out || exhausted) {
      out.stats = SolveStats{};
      out.stats.nodes = total_nodes;
      out.stats.propagations = total_props;
      out.stats.restarts = restarts;
      out.stats.result = timed_out ? SolveStats::Result::Timeout
                                   : SolveStats::Result::Unsat;
      out.stats.wall_ms = elapsed_ms();
      return out;
    }
    // restart with a reseeded shuffle
    ++restarts;
    restart_at *= 2;
    attempt_seed = mix_seed(seed, 0xbeef + static_cast<std::uint64_t>(restarts));
    if (time_limit_ms > 0 && elapsed_ms() > time_limit_ms) {
      out.stats.nodes = total_nodes;
      out.stats.propagations = total_props;
      out.stats.restarts = restarts;
      out.stats.result = SolveStats::Result::Timeout;
      out.stats.wall_ms = elapsed_ms();
      return out;
    }
  }
}

}  // namespace detail

// Samples one satisfying assignment. Search order and value order are
// pseudorandom functions of the seed, so different seeds sample different
// valid instances; identical inputs return identical assignments.
inline SolveOutcome generate(const ConstraintModel& m, std::uint64_t seed,
                             double time_limit_ms,
                             const SolveOptions& opts = {}) {
  static const std::vector<Constraint> kNoExtra;
  return detail::search(m, kNoExtra, seed, time_limit_ms, opts);
}

// ---------------------------------------------------------------------------
// decode
// ---------------------------------------------------------------------------

// Maps a satisfying assignment to a concrete problem instance: init/goal are
// the atoms whose scope variable is true.
inline pddl::ProblemInstance decode(const ConstraintModel& m,
                                    const Assignment& a,
                                    const pddl::DomainSpec& domain,
                                    const model::GeneratorConfig& config) {
  pddl::ProblemInstance inst;
  inst.name = "inst";
  inst.domain_name = domain.name;
  inst.objects = m.objects;
  for (std::size_t v = 0; v < m.variables.size(); ++v) {
    const FDVariable& var = m.variables[v];
    if (var.kind != FDVariable::Kind::Bool || a.values[v] != 1) continue;
    if (var.scope == augment::Scope::Init)
      inst.init.insert(var.atom);
    else
      inst.goal.insert(var.atom);
  }
  if (inst.goal.empty())
    throw SemanticError(
        "decoded goal is empty; the validity specification needs a goal-scope "
        "at-least-k term");
  pddl::Provenance prov;
  prov.params = config.assignment;
  prov.seed = config.seed;
  prov.encoding = m.mode == ConstraintModel::Mode::Low ? "low" : "high";
  inst.provenance = prov;
  return inst;
}

// ---------------------------------------------------------------------------
// Enumeration (tests, encoding-equivalence checks)
// ---------------------------------------------------------------------------

// All solutions by plain exhaustive DFS in canonical order (no shuffling).
inline std::vector<Assignment> enumerate_exhaustive(const ConstraintModel& m,
                                                    std::size_t limit) {
  for (const auto& v : m.variables)
    if (v.kind == FDVariable::Kind::Int && v.lower != v.upper)
      throw SemanticError("exhaustive enumeration requires a Boolean model");

  static const std::vector<Constraint> kNoExtra;
  std::vector<Assignment> solutions;
  detail::Searcher searcher(m, kNoExtra);
  for (const auto& [var, val] : m.fixed)
    if (!searcher.assign(var, val, false)) return solutions;
  searcher.enqueue_all();
  if (!searcher.propagate()) return solutions;

  struct Frame {
    std::vector<int> alternatives;
    int var = -1;
    bool is_group = false;
    std::size_t next = 0;
    std::size_t trail_mark = 0;
  };

  auto next_frame = [&]() -> std::optional<Frame> {
    for (const auto& group : m.choice_groups) {
      bool satisfied = false;
      for (int v : group)
        if (searcher.value(v) == 1) satisfied = true;
      if (satisfied) continue;
      Frame f;
      f.is_group = true;
      for (int v : group)
        if (searcher.value(v) == -1) f.alternatives.push_back(v);
      if (f.alternatives.empty()) continue;
      return f;
    }
    for (std::size_t v = 0; v < m.variables.size(); ++v) {
      if (m.variables[v].kind != FDVariable::Kind::Bool) continue;
      if (searcher.value(static_cast<int>(v)) != -1) continue;
      Frame f;
      f.var = static_cast<int>(v);
      f.alternatives = {0, 1};
      return f;
    }
    return std::nullopt;
  };

  std::vector<Frame> stack;
  auto record = [&]() {
    Assignment a;
    a.values.resize(m.variables.size(), 0);
    for (std::size_t v = 0; v < m.variables.size(); ++v) {
      const FDVariable& var = m.variables[v];
      a.values[v] = var.kind == FDVariable::Kind::Bool
                        ? (searcher.value(static_cast<int>(v)) == 1 ? 1 : 0)
                        : var.lower;
    }
    solutions.push_back(std::move(a));
  };

  for (;;) {
    auto f = next_frame();
    bool ok = false;
    if (!f) {
      record();
      if (solutions.size() >= limit) return solutions;
      ok = false;  // treat as conflict to continue exploring
    } else {
      stack.push_back(std::move(*f));
      Frame& frame = stack.back();
      frame.trail_mark = searcher.mark();
      frame.next = 1;
      ok = (frame.is_group
                ? searcher.assign(frame.alternatives[0], true, true)
                : searcher.assign(frame.var, frame.alternatives[0] == 1,
                                  true)) &&
           searcher.propagate();
    }
    while (!ok) {
      while (!stack.empty() &&
             stack.back().next >= stack.back().alternatives.size()) {
        searcher.backtrack(stack.back().trail_mark);
        stack.pop_back();
      }
      if (stack.empty()) return solutions;
      Frame& frame = stack.back();
      searcher.backtrack(frame.trail_mark);
      const std::size_t alt = frame.next++;
      ok = (frame.is_group
                ? searcher.assign(frame.alternatives[alt], true, true)
                : searcher.assign(frame.var, frame.alternatives[alt] == 1,
                                  true)) &&
           searcher.propagate();
    }
  }
}

// All solutions by repeated sampling with solution-blocking clauses.
inline std::vector<Assignment> enumerate_blocking(const ConstraintModel& m,
                                                  std::size_t limit,
                                                  std::uint64_t seed = 1) {
  // Variables decided at the root are identical in all solutions and are
  // left out of the blocking clauses.
  PropagationResult root = propagate(m, {});
  if (root.conflict) return {};
  std::vector<char> rooted(m.variables.size(), 0);
  for (const auto& [var, val] : m.fixed)
    rooted[static_cast<std::size_t>(var)] = 1;
  for (const auto& [var, val] : root.forced)
    rooted[static_cast<std::size_t>(var)] = 1;

  std::vector<Assignment> solutions;
  std::vector<Constraint> blocking;
  for (std::size_t iter = 0; solutions.size() < limit; ++iter) {
    SolveOutcome outcome =
        detail::search(m, blocking, mix_seed(seed, iter), 0.0, {});
    if (!outcome.assignment) break;
    const Assignment& a = *outcome.assignment;
    Constraint clause;
    clause.kind = Constraint::Kind::Clause;
    clause.origin = Constraint::Origin::Blocking;
    for (std::size_t v = 0; v < m.variables.size(); ++v) {
      if (m.variables[v].kind != FDVariable::Kind::Bool) continue;
      if (rooted[v]) continue;
      clause.lits.emplace_back(static_cast<int>(v), a.values[v] == 0);
    }
    solutions.push_back(a);
    if (clause.lits.empty()) break;  // unique solution
    blocking.push_back(std::move(clause));
  }
  return solutions;
}

}  // namespace pgen::solve
