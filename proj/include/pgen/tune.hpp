#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "pgen/model.hpp"
#include "pgen/parallel.hpp"
#include "pgen/plan.hpp"
#include "pgen/rng.hpp"
#include "pgen/solve.hpp"

namespace pgen::tune {

// ---------------------------------------------------------------------------
// Parameter space and target
// ---------------------------------------------------------------------------

struct ParamRange {
  std::string name;
  long long lower = 1;
  long long upper = 1;
};

struct ParamSpace {
  std::vector<ParamRange> params;

  // Saturating product of range sizes.
  long long size() const {
    long long total = 1;
    for (const auto& p : params) {
      const long long span = p.upper - p.lower + 1;
      if (span <= 0) return 0;
      if (total > (1LL << 40) / span) return 1LL << 40;
      total *= span;
    }
    return total;
  }
};

// Desired instance properties. Every present criterion is weighted; a
// report's score is the weighted fraction of criteria it meets.
struct TuneTarget {
  bool require_solvable = false;
  std::optional<long long> min_plan_length;
  std::optional<long long> max_plan_length;
  std::optional<double> max_gen_wall_ms;
  double weight_solvable = 1.0;
  double weight_plan_length = 1.0;
  double weight_gen_time = 1.0;

  bool any_criterion() const {
    return require_solvable || min_plan_length || max_plan_length ||
           max_gen_wall_ms;
  }
};

// One generation + grading run.
struct EvalOutcome {
  solve::SolveStats::Result gen_result = solve::SolveStats::Result::Unsat;
  double gen_wall_ms = 0.0;
  plan::GradeReport grade;
};

// ---------------------------------------------------------------------------
// Scoring
// ---------------------------------------------------------------------------

inline double score(const std::vector<EvalOutcome>& reports,
                    const TuneTarget& target) {
  if (reports.empty())
    throw SemanticError("score requires at least one report");
  if (!target.any_criterion())
    throw SemanticError("tune target declares no criterion");
  double total = 0.0;
  for (const auto& r : reports) {
    if (r.gen_result != solve::SolveStats::Result::Sat) continue;  // scores 0
    double weight_sum = 0.0, met_sum = 0.0;
    const bool solved = r.grade.solvable == plan::GradeReport::Solvable::Yes;
    if (target.require_solvable) {
      weight_sum += target.weight_solvable;
      if (solved) met_sum += target.weight_solvable;
    }
    if (target.min_plan_length || target.max_plan_length) {
      weight_sum += target.weight_plan_length;
      if (solved && r.grade.plan_length) {
        const long long len = *r.grade.plan_length;
        const bool lo = !target.min_plan_length || len >= *target.min_plan_length;
        const bool hi = !target.max_plan_length || len <= *target.max_plan_length;
        if (lo && hi) met_sum += target.weight_plan_length;
      }
    }
    if (target.max_gen_wall_ms) {
      weight_sum += target.weight_gen_time;
      if (r.gen_wall_ms <= *target.max_gen_wall_ms)
        met_sum += target.weight_gen_time;
    }
    total += met_sum / weight_sum;
  }
  return total / static_cast<double>(reports.size());
}

// ---------------------------------------------------------------------------
// Racing
// ---------------------------------------------------------------------------

using Evaluator = std::function<EvalOutcome(const model::GeneratorConfig&,
                                            std::uint64_t eval_seed)>;

struct RoundRecord {
  long long seeds_this_round = 0;
  // (config, cumulative mean score) per surviving configuration
  std::vector<std::pair<model::GeneratorConfig, double>> standings;
};

struct TuneResult {
  model::GeneratorConfig best;
  double best_mean = 0.0;
  std::vector<RoundRecord> history;
  long long evaluations = 0;
  bool all_zero_warning = false;
};

namespace detail {

inline std::vector<model::GeneratorConfig> sample_population(
    const ParamSpace& space, long long count, std::uint64_t seed) {
  std::vector<model::GeneratorConfig> population;
  const long long total = space.size();
  if (total <= 4096) {
    // enumerate and shuffle: distinct by construction
    std::vector<std::vector<long long>> rows;
    std::vector<long long> current(space.params.size());
    for (std::size_t i = 0; i < space.params.size(); ++i)
      current[i] = space.params[i].lower;
    for (;;) {
      rows.push_back(current);
      std::size_t pos = space.params.size();
      bool done = space.params.empty();
      while (pos > 0) {
        --pos;
        if (++current[pos] <= space.params[pos].upper) break;
        current[pos] = space.params[pos].lower;
        if (pos == 0) done = true;
      }
      if (done) break;
    }
    Rng rng(mix_seed(seed, 0xA110C));
    rng.shuffle(rows);
    for (long long i = 0; i < count && i < static_cast<long long>(rows.size());
         ++i) {
      model::GeneratorConfig config;
      for (std::size_t p = 0; p < space.params.size(); ++p)
        config.assignment[space.params[p].name] =
            rows[static_cast<std::size_t>(i)][p];
      population.push_back(std::move(config));
    }
  } else {
    Rng rng(mix_seed(seed, 0xA110C));
    while (static_cast<long long>(population.size()) < count) {
      model::GeneratorConfig config;
      for (const auto& p : space.params)
        config.assignment[p.name] = rng.uniform(p.lower, p.upper);
      bool duplicate = false;
      for (const auto& other : population)
        duplicate = duplicate || other.assignment == config.assignment;
      if (!duplicate) population.push_back(std::move(config));
    }
  }
  return population;
}

}  // namespace detail

// Halving race with seed-doubling: every surviving configuration is
// evaluated on the same fresh seeds each round, the bottom half by
// cumulative mean is eliminated (ties kept), and the per-config evidence
// doubles until the budget runs out or one configuration remains.
inline TuneResult race(const ParamSpace& space, const TuneTarget& target,
                       long long budget, std::uint64_t seed,
                       const Evaluator& evaluate, int jobs = 1) {
  if (space.params.empty())
    throw SemanticError("tune parameter space is empty");
  for (const auto& p : space.params)
    if (p.lower > p.upper || p.lower < 1)
      throw SemanticError("bad range for parameter '" + p.name + "'");
  if (!target.any_criterion())
    throw SemanticError("tune target declares no criterion");

  const long long population_size = std::min<long long>(16, space.size());
  if (budget < 2 * population_size)
    throw SemanticError("budget must be at least twice the population size (" +
                        std::to_string(2 * population_size) + ")");

  struct Candidate {
    model::GeneratorConfig config;
    double score_sum = 0.0;
    long long evals = 0;
    double mean() const {
      return evals == 0 ? 0.0 : score_sum / static_cast<double>(evals);
    }
  };

  std::vector<Candidate> survivors;
  for (auto& config : detail::sample_population(space, population_size, seed))
    survivors.push_back({std::move(config), 0.0, 0});

  TuneResult result;
  long long remaining = budget;
  long long seeds_per_round = 2;

  for (int round = 0;; ++round) {
    long long r = seeds_per_round;
    if (remaining < static_cast<long long>(survivors.size()) * r)
      r = remaining / static_cast<long long>(survivors.size());
    if (r <= 0) break;

    std::vector<std::uint64_t> round_seeds;
    for (long long i = 0; i < r; ++i)
      round_seeds.push_back(
          mix_seed(seed, 1000003ULL * static_cast<std::uint64_t>(round + 1) +
                             static_cast<std::uint64_t>(i)));

    // common random numbers: every candidate sees the same seeds
    const std::size_t cells = survivors.size() * round_seeds.size();
    std::vector<double> scores(cells, 0.0);
    parallel_for(cells, jobs, [&](std::size_t cell) {
      const std::size_t c = cell / round_seeds.size();
      const std::size_t s = cell % round_seeds.size();
      EvalOutcome outcome = evaluate(survivors[c].config, round_seeds[s]);
      scores[cell] = score({outcome}, target);
    });
    for (std::size_t c = 0; c < survivors.size(); ++c)
      for (std::size_t s = 0; s < round_seeds.size(); ++s) {
        survivors[c].score_sum += scores[c * round_seeds.size() + s];
        survivors[c].evals += 1;
      }
    remaining -= static_cast<long long>(cells);
    result.evaluations += static_cast<long long>(cells);

    std::stable_sort(survivors.begin(), survivors.end(),
                     [](const Candidate& a, const Candidate& b) {
                       return a.mean() > b.mean();
                     });

    RoundRecord record;
    record.seeds_this_round = r;
    for (const auto& c : survivors)
      record.standings.emplace_back(c.config, c.mean());
    result.history.push_back(std::move(record));

    if (round == 0) {
      bool all_zero = true;
      for (const auto& c : survivors) all_zero = all_zero && c.mean() == 0.0;
      result.all_zero_warning = all_zero;
    }

    // Keep the top half, retaining ties with the last kept candidate.
    // Zero-score candidates never survive on a tie: with coarse early
    // evidence the boundary often lands on 0.0 and keeping that tail would
    // stall the race.
    const std::size_t keep = (survivors.size() + 1) / 2;
    if (survivors.size() > 1) {
      const double cutoff = survivors[keep - 1].mean();
      std::size_t end = keep;
      while (end < survivors.size() && survivors[end].mean() == cutoff) ++end;
      while (end > 1 && survivors[end - 1].mean() == 0.0 &&
             survivors[0].mean() > 0.0)
        --end;
      survivors.resize(end);
    }
    if (survivors.size() == 1) break;
    seeds_per_round *= 2;
  }

  result.best = survivors.front().config;
  result.best_mean = survivors.front().mean();
  return result;
}

}  // namespace pgen::tune
