#pragma once

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pgen/augment.hpp"
#include "pgen/model.hpp"
#include "pgen/parallel.hpp"
#include "pgen/pddl.hpp"
#include "pgen/plan.hpp"
#include "pgen/rng.hpp"
#include "pgen/solve.hpp"
#include "pgen/tune.hpp"

namespace pgen::pipeline {

using json = nlohmann::json;

inline constexpr const char* kToolName = "pgen";
inline constexpr const char* kToolVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Loading
// ---------------------------------------------------------------------------

struct AugmentedDomain {
  pddl::DomainSpec domain;
  augment::ValiditySpec validity;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

inline AugmentedDomain load_domain_text(std::string_view text) {
  AugmentedDomain loaded;
  loaded.domain = pddl::parse_domain(text, true);
  if (!loaded.domain.instance_constraints)
    throw SemanticError("domain has no validity specification "
                        "(:instance-constraints section missing)");
  loaded.validity = augment::parse_instance_constraints(
      *loaded.domain.instance_constraints, loaded.domain);
  return loaded;
}

inline AugmentedDomain load_domain_file(const std::string& path) {
  return load_domain_text(read_file(path));
}

// ---------------------------------------------------------------------------
// Single-instance generation
// ---------------------------------------------------------------------------

inline model::ConstraintModel build_model(const AugmentedDomain& loaded,
                                          const model::GeneratorConfig& config,
                                          model::ConstraintModel::Mode mode) {
  auto objects = model::objects_from_config(loaded.domain,
                                            loaded.validity.structures, config);
  auto gspec = augment::expand(loaded.validity, loaded.domain, objects);
  return mode == model::ConstraintModel::Mode::Low
             ? model::compile_low(loaded.domain, gspec, config)
             : model::compile_high(loaded.domain, gspec, config);
}

struct GenerationResult {
  solve::SolveStats stats;
  std::optional<pddl::ProblemInstance> instance;
};

inline GenerationResult generate_instance(const AugmentedDomain& loaded,
                                          const model::ConstraintModel& m,
                                          const model::GeneratorConfig& config,
                                          std::uint64_t seed,
                                          double time_limit_ms,
                                          const solve::SolveOptions& solver = {}) {
  GenerationResult result;
  auto outcome = solve::generate(m, seed, time_limit_ms, solver);
  result.stats = outcome.stats;
  if (outcome.assignment) {
    model::GeneratorConfig stamped = config;
    stamped.seed = seed;
    result.instance = solve::decode(m, *outcome.assignment, loaded.domain,
                                    stamped);
    auto& prov = *result.instance->provenance;
    prov.nodes = outcome.stats.nodes;
    prov.propagations = outcome.stats.propagations;
    prov.restarts = outcome.stats.restarts;
    prov.wall_ms = outcome.stats.wall_ms;
    prov.result = solve::result_name(outcome.stats.result);
  }
  return result;
}

// ---------------------------------------------------------------------------
// JSON views
// ---------------------------------------------------------------------------

inline json config_json(const model::GeneratorConfig& config) {
  json out = json::object();
  for (const auto& [k, v] : config.assignment) out[k] = v;
  return out;
}

inline json stats_json(const solve::SolveStats& stats) {
  return json{{"nodes", stats.nodes},
              {"propagations", stats.propagations},
              {"restarts", stats.restarts},
              {"wall_ms", stats.wall_ms},
              {"result", solve::result_name(stats.result)}};
}

inline json grade_json(const plan::GradeReport& report) {
  json out{{"solvable", plan::solvable_name(report.solvable)},
           {"expansions", report.expansions},
           {"wall_ms", report.wall_ms}};
  if (report.plan_length) out["plan_length"] = *report.plan_length;
  return out;
}

inline json validation_json(const plan::ValidationReport& report) {
  json violations = json::array();
  for (const auto& v : report.violations)
    violations.push_back(
        {{"category", plan::violation_category_name(v.category)},
         {"scope", augment::scope_name(v.scope)},
         {"message", v.message}});
  return json{{"pass", report.pass}, {"violations", violations}};
}

inline json domain_summary_json(const AugmentedDomain& loaded) {
  json predicates = json::array();
  for (const auto& p : loaded.domain.predicates) predicates.push_back(p.name);
  json actions = json::array();
  for (const auto& a : loaded.domain.actions) actions.push_back(a.name);
  json types = json::array();
  for (const auto& t : loaded.domain.types) types.push_back(t.name);
  json params = json::array();
  for (const auto& p : loaded.validity.params) params.push_back(p);
  json structures = json::array();
  for (const auto& s : loaded.validity.structures)
    structures.push_back({{"type", s.type_arg},
                          {"size_param", s.aux_param},
                          {"predicates", s.predicates}});
  return json{{"domain", loaded.domain.name},
              {"types", types},
              {"predicates", predicates},
              {"actions", actions},
              {"validity_constraints", loaded.validity.constraints.size()},
              {"structures", structures},
              {"bounds", loaded.validity.bounds.size()},
              {"generator_params", params}};
}

inline json tally_json(const model::Tally& tally) {
  return json{{"structural", tally.structural},
              {"cardinality", tally.cardinality},
              {"logic", tally.logic},
              {"fixed", tally.fixed}};
}

inline json model_summary_json(const model::ConstraintModel& m) {
  return json{{"mode",
               m.mode == model::ConstraintModel::Mode::Low ? "low" : "high"},
              {"bool_variables", m.bool_count()},
              {"int_variables", m.int_count()},
              {"choice_groups", m.choice_groups.size()},
              {"constraints", tally_json(model::count_constraints(m))}};
}

inline std::string timestamp_utc() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

inline json manifest_base(const std::string& subcommand) {
  return json{{"tool", kToolName},
              {"version", kToolVersion},
              {"subcommand", subcommand},
              {"created", timestamp_utc()}};
}

// ---------------------------------------------------------------------------
// Batch generation
// ---------------------------------------------------------------------------

struct BatchOptions {
  long long count = 1;
  std::uint64_t seed = 0;
  model::ConstraintModel::Mode mode = model::ConstraintModel::Mode::High;
  double time_limit_ms = 10000;
  int jobs = 1;
  std::string out_dir;
  bool validate = true;
  std::string domain_path;  // recorded in the manifest
  solve::SolveOptions solver;
};

struct BatchItem {
  std::string file;  // empty when generation failed
  std::uint64_t seed = 0;
  solve::SolveStats stats;
  bool valid = false;
  std::string error;
};

struct BatchResult {
  std::vector<BatchItem> items;
  bool all_ok = true;
  std::string manifest_path;
};

// Generates `count` instances from derived seeds, validates each, and writes
// inst_NNNN.pddl plus a .meta.json sidecar per instance and one manifest for
// the batch. Generation may run in parallel; writes happen sequentially.
inline BatchResult generate_batch(const AugmentedDomain& loaded,
                                  const model::GeneratorConfig& base_config,
                                  const BatchOptions& opts) {
  BatchResult result;
  result.items.resize(static_cast<std::size_t>(opts.count));
  if (!opts.out_dir.empty())
    std::filesystem::create_directories(opts.out_dir);

  const model::ConstraintModel m = build_model(loaded, base_config, opts.mode);
  std::vector<std::optional<pddl::ProblemInstance>> instances(
      static_cast<std::size_t>(opts.count));

  parallel_for(static_cast<std::size_t>(opts.count), opts.jobs,
               [&](std::size_t i) {
    BatchItem& item = result.items[i];
    item.seed = mix_seed(opts.seed, i + 1);
    GenerationResult gen = generate_instance(loaded, m, base_config, item.seed,
                                             opts.time_limit_ms, opts.solver);
    item.stats = gen.stats;
    if (!gen.instance) {
      item.error = std::string("generation ") +
                   solve::result_name(gen.stats.result);
      return;
    }
    std::ostringstream name;
    name << "inst_" << std::setw(4) << std::setfill('0') << (i + 1);
    gen.instance->name = name.str();
    if (opts.validate) {
      auto report = plan::validate_instance(*gen.instance, loaded.validity,
                                            loaded.domain, base_config);
      item.valid = report.pass;
      if (!report.pass) {
        item.error = "validation failed: " +
                     report.violations.front().message;
        return;
      }
    } else {
      item.valid = true;
    }
    instances[i] = std::move(gen.instance);
  });

  json files = json::array();
  for (std::size_t i = 0; i < instances.size(); ++i) {
    BatchItem& item = result.items[i];
    if (!instances[i]) {
      result.all_ok = false;
      continue;
    }
    const pddl::ProblemInstance& inst = *instances[i];
    const std::string base =
        (std::filesystem::path(opts.out_dir) / inst.name).string();
    item.file = base + ".pddl";
    write_file(item.file, pddl::emit_problem(inst));
    const auto& prov = *inst.provenance;
    json meta{{"config", config_json(base_config)},
              {"seed", item.seed},
              {"encoding", prov.encoding},
              {"stats", stats_json(item.stats)},
              {"valid", item.valid}};
    write_file(base + ".meta.json", meta.dump(2) + "\n");
    files.push_back(inst.name + ".pddl");
  }

  json manifest = manifest_base("generate");
  manifest["domain"] = opts.domain_path;
  manifest["params"] = config_json(base_config);
  manifest["encoding"] =
      opts.mode == model::ConstraintModel::Mode::Low ? "low" : "high";
  manifest["count"] = opts.count;
  manifest["seed"] = opts.seed;
  manifest["time_limit_ms"] = opts.time_limit_ms;
  manifest["jobs"] = opts.jobs;
  manifest["files"] = files;
  result.manifest_path =
      (std::filesystem::path(opts.out_dir) / "manifest.json").string();
  write_file(result.manifest_path, manifest.dump(2) + "\n");
  return result;
}

// ---------------------------------------------------------------------------
// Benchmark (low vs high structural encodings)
// ---------------------------------------------------------------------------

struct BenchRow {
  long long tile_size = 0;
  std::string encoding;
  long long constraint_count = 0;
  double gen_time_ms = 0.0;
  std::string result;
};

struct BenchOptions {
  std::vector<long long> sizes;
  bool run_low = true;
  bool run_high = true;
  std::uint64_t seed = 0;
  double time_limit_ms = 300000;
  int repeats = 1;  // gen_time_ms is the median over repeats
};

// One full generation (expand, compile, solve, decode) per row; the
// structural tally of the compiled model is the reported constraint count.
inline std::vector<BenchRow> bench(const AugmentedDomain& loaded,
                                   const model::GeneratorConfig& base_config,
                                   const BenchOptions& opts) {
  if (loaded.validity.structures.size() != 1)
    throw SemanticError("bench requires exactly one grid template");
  const std::string size_param = loaded.validity.structures[0].aux_param;

  std::vector<BenchRow> rows;
  for (long long s : opts.sizes) {
    for (int pass = 0; pass < 2; ++pass) {
      const bool low = pass == 0;
      if (low && !opts.run_low) continue;
      if (!low && !opts.run_high) continue;
      const auto mode = low ? model::ConstraintModel::Mode::Low
                            : model::ConstraintModel::Mode::High;
      model::GeneratorConfig config = base_config;
      config.assignment[size_param] = s;

      BenchRow row;
      row.tile_size = s;
      row.encoding = low ? "low" : "high";
      {
        auto m = build_model(loaded, config, mode);
        row.constraint_count = model::count_constraints(m).structural;
      }
      std::vector<double> times;
      std::string outcome = "sat";
      for (int rep = 0; rep < std::max(1, opts.repeats); ++rep) {
        const auto start = std::chrono::steady_clock::now();
        auto m = build_model(loaded, config, mode);
        auto gen = generate_instance(loaded, m, config,
                                     mix_seed(opts.seed, s), opts.time_limit_ms);
        times.push_back(std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count());
        outcome = solve::result_name(gen.stats.result);
        if (!gen.instance) break;
      }
      std::sort(times.begin(), times.end());
      row.gen_time_ms = times[times.size() / 2];
      row.result = outcome;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

inline std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "tile_size,encoding,constraint_count,gen_time_ms,result\n";
  for (const auto& row : rows) {
    out << row.tile_size << ',' << row.encoding << ','
        << row.constraint_count << ',' << std::fixed << std::setprecision(3)
        << row.gen_time_ms << ',' << row.result << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Tuning driver
// ---------------------------------------------------------------------------

struct TuneSpec {
  tune::ParamSpace space;
  tune::TuneTarget target;
  long long budget = 0;
  std::uint64_t seed = 0;
};

inline TuneSpec parse_tune_config(const json& config,
                                  const AugmentedDomain& loaded) {
  TuneSpec spec;
  if (!config.contains("params") || !config["params"].is_object())
    throw SemanticError("tune config needs a 'params' object");
  for (const auto& [name, range] : config["params"].items()) {
    if (!range.is_array() || range.size() != 2)
      throw SemanticError("range for '" + name + "' must be [lower, upper]");
    spec.space.params.push_back(
        {name, range[0].get<long long>(), range[1].get<long long>()});
  }
  // Parameter set must match the free generator parameters of the domain.
  for (const auto& required : loaded.validity.params) {
    bool found = false;
    for (const auto& p : spec.space.params) found = found || p.name == required;
    if (!found)
      throw SemanticError("tune config is missing parameter '" + required +
                          "'");
  }
  for (const auto& p : spec.space.params) {
    bool known = false;
    for (const auto& required : loaded.validity.params)
      known = known || required == p.name;
    if (!known)
      throw SemanticError("tune config declares unknown parameter '" + p.name +
                          "'");
  }

  if (!config.contains("target"))
    throw SemanticError("tune config needs a 'target' object");
  const json& t = config["target"];
  if (t.contains("solvable")) spec.target.require_solvable = t["solvable"];
  if (t.contains("plan_length")) {
    if (t["plan_length"].contains("min"))
      spec.target.min_plan_length = t["plan_length"]["min"].get<long long>();
    if (t["plan_length"].contains("max"))
      spec.target.max_plan_length = t["plan_length"]["max"].get<long long>();
  }
  if (t.contains("gen_time_ms") && t["gen_time_ms"].contains("max"))
    spec.target.max_gen_wall_ms = t["gen_time_ms"]["max"].get<double>();
  if (t.contains("weights")) {
    const json& w = t["weights"];
    if (w.contains("solvable")) spec.target.weight_solvable = w["solvable"];
    if (w.contains("plan_length"))
      spec.target.weight_plan_length = w["plan_length"];
    if (w.contains("gen_time")) spec.target.weight_gen_time = w["gen_time"];
  }
  spec.budget = config.value("budget", 0LL);
  spec.seed = config.value("seed", 0ULL);
  return spec;
}

// Tuner evaluation budgets. Grading is capped by deterministic work (no
// wall-clock cutoff) so race outcomes are reproducible run to run.
struct EvalOptions {
  model::ConstraintModel::Mode mode = model::ConstraintModel::Mode::High;
  double gen_time_limit_ms = 2000;
  plan::GradeBudget grade_budget{{20000, 0.0}, 1'000'000, 120, 80'000'000, 200};
};

inline tune::EvalOutcome evaluate_config(const AugmentedDomain& loaded,
                                         const model::GeneratorConfig& config,
                                         std::uint64_t eval_seed,
                                         const EvalOptions& opts) {
  tune::EvalOutcome outcome;
  auto m = build_model(loaded, config, opts.mode);
  GenerationResult gen =
      generate_instance(loaded, m, config, eval_seed, opts.gen_time_limit_ms);
  outcome.gen_result = gen.stats.result;
  outcome.gen_wall_ms = gen.stats.wall_ms;
  if (gen.instance)
    outcome.grade = plan::grade(loaded.domain, *gen.instance,
                                opts.grade_budget);
  return outcome;
}

inline tune::TuneResult run_tune(const AugmentedDomain& loaded,
                                 const TuneSpec& spec, const EvalOptions& opts,
                                 int jobs = 1) {
  return tune::race(
      spec.space, spec.target, spec.budget, spec.seed,
      [&](const model::GeneratorConfig& config, std::uint64_t eval_seed) {
        return evaluate_config(loaded, config, eval_seed, opts);
      },
      jobs);
}

// Deterministic result report: no wall-clock fields, so rerunning the tuner
// with the same config file reproduces the bytes.
inline json tune_result_json(const tune::TuneResult& result) {
  json rounds = json::array();
  for (const auto& round : result.history) {
    json standings = json::array();
    for (const auto& [config, mean] : round.standings)
      standings.push_back({{"config", config_json(config)}, {"mean", mean}});
    rounds.push_back({{"seeds_per_config", round.seeds_this_round},
                      {"standings", standings}});
  }
  return json{{"best", config_json(result.best)},
              {"best_mean", result.best_mean},
              {"evaluations", result.evaluations},
              {"all_zero_warning", result.all_zero_warning},
              {"rounds", rounds}};
}

}  // namespace pgen::pipeline
