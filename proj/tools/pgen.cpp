// pgen: generates valid planning instances from a single augmented PDDL
// domain, validates and grades them, benchmarks the two structural
// encodings, and tunes generator parameters toward target properties.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pgen/pipeline.hpp"

namespace {

using namespace pgen;
using pipeline::json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;   // domain/validation/generation failure
constexpr int kExitUsage = 2;

void emit(const json& payload, const std::string& out_path) {
  const std::string text = payload.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    pipeline::write_file(out_path, text);
}

model::GeneratorConfig parse_sets(const std::vector<std::string>& sets) {
  model::GeneratorConfig config;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
      throw SemanticError("--set expects name=value, got '" + s + "'");
    config.assignment[s.substr(0, eq)] = std::stoll(s.substr(eq + 1));
  }
  return config;
}

model::GeneratorConfig load_params_file(const std::string& path) {
  const json j = json::parse(pipeline::read_file(path));
  const json* object = &j;
  if (j.contains("best"))
    object = &j["best"];  // a tune result file
  else if (j.contains("params") && j["params"].is_object() &&
           !j["params"].begin().value().is_array())
    object = &j["params"];
  model::GeneratorConfig config;
  for (const auto& [k, v] : object->items())
    config.assignment[k] = v.get<long long>();
  return config;
}

model::GeneratorConfig merge_config(const model::GeneratorConfig& base,
                                    const model::GeneratorConfig& overrides) {
  model::GeneratorConfig out = base;
  for (const auto& [k, v] : overrides.assignment) out.assignment[k] = v;
  return out;
}

model::ConstraintModel::Mode parse_mode(const std::string& encoding) {
  if (encoding == "low") return model::ConstraintModel::Mode::Low;
  if (encoding == "high") return model::ConstraintModel::Mode::High;
  throw SemanticError("unknown encoding '" + encoding + "'");
}

std::vector<long long> parse_sizes(const std::string& spec) {
  std::vector<long long> sizes;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const auto comma = spec.find(',', start);
    const std::string token =
        spec.substr(start, comma == std::string::npos ? std::string::npos
                                                      : comma - start);
    if (!token.empty()) {
      const auto colon = token.find(':');
      if (colon == std::string::npos) {
        sizes.push_back(std::stoll(token));
      } else {
        const long long lo = std::stoll(token.substr(0, colon));
        const long long hi = std::stoll(token.substr(colon + 1));
        for (long long s = lo; s <= hi; ++s) sizes.push_back(s);
      }
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (sizes.empty()) throw SemanticError("empty --sizes specification");
  return sizes;
}

// Infers generator parameters from an instance's object inventory: one count
// per type, and the grid side for template-governed types.
model::GeneratorConfig infer_config(const pipeline::AugmentedDomain& loaded,
                                    const pddl::ProblemInstance& inst) {
  model::GeneratorConfig config;
  for (const auto& type : loaded.domain.types) {
    long long count = 0;
    for (const auto& o : inst.objects)
      if (o.type == type.name) ++count;
    const augment::StructuralTemplate* tmpl = nullptr;
    for (const auto& t : loaded.validity.structures)
      if (t.type_arg == type.name) tmpl = &t;
    if (tmpl) {
      const long long side =
          static_cast<long long>(std::llround(std::sqrt(
              static_cast<double>(count))));
      config.assignment[tmpl->aux_param] = std::max(1LL, side);
    } else {
      config.assignment["n_" + type.name] = std::max(1LL, count);
    }
  }
  return config;
}

// Free parameters that were neither --set nor loaded from a file default to 1.
void default_missing_params(const pipeline::AugmentedDomain& loaded,
                            model::GeneratorConfig& config) {
  for (const auto& name : loaded.validity.params)
    if (!config.assignment.count(name)) config.assignment[name] = 1;
}

// ---------------------------------------------------------------------------

struct CommonArgs {
  std::string domain_path;
  std::vector<std::string> sets;
  std::string params_file;
  std::string out;
  std::uint64_t seed = 0;
};

int cmd_parse(const std::string& domain_path, const std::string& problem_path,
              bool plain, const std::string& out) {
  const std::string text = pipeline::read_file(domain_path);
  if (plain) {
    auto domain = pddl::parse_domain(text, false);
    json predicates = json::array();
    for (const auto& p : domain.predicates) predicates.push_back(p.name);
    emit(json{{"domain", domain.name},
              {"predicates", predicates},
              {"actions", domain.actions.size()}},
         out);
    return kExitOk;
  }
  auto loaded = pipeline::load_domain_text(text);
  json summary = pipeline::domain_summary_json(loaded);
  if (!problem_path.empty()) {
    auto inst = pddl::parse_problem(pipeline::read_file(problem_path),
                                    loaded.domain);
    summary["problem"] = json{{"name", inst.name},
                              {"objects", inst.objects.size()},
                              {"init_atoms", inst.init.size()},
                              {"goal_atoms", inst.goal.size()}};
  }
  emit(summary, out);
  return kExitOk;
}

int cmd_translate(const std::string& domain_path, const std::string& encoding,
                  const model::GeneratorConfig& config,
                  const std::string& listing_path, const std::string& out) {
  auto loaded = pipeline::load_domain_file(domain_path);
  model::GeneratorConfig merged = config;
  default_missing_params(loaded, merged);
  auto m = pipeline::build_model(loaded, merged, parse_mode(encoding));
  if (!listing_path.empty())
    pipeline::write_file(listing_path, model::model_listing(m));
  json summary = pipeline::model_summary_json(m);
  summary["params"] = pipeline::config_json(merged);
  emit(summary, out);
  return kExitOk;
}

int cmd_generate(const std::string& domain_path,
                 const model::GeneratorConfig& config,
                 pipeline::BatchOptions opts) {
  auto loaded = pipeline::load_domain_file(domain_path);
  model::GeneratorConfig merged = config;
  default_missing_params(loaded, merged);
  opts.domain_path = domain_path;
  auto result = pipeline::generate_batch(loaded, merged, opts);
  for (const auto& item : result.items)
    if (!item.error.empty())
      std::cerr << "seed " << item.seed << ": " << item.error << "\n";
  std::cout << "wrote " << (result.all_ok ? result.items.size() : 0)
            << "/" << opts.count << " instances to " << opts.out_dir << "\n";
  return result.all_ok ? kExitOk : kExitFailure;
}

int cmd_validate(const std::string& domain_path,
                 const std::string& problem_path,
                 const model::GeneratorConfig& overrides,
                 const std::string& out) {
  auto loaded = pipeline::load_domain_file(domain_path);
  auto inst = pddl::parse_problem(pipeline::read_file(problem_path),
                                  loaded.domain);
  auto config = merge_config(infer_config(loaded, inst), overrides);
  auto report =
      plan::validate_instance(inst, loaded.validity, loaded.domain, config);
  emit(pipeline::validation_json(report), out);
  return report.pass ? kExitOk : kExitFailure;
}

int cmd_grade(const std::string& domain_path, const std::string& problem_path,
              long long max_expansions, double time_limit_ms,
              const std::string& out) {
  auto loaded = pipeline::load_domain_file(domain_path);
  auto inst = pddl::parse_problem(pipeline::read_file(problem_path),
                                  loaded.domain);
  plan::GradeBudget budget;
  budget.search.max_expansions = max_expansions;
  budget.search.time_limit_ms = time_limit_ms;
  auto report = plan::grade(loaded.domain, inst, budget);
  emit(pipeline::grade_json(report), out);
  return kExitOk;
}

int cmd_bench(const std::string& domain_path, const std::string& sizes_spec,
              const std::string& encodings,
              const model::GeneratorConfig& overrides,
              std::uint64_t seed, double time_limit_ms, int repeats,
              const std::string& out) {
  auto loaded = pipeline::load_domain_file(domain_path);
  pipeline::BenchOptions opts;
  opts.sizes = parse_sizes(sizes_spec);
  opts.run_low = encodings == "both" || encodings == "low";
  opts.run_high = encodings == "both" || encodings == "high";
  if (!opts.run_low && !opts.run_high)
    throw SemanticError("unknown encodings '" + encodings + "'");
  opts.seed = seed;
  opts.time_limit_ms = time_limit_ms;
  opts.repeats = repeats;
  model::GeneratorConfig base = overrides;
  default_missing_params(loaded, base);
  if (!loaded.validity.structures.empty())
    base.assignment.erase(loaded.validity.structures[0].aux_param);
  auto rows = pipeline::bench(loaded, base, opts);
  const std::string csv = pipeline::bench_csv(rows);
  if (out.empty()) {
    std::cout << csv;
  } else {
    pipeline::write_file(out, csv);
    json manifest = pipeline::manifest_base("bench");
    manifest["domain"] = domain_path;
    manifest["sizes"] = opts.sizes;
    manifest["encodings"] = encodings;
    manifest["seed"] = seed;
    manifest["time_limit_ms"] = time_limit_ms;
    manifest["repeats"] = repeats;
    manifest["params"] = pipeline::config_json(base);
    manifest["out"] = out;
    pipeline::write_file(out + ".manifest.json", manifest.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_tune(const std::string& domain_path, const std::string& config_path,
             const std::string& encoding, int jobs, double gen_time_limit,
             long long grade_expansions, double grade_time_limit,
             const std::string& out) {
  auto loaded = pipeline::load_domain_file(domain_path);
  auto spec = pipeline::parse_tune_config(
      json::parse(pipeline::read_file(config_path)), loaded);
  pipeline::EvalOptions opts;
  opts.mode = parse_mode(encoding);
  opts.gen_time_limit_ms = gen_time_limit;
  opts.grade_budget.search.max_expansions = grade_expansions;
  opts.grade_budget.search.time_limit_ms = grade_time_limit;
  auto result = pipeline::run_tune(loaded, spec, opts, jobs);
  json payload = pipeline::tune_result_json(result);
  emit(payload, out);
  if (!out.empty()) {
    json manifest = pipeline::manifest_base("tune");
    manifest["domain"] = domain_path;
    manifest["config"] = config_path;
    manifest["encoding"] = encoding;
    manifest["jobs"] = jobs;
    manifest["out"] = out;
    pipeline::write_file(out + ".manifest.json", manifest.dump(2) + "\n");
    std::cout << "best " << payload["best"].dump() << " mean "
              << result.best_mean << " after " << result.evaluations
              << " evaluations\n";
  }
  if (result.all_zero_warning)
    std::cerr << "warning: every configuration scored 0 in round 0\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"valid-instance generator for augmented PDDL domains"};
  app.require_subcommand(1);
  app.set_version_flag("--version", pipeline::kToolVersion);

  // parse
  auto* parse = app.add_subcommand("parse", "parse a domain (and problem) "
                                            "and print a summary");
  std::string parse_domain_path, parse_problem_path, parse_out;
  bool parse_plain = false;
  parse->add_option("domain", parse_domain_path)->required();
  parse->add_option("--problem", parse_problem_path);
  parse->add_flag("--plain", parse_plain,
                  "reject the :instance-constraints section");
  parse->add_option("--out", parse_out);

  // translate
  auto* translate = app.add_subcommand(
      "translate", "compile the constraint model and print its summary");
  std::string tr_domain, tr_encoding = "low", tr_listing, tr_out;
  std::vector<std::string> tr_sets;
  std::string tr_params;
  translate->add_option("domain", tr_domain)->required();
  translate->add_option("--encoding", tr_encoding)
      ->check(CLI::IsMember({"low", "high"}));
  translate->add_option("--set", tr_sets, "parameter assignment name=value");
  translate->add_option("--params", tr_params, "JSON parameter file");
  translate->add_option("--listing", tr_listing,
                        "write the one-constraint-per-line listing here");
  translate->add_option("--out", tr_out);

  // generate
  auto* generate = app.add_subcommand(
      "generate", "sample valid instances and write PDDL problem files");
  std::string gen_domain, gen_out_dir, gen_params, gen_encoding = "high";
  std::vector<std::string> gen_sets;
  long long gen_count = 1;
  std::uint64_t gen_seed = 0;
  double gen_time_limit = 10000;
  int gen_jobs = 1;
  bool gen_no_validate = false;
  generate->add_option("domain", gen_domain)->required();
  generate->add_option("--out", gen_out_dir)->required();
  generate->add_option("--params", gen_params, "JSON parameter file");
  generate->add_option("--set", gen_sets, "parameter assignment name=value");
  generate->add_option("--encoding", gen_encoding)
      ->check(CLI::IsMember({"low", "high"}));
  generate->add_option("--count", gen_count);
  generate->add_option("--seed", gen_seed);
  generate->add_option("--time-limit", gen_time_limit,
                       "per-instance limit in ms");
  generate->add_option("--jobs", gen_jobs);
  generate->add_flag("--no-validate", gen_no_validate);
  bool gen_restarts = false;
  long long gen_int_max = 0;
  generate->add_flag("--restarts", gen_restarts,
                     "enable geometric solver restarts");
  generate->add_option("--int-max", gen_int_max,
                       "default upper bound for integer fluents");

  // validate
  auto* validate = app.add_subcommand(
      "validate", "check an instance against the validity constraints");
  std::string val_domain, val_problem, val_out;
  std::vector<std::string> val_sets;
  validate->add_option("domain", val_domain)->required();
  validate->add_option("problem", val_problem)->required();
  validate->add_option("--set", val_sets,
                       "override inferred parameters, name=value");
  validate->add_option("--out", val_out);

  // grade
  auto* grade = app.add_subcommand(
      "grade", "ground an instance and measure solvability and hardness");
  std::string grade_domain, grade_problem, grade_out;
  long long grade_expansions = 1000000;
  double grade_time_limit = 60000;
  grade->add_option("domain", grade_domain)->required();
  grade->add_option("problem", grade_problem)->required();
  grade->add_option("--max-expansions", grade_expansions);
  grade->add_option("--time-limit", grade_time_limit);
  grade->add_option("--out", grade_out);

  // bench
  auto* bench = app.add_subcommand(
      "bench", "compare the low and high structural encodings across sizes");
  std::string bench_domain, bench_sizes, bench_encodings = "both", bench_out;
  std::vector<std::string> bench_sets;
  std::uint64_t bench_seed = 0;
  double bench_time_limit = 300000;
  int bench_repeats = 1;
  bench->add_option("domain", bench_domain)->required();
  bench->add_option("--sizes", bench_sizes, "e.g. 2:12 or 2,4,8")->required();
  bench->add_option("--encodings", bench_encodings)
      ->check(CLI::IsMember({"both", "low", "high"}));
  bench->add_option("--set", bench_sets);
  bench->add_option("--seed", bench_seed);
  bench->add_option("--time-limit", bench_time_limit, "per-row limit in ms");
  bench->add_option("--repeats", bench_repeats,
                    "median time over this many runs");
  bench->add_option("--out", bench_out, "CSV path (stdout when omitted)");

  // tune
  auto* tune_cmd = app.add_subcommand(
      "tune", "race generator configurations toward target properties");
  std::string tune_domain, tune_config, tune_encoding = "high", tune_out;
  int tune_jobs = 1;
  double tune_gen_limit = 2000, tune_grade_limit = 0;
  long long tune_grade_expansions = 20000;
  tune_cmd->add_option("domain", tune_domain)->required();
  tune_cmd->add_option("--config", tune_config, "tune.json")->required();
  tune_cmd->add_option("--encoding", tune_encoding)
      ->check(CLI::IsMember({"low", "high"}));
  tune_cmd->add_option("--jobs", tune_jobs);
  tune_cmd->add_option("--gen-time-limit", tune_gen_limit);
  tune_cmd->add_option("--grade-expansions", tune_grade_expansions);
  tune_cmd->add_option("--grade-time-limit", tune_grade_limit,
                       "wall cutoff in ms; 0 keeps grading deterministic");
  tune_cmd->add_option("--out", tune_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (parse->parsed())
      return cmd_parse(parse_domain_path, parse_problem_path, parse_plain,
                       parse_out);
    if (translate->parsed()) {
      auto config = parse_sets(tr_sets);
      if (!tr_params.empty())
        config = merge_config(load_params_file(tr_params), config);
      return cmd_translate(tr_domain, tr_encoding, config, tr_listing, tr_out);
    }
    if (generate->parsed()) {
      auto config = parse_sets(gen_sets);
      if (!gen_params.empty())
        config = merge_config(load_params_file(gen_params), config);
      pipeline::BatchOptions opts;
      opts.count = gen_count;
      opts.seed = gen_seed;
      opts.mode = parse_mode(gen_encoding);
      opts.time_limit_ms = gen_time_limit;
      opts.jobs = gen_jobs;
      opts.out_dir = gen_out_dir;
      opts.validate = !gen_no_validate;
      opts.solver.enable_restarts = gen_restarts;
      if (gen_int_max > 0) config.int_default_max = gen_int_max;
      return cmd_generate(gen_domain, config, opts);
    }
    if (validate->parsed())
      return cmd_validate(val_domain, val_problem, parse_sets(val_sets),
                          val_out);
    if (grade->parsed())
      return cmd_grade(grade_domain, grade_problem, grade_expansions,
                       grade_time_limit, grade_out);
    if (bench->parsed())
      return cmd_bench(bench_domain, bench_sizes, bench_encodings,
                       parse_sets(bench_sets), bench_seed, bench_time_limit,
                       bench_repeats, bench_out);
    if (tune_cmd->parsed())
      return cmd_tune(tune_domain, tune_config, tune_encoding, tune_jobs,
                      tune_gen_limit, tune_grade_expansions, tune_grade_limit,
                      tune_out);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const SemanticError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
