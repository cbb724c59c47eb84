#include <chrono>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "refinekit/aut_io.hpp"
#include "refinekit/generators.hpp"
#include "refinekit/lts.hpp"
#include "refinekit/minimisation.hpp"
#include "refinekit/oracle.hpp"
#include "refinekit/refinement.hpp"

namespace {

using namespace refinekit;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct LtsSizes {
  StateIndex states = 0;
  std::size_t transitions = 0;
};

LtsSizes sizes_of(const Lts& lts) {
  return {lts.num_states, lts.num_transitions()};
}

// Mirrors one row of the experiment reports: verdict, timings and the
// input sizes before and after minimisation.
struct RunReport {
  Verdict verdict;
  double wall_time = 0.0;
  double preprocessing_time = 0.0;
  LtsSizes spec_before, spec_after;
  LtsSizes impl_before, impl_after;
};

nlohmann::json report_json(const RunReport& report) {
  const Metrics& m = report.verdict.metrics;
  return nlohmann::json{
      {"refines", report.verdict.refines},
      {"wall_time", report.wall_time},
      {"preprocessing_time", report.preprocessing_time},
      {"spec_states", report.spec_before.states},
      {"spec_transitions", report.spec_before.transitions},
      {"spec_states_min", report.spec_after.states},
      {"spec_transitions_min", report.spec_after.transitions},
      {"impl_states", report.impl_before.states},
      {"impl_transitions", report.impl_before.transitions},
      {"impl_states_min", report.impl_after.states},
      {"impl_transitions_min", report.impl_after.transitions},
      {"working_max", m.working_max},
      {"antichain_hits", m.antichain_hits},
      {"antichain_misses", m.antichain_misses},
      {"antichain_max", m.antichain_max},
      {"pairs_done", m.pairs_done},
  };
}

void print_report_csv(std::ostream& out, const RunReport& report) {
  const Metrics& m = report.verdict.metrics;
  out << "refines,wall_time,preprocessing_time,spec_states,spec_transitions,"
         "spec_states_min,spec_transitions_min,impl_states,impl_transitions,"
         "impl_states_min,impl_transitions_min,working_max,antichain_hits,"
         "antichain_misses,antichain_max,pairs_done\n";
  out << (report.verdict.refines ? "true" : "false") << ',' << report.wall_time
      << ',' << report.preprocessing_time << ',' << report.spec_before.states
      << ',' << report.spec_before.transitions << ',' << report.spec_after.states
      << ',' << report.spec_after.transitions << ',' << report.impl_before.states
      << ',' << report.impl_before.transitions << ',' << report.impl_after.states
      << ',' << report.impl_after.transitions << ',' << m.working_max << ','
      << m.antichain_hits << ',' << m.antichain_misses << ',' << m.antichain_max
      << ',' << m.pairs_done << '\n';
}

struct Range {
  std::size_t from = 0;
  std::size_t to = 0;
  std::size_t step = 1;
};

// Accepts "N" or "A:B:STEP".
Range parse_range(const std::string& text) {
  Range range;
  auto first = text.find(':');
  if (first == std::string::npos) {
    range.from = range.to = std::stoull(text);
    return range;
  }
  auto second = text.find(':', first + 1);
  if (second == std::string::npos) {
    throw CLI::ValidationError("range", "expected N or A:B:STEP");
  }
  range.from = std::stoull(text.substr(0, first));
  range.to = std::stoull(text.substr(first + 1, second - first - 1));
  range.step = std::stoull(text.substr(second + 1));
  if (range.step == 0 || range.to < range.from) {
    throw CLI::ValidationError("range", "expected A <= B and STEP > 0");
  }
  return range;
}

struct CheckOptions {
  std::string spec_path;
  std::string impl_path;
  std::string relation = "trace";
  std::string strategy = "bf";
  std::string variant = "improved";
  std::string tau_name = "tau";
  std::string metrics_format;
  bool minimize = false;
  bool minimize_impl = false;
  bool allow_unsound_legacy_fdr = false;
  bool counterexample = false;
  bool oracle = false;
};

Relation parse_relation(const std::string& name) {
  if (name == "trace") {
    return Relation::Trace;
  }
  if (name == "stable-failures") {
    return Relation::StableFailures;
  }
  return Relation::FailuresDivergences;
}

int run_check_command(const CheckOptions& options) {
  auto labels = std::make_shared<LabelTable>(options.tau_name);
  Lts spec = load_aut(options.spec_path, labels);
  Lts impl = load_aut(options.impl_path, labels);

  RunReport report;
  report.spec_before = sizes_of(spec);
  report.impl_before = sizes_of(impl);

  Clock::time_point preprocessing_start = Clock::now();
  if (options.minimize) {
    spec = minimise(spec);
  }
  if (options.minimize_impl) {
    impl = minimise(impl);
  }
  if (options.minimize || options.minimize_impl) {
    report.preprocessing_time = seconds_since(preprocessing_start);
  }
  report.spec_after = sizes_of(spec);
  report.impl_after = sizes_of(impl);

  ExplorationConfig config;
  config.relation = parse_relation(options.relation);
  config.strategy =
      options.strategy == "df" ? Strategy::DepthFirst : Strategy::BreadthFirst;
  config.variant =
      options.variant == "legacy" ? Variant::Legacy : Variant::Improved;
  config.allow_unsound_legacy_fdr = options.allow_unsound_legacy_fdr;
  config.want_counterexample = options.counterexample;

  if (config.variant == Variant::Legacy &&
      config.relation == Relation::FailuresDivergences &&
      !config.allow_unsound_legacy_fdr) {
    std::cerr << "error: the legacy failures-divergences algorithm is unsound "
                 "(it can report spurious violations and miss real ones); "
                 "pass --allow-unsound-legacy-fdr to run it regardless\n";
    return 2;
  }

  // The oracle flag is rejected up front when the instance is too big,
  // never halfway through a check.
  if (options.oracle) {
    auto bound = oracle_state_bound(spec, impl);
    if (!bound || *bound > default_oracle_budget) {
      std::cerr << "error: oracle too large: 2^" << spec.num_states << " * "
                << impl.num_states << " exceeds the oracle budget of "
                << default_oracle_budget << " states\n";
      return 2;
    }
  }

  Clock::time_point check_start = Clock::now();
  CheckResult result = run_check(spec, impl, config);
  report.wall_time = seconds_since(check_start);
  if (result.budget_exceeded()) {
    std::cerr << "error: node budget exceeded\n";
    return 2;
  }
  report.verdict = std::move(result.verdict);

  std::cout << "refines: " << (report.verdict.refines ? "true" : "false")
            << "\n";
  if (options.counterexample && report.verdict.counterexample) {
    std::cout << "counterexample:";
    for (ActionIndex action : *report.verdict.counterexample) {
      std::cout << ' ' << labels->name(action);
    }
    std::cout << "\n";
    if (report.verdict.witness_kind) {
      std::cout << "witness: " << to_string(*report.verdict.witness_kind)
                << "\n";
    }
  }
  if (options.metrics_format == "json") {
    std::cout << report_json(report).dump() << "\n";
  } else if (options.metrics_format == "csv") {
    print_report_csv(std::cout, report);
  }

  if (options.oracle) {
    bool expected = oracle_refines(spec, impl, config.relation);
    if (expected != report.verdict.refines) {
      std::cerr << "error: oracle disagrees: engine says "
                << (report.verdict.refines ? "true" : "false")
                << ", definitional check says " << (expected ? "true" : "false")
                << "\n";
      return 2;
    }
  }
  return report.verdict.refines ? 0 : 1;
}

struct BenchOptions {
  std::string n_range;
  std::string k_range;
  std::string relation = "trace";
  std::string strategy = "df";
  std::string variant = "improved";
  std::size_t node_budget = 0;
};

int run_bench_command(const BenchOptions& options) {
  Range n_range = parse_range(options.n_range);
  Range k_range = parse_range(options.k_range);

  ExplorationConfig config;
  config.relation = parse_relation(options.relation);
  config.strategy =
      options.strategy == "bf" ? Strategy::BreadthFirst : Strategy::DepthFirst;
  config.variant =
      options.variant == "legacy" ? Variant::Legacy : Variant::Improved;
  config.allow_unsound_legacy_fdr = true;
  config.want_counterexample = false;
  config.node_budget = options.node_budget;

  std::cout << "n,k,verdict,wall_time,working_max,antichain_hits,"
               "antichain_misses,antichain_max\n";
  for (std::size_t n = n_range.from; n <= n_range.to; n += n_range.step) {
    for (std::size_t k = k_range.from; k <= k_range.to; k += k_range.step) {
      Lts ladder = gen_ladder(static_cast<StateIndex>(n), k);
      Clock::time_point start = Clock::now();
      CheckResult result = run_check(ladder, ladder, config);
      double elapsed = seconds_since(start);
      const Metrics& m = result.verdict.metrics;
      const char* verdict = result.budget_exceeded()
                                ? "budget-exceeded"
                                : (result.verdict.refines ? "true" : "false");
      std::cout << n << ',' << k << ',' << verdict << ',' << elapsed << ','
                << m.working_max << ',' << m.antichain_hits << ','
                << m.antichain_misses << ',' << m.antichain_max << "\n";
      std::cout.flush();
    }
  }
  return 0;
}

void emit_lts(const Lts& lts, const std::string& output_path) {
  if (output_path.empty()) {
    write_aut(std::cout, lts);
    return;
  }
  std::ofstream file(output_path);
  if (!file) {
    throw std::runtime_error("cannot write '" + output_path + "'");
  }
  write_aut(file, lts);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "refinekit: antichain-based trace, stable-failures and "
      "failures-divergences refinement checking for labelled transition "
      "systems in Aldebaran (.aut) format"};
  app.require_subcommand(1);

  CheckOptions check;
  CLI::App* check_cmd =
      app.add_subcommand("check", "decide whether IMPL refines SPEC");
  check_cmd
      ->add_option("--relation", check.relation,
                   "refinement semantics to decide")
      ->check(CLI::IsMember({"trace", "stable-failures", "failures-divergences"}))
      ->required();
  check_cmd->add_option("--strategy", check.strategy, "exploration order")
      ->check(CLI::IsMember({"df", "bf"}))
      ->capture_default_str();
  check_cmd->add_option("--variant", check.variant, "algorithm family")
      ->check(CLI::IsMember({"improved", "legacy"}))
      ->capture_default_str();
  check_cmd->add_flag("--minimize", check.minimize,
                      "minimise the specification first");
  check_cmd->add_flag("--minimize-impl", check.minimize_impl,
                      "minimise the implementation as well");
  check_cmd->add_flag("--allow-unsound-legacy-fdr", check.allow_unsound_legacy_fdr,
                      "run the legacy failures-divergences algorithm despite "
                      "its unsoundness");
  check_cmd->add_flag("--counterexample", check.counterexample,
                      "report a violating trace on failure");
  check_cmd->add_option("--metrics", check.metrics_format,
                        "append exploration metrics")
      ->check(CLI::IsMember({"json", "csv"}));
  check_cmd->add_flag("--oracle", check.oracle,
                      "cross-check the verdict against the brute-force "
                      "semantics (small inputs only)");
  check_cmd->add_option("--tau", check.tau_name, "label of the internal action")
      ->capture_default_str();
  check_cmd->add_option("spec", check.spec_path, "specification .aut file")
      ->required();
  check_cmd->add_option("impl", check.impl_path, "implementation .aut file")
      ->required();

  BenchOptions bench;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "benchmark sweeps over generated families");
  CLI::App* ladder_cmd = bench_cmd->add_subcommand(
      "ladder", "self-refinement of the n-state, k-action ladder family");
  ladder_cmd->add_option("--n-range", bench.n_range, "N or A:B:STEP")->required();
  ladder_cmd->add_option("--k-range", bench.k_range, "N or A:B:STEP")->required();
  ladder_cmd->add_option("--relation", bench.relation, "refinement semantics")
      ->check(CLI::IsMember({"trace", "stable-failures", "failures-divergences"}))
      ->capture_default_str();
  ladder_cmd->add_option("--strategy", bench.strategy, "exploration order")
      ->check(CLI::IsMember({"df", "bf"}))
      ->capture_default_str();
  ladder_cmd->add_option("--variant", bench.variant, "algorithm family")
      ->check(CLI::IsMember({"improved", "legacy"}))
      ->capture_default_str();
  ladder_cmd->add_option("--node-budget", bench.node_budget,
                         "abort a cell after this many worklist pushes");
  bench_cmd->require_subcommand(1);

  struct GenOptions {
    StateIndex n = 2;
    std::size_t k = 1;
    RandomLtsParams random;
    std::string output;
  } gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "emit generated .aut fixtures");
  CLI::App* gen_ladder_cmd = gen_cmd->add_subcommand("ladder", "the ladder family");
  gen_ladder_cmd->add_option("--n", gen.n, "number of states")->required();
  gen_ladder_cmd->add_option("--k", gen.k, "actions per rung")->required();
  gen_ladder_cmd->add_option("-o,--output", gen.output, "output file");
  CLI::App* gen_random_cmd =
      gen_cmd->add_subcommand("random", "a seeded random system");
  gen_random_cmd->add_option("--states", gen.random.num_states, "state count")
      ->required();
  gen_random_cmd->add_option("--actions", gen.random.num_actions,
                             "visible action count")
      ->required();
  gen_random_cmd->add_option("--density", gen.random.transition_density,
                             "visible transition density in [0,1]");
  gen_random_cmd->add_option("--tau-density", gen.random.tau_density,
                             "tau transition density in [0,1]");
  gen_random_cmd->add_option("--seed", gen.random.seed, "generator seed");
  gen_random_cmd->add_option("-o,--output", gen.output, "output file");
  gen_cmd->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check_cmd->parsed()) {
      return run_check_command(check);
    }
    if (bench_cmd->parsed()) {
      return run_bench_command(bench);
    }
    if (gen_cmd->parsed()) {
      Lts lts = gen_ladder_cmd->parsed() ? gen_ladder(gen.n, gen.k)
                                         : gen_random(gen.random);
      emit_lts(lts, gen.output);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
