// Command-line surface: scenario generation, single runs, sweeps, analysis.
// All randomness flows from explicit seeds; identical invocations produce
// identical bytes (writes are atomic, so failures leave no partial files).

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pdrsim/analysis.hpp"
#include "pdrsim/engine.hpp"
#include "pdrsim/io.hpp"
#include "pdrsim/scenario.hpp"
#include "pdrsim/sweep.hpp"

namespace fs = std::filesystem;
using namespace pdrsim;

namespace {

nlohmann::json load_config_json(const std::string& path) {
  try {
    return nlohmann::json::parse(io::read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

ScenarioConfig resolve_config(nlohmann::json j, const std::vector<std::string>& overrides) {
  for (const auto& ov : overrides) apply_override(j, ov);
  return config_from_json(j);
}

void write_scenario_files(const Scenario& sc, const fs::path& out_dir) {
  io::write_file_atomic(out_dir / "locations.csv", locations_csv(sc.net));
  io::write_file_atomic(out_dir / "scenario.json", config_to_json(sc.cfg).dump(2) + "\n");
}

int cmd_toy(int population, std::uint64_t seed, const std::string& out,
            const std::vector<std::string>& overrides) {
  nlohmann::json j = config_to_json(default_toy_config());
  j["population"] = population;
  j["seed"] = seed;
  ScenarioConfig cfg = resolve_config(std::move(j), overrides);
  write_scenario_files(build_scenario(cfg), out);
  std::cout << "wrote " << out << "/locations.csv and scenario.json ("
            << cfg.population << " homes, " << cfg.n_pois << " POIs)\n";
  return 0;
}

int cmd_run(const std::string& config_path, int toy_population, const std::string& model_name,
            const std::string& model_json_path, std::uint64_t seed, bool seed_given,
            const std::string& out, const std::string& agents_out, bool parallel,
            const std::string& format, const std::vector<std::string>& overrides) {
  nlohmann::json j = config_path.empty() ? config_to_json(default_toy_config())
                                         : load_config_json(config_path);
  if (toy_population > 0) j["population"] = toy_population;
  ScenarioConfig cfg = resolve_config(std::move(j), overrides);
  if (seed_given) cfg.seed = seed;

  DecisionModel model = model_json_path.empty()
                            ? parse_model_shorthand(model_name)
                            : model_from_json(load_config_json(model_json_path));

  Scenario sc = build_scenario(cfg);
  RunSpec spec{&sc, model, cfg.seed, cfg.horizon};
  Trajectory tr = run(spec, parallel ? StepMode::Parallel : StepMode::Serial,
                      !agents_out.empty());
  io::write_file_atomic(out, format == "json" ? trajectory_json_str(tr) : trajectory_csv(tr));
  if (!agents_out.empty()) io::write_file_atomic(agents_out, agent_states_csv(tr));
  std::cout << "wrote " << out << " (" << tr.rows.size() << " rows, model "
            << canonical_model_name(model) << ", seed " << cfg.seed << ")\n";
  return 0;
}

int cmd_sweep(const std::string& out, int parallelism, bool dry_run,
              const std::vector<int>& populations, int n_seeds, int horizon,
              std::uint64_t base_seed, const std::vector<std::string>& model_names,
              const std::vector<std::string>& overrides) {
  ExperimentGrid grid = default_grid();
  if (!populations.empty()) grid.populations = populations;
  if (!model_names.empty()) {
    grid.models.clear();
    for (const auto& name : model_names) grid.models.push_back(parse_model_shorthand(name));
  }
  grid.n_seeds = n_seeds;
  grid.horizon = horizon;
  grid.base_seed = base_seed;
  if (!overrides.empty()) {
    nlohmann::json j = config_to_json(grid.scenario_template);
    for (const auto& ov : overrides) apply_override(j, ov);
    grid.scenario_template = config_from_json(j);
  }
  SweepReport report = run_grid(grid, parallelism, out, dry_run);
  if (dry_run) {
    std::cout << report.total << " cells\n";
    return 0;
  }
  std::cout << "executed " << report.executed << ", skipped " << report.skipped << " of "
            << report.total << " cells -> " << out << "\n";
  for (const auto& [key, what] : report.failures)
    std::cerr << "failed " << key << ": " << what << "\n";
  return report.failures.empty() ? 0 : 1;
}

int cmd_analyze(const std::string& results, const std::string& policy_name,
                const std::string& out, const std::string& format) {
  ArPolicy policy = policy_name == "per-model-across-seeds"
                        ? ArPolicy::PerModelAcrossSeeds
                        : ArPolicy::PerThresholdAcrossPopulations;
  ResultsStore store = ResultsStore::discover(results);
  ARGrid grid = ar_grid(store, policy);
  double median = ct_classify(grid);

  fs::path out_dir(out);
  if (format == "json") {
    io::write_file_atomic(out_dir / "ar_grid.json", ar_grid_json(grid).dump(2) + "\n");
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& m : store.models())
      for (int p : store.populations(m)) {
        Curve sd = seed_variability(store, m, p);
        for (std::size_t t = 0; t < sd.size(); ++t)
          rows.push_back({{"model", m}, {"population", p}, {"t", t}, {"std", sd[t]}});
      }
    io::write_file_atomic(out_dir / "variability.json",
                          nlohmann::json{{"rows", rows}}.dump(2) + "\n");
  } else {
    io::write_file_atomic(out_dir / "ar_grid.csv", ar_grid_csv(grid));
    io::write_file_atomic(out_dir / "variability.csv", variability_csv(store));
  }
  io::write_file_atomic(out_dir / "ct_report.md", ct_report_markdown(grid, median));
  std::size_t flagged = 0;
  for (const auto& c : grid.cells) flagged += c.significant ? 1 : 0;
  std::cout << "analyzed " << grid.cells.size() << " cells, " << flagged
            << " flagged (median |AR| " << io::fmt_double(median) << ") -> " << out << "\n";
  return 0;
}

int cmd_county(const std::string& name, const std::string& out, const std::string& model_name,
               std::uint64_t seed, bool seed_given, const std::vector<std::string>& overrides) {
  nlohmann::json j = config_to_json(county_config(name));
  ScenarioConfig cfg = resolve_config(std::move(j), overrides);
  if (seed_given) cfg.seed = seed;
  Scenario sc = build_scenario(cfg);
  write_scenario_files(sc, out);
  std::cout << "wrote " << out << "/locations.csv and scenario.json for " << cfg.name << " ("
            << cfg.population << " homes, " << cfg.n_pois << " POIs)\n";
  if (!model_name.empty()) {
    DecisionModel model = parse_model_shorthand(model_name);
    RunSpec spec{&sc, model, cfg.seed, cfg.horizon};
    Trajectory tr = run(spec);
    io::write_file_atomic(fs::path(out) / "trajectory.csv", trajectory_csv(tr));
    std::cout << "wrote " << out << "/trajectory.csv (" << tr.rows.size() << " rows)\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"post-disaster return simulator"};
  app.require_subcommand(1);

  // toy
  auto* toy = app.add_subcommand("toy", "generate a synthetic disc scenario");
  int toy_pop = 1000;
  std::uint64_t toy_seed = 42;
  std::string toy_out = "toy_scenario";
  std::vector<std::string> toy_set;
  toy->add_option("--population", toy_pop, "number of households")->check(CLI::PositiveNumber);
  toy->add_option("--seed", toy_seed, "placement seed");
  toy->add_option("--out", toy_out, "output directory");
  toy->add_option("--set", toy_set, "config override key=value (repeatable)");

  // run
  auto* runc = app.add_subcommand("run", "run one scenario under one decision model");
  std::string run_config, run_model = "logit", run_model_json, run_out = "trajectory.csv";
  std::string run_agents_out, run_format = "csv";
  int run_toy_pop = 0;
  std::uint64_t run_seed = 0;
  bool run_parallel = false;
  std::vector<std::string> run_set;
  runc->add_option("--config", run_config, "scenario config JSON");
  runc->add_option("--toy-population", run_toy_pop, "use the toy scenario at this population")
      ->check(CLI::PositiveNumber);
  runc->add_option("--model", run_model,
                   "model name: logit, logit_cutoff, homog:<delta>, hetero, individual, "
                   "timevarying");
  runc->add_option("--model-json", run_model_json, "model description JSON (overrides --model)");
  auto* run_seed_opt = runc->add_option("--seed", run_seed, "run seed (default: config seed)");
  runc->add_option("--out", run_out, "trajectory output path");
  runc->add_option("--agents-out", run_agents_out, "also write per-agent return states here");
  runc->add_flag("--parallel", run_parallel, "use the threaded step path");
  runc->add_option("--format", run_format, "trajectory format")
      ->check(CLI::IsMember({"csv", "json"}));
  runc->add_option("--set", run_set, "config override key=value (repeatable)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run the model x population x seed grid");
  std::string sweep_out = "results";
  int sweep_par = 8, sweep_seeds = 5, sweep_horizon = 61;
  std::uint64_t sweep_base = 42;
  bool sweep_dry = false;
  std::vector<int> sweep_pops;
  std::vector<std::string> sweep_models, sweep_set;
  sweep->add_option("--out", sweep_out, "results directory");
  sweep->add_option("--parallelism", sweep_par, "worker threads")->check(CLI::PositiveNumber);
  sweep->add_flag("--dry-run", sweep_dry, "print the cell count and exit");
  sweep->add_option("--populations", sweep_pops, "population sizes (default 100..5000 step 100)");
  sweep->add_option("--seeds", sweep_seeds, "seeds per cell")->check(CLI::PositiveNumber);
  sweep->add_option("--horizon", sweep_horizon, "days per run")
      ->check(CLI::NonNegativeNumber);
  sweep->add_option("--base-seed", sweep_base, "seed mixed into every cell");
  sweep->add_option("--models", sweep_models, "model names (default: the eight standard models)");
  sweep->add_option("--set", sweep_set, "scenario override key=value (repeatable)");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "summarize a results tree");
  std::string an_results = "results", an_policy = "per-threshold-across-populations";
  std::string an_out = "analysis", an_format = "csv";
  analyze->add_option("--results", an_results, "results directory from sweep");
  analyze->add_option("--policy", an_policy, "reference-curve policy")
      ->check(CLI::IsMember({"per-threshold-across-populations", "per-model-across-seeds"}));
  analyze->add_option("--out", an_out, "analysis output directory");
  analyze->add_option("--format", an_format, "tabular output format")
      ->check(CLI::IsMember({"csv", "json"}));

  // county
  auto* county = app.add_subcommand("county", "generate a county-scale scenario");
  std::string county_name, county_out = "county_scenario", county_model;
  std::uint64_t county_seed = 0;
  std::vector<std::string> county_set;
  county->add_option("--name", county_name, "county name (e.g. Harris, Fort Bend)")->required();
  county->add_option("--out", county_out, "output directory");
  county->add_option("--model", county_model, "also run this model and write trajectory.csv");
  auto* county_seed_opt = county->add_option("--seed", county_seed, "seed override");
  county->add_option("--set", county_set, "config override key=value (repeatable)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (toy->parsed()) return cmd_toy(toy_pop, toy_seed, toy_out, toy_set);
    if (runc->parsed())
      return cmd_run(run_config, run_toy_pop, run_model, run_model_json, run_seed,
                     run_seed_opt->count() > 0, run_out, run_agents_out, run_parallel, run_format,
                     run_set);
    if (sweep->parsed())
      return cmd_sweep(sweep_out, sweep_par, sweep_dry, sweep_pops, sweep_seeds, sweep_horizon,
                       sweep_base, sweep_models, sweep_set);
    if (analyze->parsed()) return cmd_analyze(an_results, an_policy, an_out, an_format);
    if (county->parsed())
      return cmd_county(county_name, county_out, county_model, county_seed,
                        county_seed_opt->count() > 0, county_set);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
