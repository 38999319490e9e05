#include "pdrsim/sweep.hpp"

#include <algorithm>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pdrsim/engine.hpp"
#include "pdrsim/io.hpp"

namespace pdrsim {

nlohmann::json model_to_json(const DecisionModel& m) {
  const auto& th = m.thresholds;
  switch (m.type) {
    case DecisionModel::Type::Logit:
      return {{"type", "logit"}, {"cutoff", m.logit_cutoff}};
    case DecisionModel::Type::ThresholdHomog:
      return {{"type", "threshold_homog"}, {"delta", th.delta}};
    case DecisionModel::Type::ThresholdHetero:
      return {{"type", "threshold_hetero"},
              {"delta_h", th.fixed.dh},
              {"delta_s", th.fixed.ds},
              {"delta_p", th.fixed.dp}};
    case DecisionModel::Type::ThresholdIndividual:
      return {{"type", "threshold_individual"},
              {"mu_h", th.mu_h},
              {"mu_s", th.mu_s},
              {"mu_p", th.mu_p},
              {"sigma", th.sigma}};
    case DecisionModel::Type::ThresholdTimeVarying: {
      auto knots = nlohmann::json::array();
      for (const auto& k : th.schedule.knots) knots.push_back({k.t, k.dh, k.ds, k.dp});
      return {{"type", "threshold_timevarying"}, {"knots", knots}};
    }
  }
  throw ConfigError("model_to_json: unknown model type");
}

DecisionModel model_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type"))
    throw ConfigError("decision model: missing 'type'");
  std::string type;
  DecisionModel m;
  try {
    type = j.at("type").get<std::string>();
    if (type == "logit") {
      m.type = DecisionModel::Type::Logit;
      if (j.contains("cutoff")) m.logit_cutoff = j.at("cutoff").get<bool>();
    } else if (type == "threshold_homog") {
      m.type = DecisionModel::Type::ThresholdHomog;
      m.thresholds.variant = ThresholdConfig::Variant::Homogeneous;
      if (j.contains("delta")) m.thresholds.delta = j.at("delta").get<double>();
    } else if (type == "threshold_hetero") {
      m.type = DecisionModel::Type::ThresholdHetero;
      m.thresholds.variant = ThresholdConfig::Variant::Heterogeneous;
      if (j.contains("delta_h")) m.thresholds.fixed.dh = j.at("delta_h").get<double>();
      if (j.contains("delta_s")) m.thresholds.fixed.ds = j.at("delta_s").get<double>();
      if (j.contains("delta_p")) m.thresholds.fixed.dp = j.at("delta_p").get<double>();
    } else if (type == "threshold_individual") {
      m.type = DecisionModel::Type::ThresholdIndividual;
      m.thresholds.variant = ThresholdConfig::Variant::Individual;
      if (j.contains("mu_h")) m.thresholds.mu_h = j.at("mu_h").get<double>();
      if (j.contains("mu_s")) m.thresholds.mu_s = j.at("mu_s").get<double>();
      if (j.contains("mu_p")) m.thresholds.mu_p = j.at("mu_p").get<double>();
      if (j.contains("sigma")) m.thresholds.sigma = j.at("sigma").get<double>();
    } else if (type == "threshold_timevarying") {
      m.type = DecisionModel::Type::ThresholdTimeVarying;
      m.thresholds.variant = ThresholdConfig::Variant::TimeVarying;
      if (j.contains("knots")) {
        m.thresholds.schedule.knots.clear();
        for (const auto& k : j.at("knots"))
          m.thresholds.schedule.knots.push_back({k.at(0).get<double>(), k.at(1).get<double>(),
                                                 k.at(2).get<double>(), k.at(3).get<double>()});
      } else {
        m.thresholds.schedule = default_timevarying_schedule();
      }
    } else {
      throw ConfigError("decision model: unknown type '" + type + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("decision model: ") + e.what());
  }
  return m;
}

ExperimentGrid default_grid() {
  ExperimentGrid grid;
  for (const char* name : {"logit", "homog:0.6", "homog:0.7", "homog:0.8", "homog:0.9",
                           "hetero", "individual", "timevarying"})
    grid.models.push_back(parse_model_shorthand(name));
  for (int p = 100; p <= 5000; p += 100) grid.populations.push_back(p);
  grid.scenario_template = default_toy_config();
  return grid;
}

nlohmann::json grid_to_json(const ExperimentGrid& grid) {
  auto models = nlohmann::json::array();
  for (const auto& m : grid.models) models.push_back(model_to_json(m));
  return {{"models", models},
          {"populations", grid.populations},
          {"n_seeds", grid.n_seeds},
          {"horizon", grid.horizon},
          {"base_seed", grid.base_seed},
          {"scenario", config_to_json(grid.scenario_template)}};
}

std::filesystem::path cell_path(const std::filesystem::path& out_dir, const std::string& model,
                                int population, int seed_index) {
  return out_dir / model / std::to_string(population) / (std::to_string(seed_index) + ".csv");
}

namespace {

std::string cell_key_str(const std::string& model, int population, int seed_index) {
  return model + "/" + std::to_string(population) + "/" + std::to_string(seed_index);
}

bool file_row_count_ok(const std::filesystem::path& p, int horizon) {
  std::error_code ec;
  if (!std::filesystem::exists(p, ec)) return false;
  std::string text;
  try {
    text = io::read_file(p);
  } catch (const IoError&) {
    return false;
  }
  long long lines = std::count(text.begin(), text.end(), '\n');
  return lines == horizon + 2;  // header + t=0..horizon
}

}  // namespace

SweepReport run_grid(const ExperimentGrid& grid, int parallelism,
                     const std::filesystem::path& out_dir, bool dry_run) {
  if (grid.models.empty() || grid.populations.empty() || grid.n_seeds < 1)
    throw ConfigError("run_grid: empty grid axis");
  if (parallelism < 1) throw ConfigError("run_grid: parallelism must be >= 1");

  std::vector<std::string> model_names;
  for (const auto& m : grid.models) model_names.push_back(canonical_model_name(m));
  {
    std::set<std::string> uniq(model_names.begin(), model_names.end());
    if (uniq.size() != model_names.size())
      throw ConfigError("run_grid: duplicate model identities in grid");
  }

  nlohmann::json grid_json = grid_to_json(grid);
  std::string hash_hex;
  {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(config_hash(grid_json)));
    hash_hex = buf;
  }

  SweepReport report;
  report.total = model_names.size() * grid.populations.size() * static_cast<std::size_t>(grid.n_seeds);
  if (dry_run) return report;

  std::set<std::string> complete;
  auto manifest_path = out_dir / "manifest.json";
  if (std::filesystem::exists(manifest_path)) {
    nlohmann::json manifest;
    try {
      manifest = nlohmann::json::parse(io::read_file(manifest_path));
    } catch (const std::exception& e) {
      throw ValidationError("manifest.json is unreadable: " + std::string(e.what()));
    }
    if (!manifest.contains("config_hash") || manifest.at("config_hash").get<std::string>() != hash_hex)
      throw StaleResultsError("results at " + out_dir.string() +
                              " were produced under a different configuration");
    for (const auto& k : manifest.at("complete")) complete.insert(k.get<std::string>());
  }

  struct Group {
    int population;
    int seed_index;
    std::vector<std::size_t> missing_models;
  };
  std::vector<Group> groups;
  for (int p : grid.populations) {
    for (int s = 0; s < grid.n_seeds; ++s) {
      Group g{p, s, {}};
      for (std::size_t mi = 0; mi < grid.models.size(); ++mi) {
        auto path = cell_path(out_dir, model_names[mi], p, s);
        bool done = complete.count(cell_key_str(model_names[mi], p, s)) > 0 &&
                    std::filesystem::exists(path);
        if (!done && file_row_count_ok(path, grid.horizon)) done = true;  // manifest lost, file intact
        if (done)
          ++report.skipped;
        else
          g.missing_models.push_back(mi);
      }
      if (!g.missing_models.empty()) groups.push_back(std::move(g));
    }
  }

  const int n_groups = static_cast<int>(groups.size());
  std::vector<std::vector<std::string>> group_done(groups.size());
  std::vector<std::vector<std::pair<std::string, std::string>>> group_failed(groups.size());

#ifdef _OPENMP
  int threads = std::min(parallelism, std::max(1, n_groups));
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
#endif
  for (int gi = 0; gi < n_groups; ++gi) {
    const Group& g = groups[gi];
    std::uint64_t cell_seed = rng::mix(grid.base_seed, static_cast<std::uint64_t>(g.population),
                                       static_cast<std::uint64_t>(g.seed_index));
    Scenario sc;
    InitialState init;
    bool scenario_ok = true;
    try {
      ScenarioConfig cfg = grid.scenario_template;
      cfg.population = g.population;
      cfg.seed = cell_seed;
      cfg.horizon = grid.horizon;
      sc = build_scenario(cfg);
      init = make_initial_state(sc, cell_seed);
    } catch (const std::exception& e) {
      scenario_ok = false;
      for (std::size_t mi : g.missing_models)
        group_failed[gi].push_back(
            {cell_key_str(model_names[mi], g.population, g.seed_index), e.what()});
    }
    if (!scenario_ok) continue;
    for (std::size_t mi : g.missing_models) {
      std::string key = cell_key_str(model_names[mi], g.population, g.seed_index);
      try {
        RunSpec spec{&sc, grid.models[mi], cell_seed, grid.horizon};
        Trajectory tr = run(spec, StepMode::Serial, false, &init);
        io::write_file_atomic(cell_path(out_dir, model_names[mi], g.population, g.seed_index),
                              trajectory_csv(tr));
        group_done[gi].push_back(key);
      } catch (const std::exception& e) {
        group_failed[gi].push_back({key, e.what()});
      }
    }
  }

  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    for (auto& k : group_done[gi]) {
      complete.insert(k);
      ++report.executed;
    }
    for (auto& f : group_failed[gi]) report.failures.push_back(std::move(f));
  }
  std::sort(report.failures.begin(), report.failures.end());

  nlohmann::json manifest;
  manifest["config_hash"] = hash_hex;
  manifest["grid"] = grid_json;
  manifest["complete"] = std::vector<std::string>(complete.begin(), complete.end());
  io::write_file_atomic(manifest_path, manifest.dump(2) + "\n");
  return report;
}

}  // namespace pdrsim
