#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pdrsim/decision.hpp"
#include "pdrsim/scenario.hpp"

namespace pdrsim {

nlohmann::json model_to_json(const DecisionModel& m);
DecisionModel model_from_json(const nlohmann::json& j);

struct ExperimentGrid {
  std::vector<DecisionModel> models;
  std::vector<int> populations;
  int n_seeds = 5;
  int horizon = 61;
  std::uint64_t base_seed = 42;
  ScenarioConfig scenario_template;  // population and seed overwritten per cell
};

// the 8 default models x populations 100..5000 step 100 x 5 seeds = 2000 cells
ExperimentGrid default_grid();

nlohmann::json grid_to_json(const ExperimentGrid& grid);

struct SweepReport {
  std::size_t total = 0;
  std::size_t executed = 0;
  std::size_t skipped = 0;
  std::vector<std::pair<std::string, std::string>> failures;  // cell key, error
};

// Runs missing cells into out_dir as results/<model>/<population>/<seed>.csv
// plus manifest.json. Cells already on disk under a matching config hash are
// skipped; a manifest with a different hash raises StaleResultsError. Output
// bytes are independent of parallelism. The per-cell run seed is
// mix(base_seed, population, seed_index), shared by all models of the cell
// so their scenario and day-0 state coincide.
SweepReport run_grid(const ExperimentGrid& grid, int parallelism,
                     const std::filesystem::path& out_dir, bool dry_run = false);

// results path of one cell
std::filesystem::path cell_path(const std::filesystem::path& out_dir, const std::string& model,
                                int population, int seed_index);

}  // namespace pdrsim
