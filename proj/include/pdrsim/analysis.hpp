#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "pdrsim/errors.hpp"

namespace pdrsim {

// A per-day time series, index = day.
using Curve = std::vector<double>;

// Element-wise mean of equally long curves. AlignmentError if lengths differ
// or the set is empty.
Curve mean_curve(const std::vector<Curve>& curves);

// Time-averaged gap between a selected curve and a reference curve:
// mean over days of (selected[t] - reference[t]). AlignmentError on length
// mismatch or empty curves.
double average_residual(const Curve& selected, const Curve& reference);

// How the reference curve for a cell is formed.
//   PerThresholdAcrossPopulations: reference = mean over every (population,
//     seed) curve of the same model; selected = seed-mean curve at one
//     population. Scans one model's response across population scale.
//   PerModelAcrossSeeds: reference = cross-model mean of the per-model
//     seed-mean curves at the same population; selected = one model's
//     seed-mean curve there. Contrasts models at fixed scale.
enum class ArPolicy { PerThresholdAcrossPopulations, PerModelAcrossSeeds };

struct ARCell {
  std::string model;
  int population = 0;
  double ar = 0.0;
  bool significant = false;  // filled by ct_classify
};

struct ARGrid {
  ArPolicy policy = ArPolicy::PerThresholdAcrossPopulations;
  std::vector<ARCell> cells;  // sorted by (model, population)
};

// Lazy view over a sweep output tree (results/<model>/<population>/<seed>.csv).
class ResultsStore {
 public:
  // Scans root for the three-level layout. NotFoundError if root does not
  // exist or holds no result files. Names and numbers come back sorted.
  static ResultsStore discover(const std::filesystem::path& root);

  const std::vector<std::string>& models() const { return models_; }
  const std::vector<int>& populations(const std::string& model) const;
  const std::vector<int>& seeds(const std::string& model, int population) const;

  // mean_q_h column of one cell's trajectory, indexed by day.
  // NotFoundError if the cell is absent, ValidationError on a malformed file.
  Curve mean_qh(const std::string& model, int population, int seed) const;

 private:
  std::filesystem::path root_;
  std::vector<std::string> models_;
  std::map<std::string, std::vector<int>> pops_;
  std::map<std::pair<std::string, int>, std::vector<int>> seeds_;
};

// Average residual for every (model, population) cell under the given policy.
// The store must hold the full cross product of models x populations with
// identical seed sets; IncompleteGridError names what is missing.
ARGrid ar_grid(const ResultsStore& store, ArPolicy policy);

// Marks cells significant iff |ar| strictly exceeds the median of |ar| over
// the whole grid (even count: mean of the two middle values). Ties with the
// median stay minor. Returns the median.
double ct_classify(ARGrid& grid);

// Per-day sample standard deviation (n-1 denominator) of mean_q_h across
// seeds for one (model, population) cell. InsufficientDataError with fewer
// than two seeds.
Curve seed_variability(const ResultsStore& store, const std::string& model, int population);

// Largest per-day std over a cell, convenience for scale comparisons.
double max_seed_variability(const ResultsStore& store, const std::string& model, int population);

// model_or_threshold,population,ar,flag rows; flag is significant|minor.
std::string ar_grid_csv(const ARGrid& grid);
nlohmann::json ar_grid_json(const ARGrid& grid);

// model,population,t,std rows over every cell in the store.
std::string variability_csv(const ResultsStore& store);

// Markdown worksheet: flagged cells grouped into contiguous population ranges
// per model, followed by the qualitative-change checklist to fill in per
// group (four attributes of an abrupt transition, two early-warning
// indicators).
std::string ct_report_markdown(const ARGrid& grid, double median_abs_ar);

}  // namespace pdrsim
