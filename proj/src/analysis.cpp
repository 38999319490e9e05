#include "pdrsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pdrsim/io.hpp"

namespace pdrsim {

Curve mean_curve(const std::vector<Curve>& curves) {
  if (curves.empty()) throw AlignmentError("mean_curve: no curves");
  const std::size_t len = curves.front().size();
  if (len == 0) throw AlignmentError("mean_curve: empty curve");
  Curve out(len, 0.0);
  for (const auto& c : curves) {
    if (c.size() != len)
      throw AlignmentError("mean_curve: length mismatch (" + std::to_string(c.size()) + " vs " +
                           std::to_string(len) + ")");
    for (std::size_t t = 0; t < len; ++t) out[t] += c[t];
  }
  for (auto& v : out) v /= static_cast<double>(curves.size());
  return out;
}

double average_residual(const Curve& selected, const Curve& reference) {
  if (selected.empty()) throw AlignmentError("average_residual: empty curve");
  if (selected.size() != reference.size())
    throw AlignmentError("average_residual: length mismatch (" + std::to_string(selected.size()) +
                         " vs " + std::to_string(reference.size()) + ")");
  double acc = 0.0;
  for (std::size_t t = 0; t < selected.size(); ++t) acc += selected[t] - reference[t];
  return acc / static_cast<double>(selected.size());
}

ResultsStore ResultsStore::discover(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw NotFoundError("no results directory at " + root.string());
  ResultsStore store;
  store.root_ = root;
  for (const auto& mdir : fs::directory_iterator(root)) {
    if (!mdir.is_directory()) continue;
    std::string model = mdir.path().filename().string();
    std::vector<int> pops;
    for (const auto& pdir : fs::directory_iterator(mdir.path())) {
      if (!pdir.is_directory()) continue;
      int population;
      try {
        population = io::parse_int(pdir.path().filename().string());
      } catch (const ValidationError&) {
        continue;
      }
      std::vector<int> seeds;
      for (const auto& f : fs::directory_iterator(pdir.path())) {
        if (!f.is_regular_file() || f.path().extension() != ".csv") continue;
        try {
          seeds.push_back(io::parse_int(f.path().stem().string()));
        } catch (const ValidationError&) {
        }
      }
      if (seeds.empty()) continue;
      std::sort(seeds.begin(), seeds.end());
      store.seeds_[{model, population}] = std::move(seeds);
      pops.push_back(population);
    }
    if (pops.empty()) continue;
    std::sort(pops.begin(), pops.end());
    store.pops_[model] = std::move(pops);
    store.models_.push_back(std::move(model));
  }
  if (store.models_.empty()) throw NotFoundError("no result files under " + root.string());
  std::sort(store.models_.begin(), store.models_.end());
  return store;
}

const std::vector<int>& ResultsStore::populations(const std::string& model) const {
  auto it = pops_.find(model);
  if (it == pops_.end()) throw NotFoundError("no results for model " + model);
  return it->second;
}

const std::vector<int>& ResultsStore::seeds(const std::string& model, int population) const {
  auto it = seeds_.find({model, population});
  if (it == seeds_.end())
    throw NotFoundError("no results for " + model + "/" + std::to_string(population));
  return it->second;
}

Curve ResultsStore::mean_qh(const std::string& model, int population, int seed) const {
  auto path = root_ / model / std::to_string(population) / (std::to_string(seed) + ".csv");
  std::vector<std::vector<std::string>> rows;
  try {
    rows = io::read_csv(path);
  } catch (const IoError& e) {
    throw NotFoundError(e.what());
  }
  if (rows.empty() || rows[0].size() < 2 || rows[0][1] != "mean_q_h")
    throw ValidationError(path.string() + ": expected trajectory header");
  Curve out;
  out.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() < 2) throw ValidationError(path.string() + ": short row " + std::to_string(r));
    out.push_back(io::parse_double(rows[r][1]));
  }
  if (out.empty()) throw ValidationError(path.string() + ": no data rows");
  return out;
}

namespace {

// Seed-mean curve of one cell.
Curve cell_mean(const ResultsStore& store, const std::string& model, int population) {
  std::vector<Curve> curves;
  for (int s : store.seeds(model, population)) curves.push_back(store.mean_qh(model, population, s));
  return mean_curve(curves);
}

void require_full_grid(const ResultsStore& store) {
  const auto& models = store.models();
  const auto& pops0 = store.populations(models.front());
  const auto& seeds0 = store.seeds(models.front(), pops0.front());
  std::vector<std::string> missing;
  for (const auto& m : models) {
    if (store.populations(m) != pops0) {
      missing.push_back(m + ": population set differs from " + models.front());
      continue;
    }
    for (int p : pops0)
      if (store.seeds(m, p) != seeds0)
        missing.push_back(m + "/" + std::to_string(p) + ": seed set differs");
  }
  if (!missing.empty()) {
    std::string detail;
    for (const auto& s : missing) detail += "\n  " + s;
    throw IncompleteGridError("results tree is not a full grid:" + detail);
  }
}

}  // namespace

ARGrid ar_grid(const ResultsStore& store, ArPolicy policy) {
  require_full_grid(store);
  const auto& models = store.models();
  const auto& pops = store.populations(models.front());

  // sel[m][p] = seed-mean curve of that cell.
  std::map<std::string, std::map<int, Curve>> sel;
  for (const auto& m : models)
    for (int p : pops) sel[m][p] = cell_mean(store, m, p);

  ARGrid grid;
  grid.policy = policy;
  if (policy == ArPolicy::PerModelAcrossSeeds) {
    for (int p : pops) {
      std::vector<Curve> at_p;
      for (const auto& m : models) at_p.push_back(sel[m][p]);
      Curve ref = mean_curve(at_p);
      for (const auto& m : models)
        grid.cells.push_back({m, p, average_residual(sel[m][p], ref), false});
    }
  } else {
    for (const auto& m : models) {
      std::vector<Curve> all;
      for (int p : pops)
        for (int s : store.seeds(m, p)) all.push_back(store.mean_qh(m, p, s));
      Curve ref = mean_curve(all);
      for (int p : pops) grid.cells.push_back({m, p, average_residual(sel[m][p], ref), false});
    }
  }
  std::sort(grid.cells.begin(), grid.cells.end(), [](const ARCell& a, const ARCell& b) {
    return a.model != b.model ? a.model < b.model : a.population < b.population;
  });
  return grid;
}

double ct_classify(ARGrid& grid) {
  if (grid.cells.empty()) throw InsufficientDataError("ct_classify: empty grid");
  std::vector<double> mags;
  mags.reserve(grid.cells.size());
  for (const auto& c : grid.cells) mags.push_back(std::fabs(c.ar));
  std::sort(mags.begin(), mags.end());
  const std::size_t n = mags.size();
  double median = (n % 2 == 1) ? mags[n / 2] : 0.5 * (mags[n / 2 - 1] + mags[n / 2]);
  for (auto& c : grid.cells) c.significant = std::fabs(c.ar) > median;
  return median;
}

Curve seed_variability(const ResultsStore& store, const std::string& model, int population) {
  const auto& seeds = store.seeds(model, population);
  if (seeds.size() < 2)
    throw InsufficientDataError("seed_variability needs at least 2 seeds, " + model + "/" +
                                std::to_string(population) + " has " +
                                std::to_string(seeds.size()));
  std::vector<Curve> curves;
  for (int s : seeds) curves.push_back(store.mean_qh(model, population, s));
  Curve mean = mean_curve(curves);
  Curve out(mean.size(), 0.0);
  for (const auto& c : curves)
    for (std::size_t t = 0; t < mean.size(); ++t) {
      double d = c[t] - mean[t];
      out[t] += d * d;
    }
  for (auto& v : out) v = std::sqrt(v / static_cast<double>(curves.size() - 1));
  return out;
}

double max_seed_variability(const ResultsStore& store, const std::string& model, int population) {
  Curve sd = seed_variability(store, model, population);
  return *std::max_element(sd.begin(), sd.end());
}

std::string ar_grid_csv(const ARGrid& grid) {
  std::string out = "model_or_threshold,population,ar,flag\n";
  for (const auto& c : grid.cells) {
    out += c.model;
    out += ',';
    out += std::to_string(c.population);
    out += ',';
    out += io::fmt_double(c.ar);
    out += ',';
    out += c.significant ? "significant" : "minor";
    out += '\n';
  }
  return out;
}

nlohmann::json ar_grid_json(const ARGrid& grid) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : grid.cells)
    cells.push_back({{"model", c.model},
                     {"population", c.population},
                     {"ar", c.ar},
                     {"flag", c.significant ? "significant" : "minor"}});
  const char* policy = grid.policy == ArPolicy::PerModelAcrossSeeds
                           ? "per-model-across-seeds"
                           : "per-threshold-across-populations";
  return {{"policy", policy}, {"cells", cells}};
}

std::string variability_csv(const ResultsStore& store) {
  std::string out = "model,population,t,std\n";
  for (const auto& m : store.models())
    for (int p : store.populations(m)) {
      Curve sd = seed_variability(store, m, p);
      for (std::size_t t = 0; t < sd.size(); ++t) {
        out += m;
        out += ',';
        out += std::to_string(p);
        out += ',';
        out += std::to_string(t);
        out += ',';
        out += io::fmt_double(sd[t]);
        out += '\n';
      }
    }
  return out;
}

std::string ct_report_markdown(const ARGrid& grid, double median_abs_ar) {
  // Group flagged cells of a model into contiguous population ranges.
  struct Range {
    std::string model;
    int lo, hi;
    double max_abs_ar;
  };
  std::vector<Range> ranges;
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    const auto& c = grid.cells[i];
    if (!c.significant) continue;
    if (!ranges.empty() && ranges.back().model == c.model && i > 0 &&
        grid.cells[i - 1].model == c.model && grid.cells[i - 1].significant) {
      ranges.back().hi = c.population;
      ranges.back().max_abs_ar = std::max(ranges.back().max_abs_ar, std::fabs(c.ar));
    } else {
      ranges.push_back({c.model, c.population, c.population, std::fabs(c.ar)});
    }
  }

  std::ostringstream md;
  md << "# Qualitative-change screening worksheet\n\n";
  md << "Cells whose time-averaged deviation from the reference curve exceeds the\n"
     << "grid-wide median magnitude (" << io::fmt_double(median_abs_ar)
     << ") are listed below as candidate\n"
     << "transitions. Flagging is a screen, not a verdict: confirm each candidate\n"
     << "against the checklist before reporting it as a genuine regime change.\n\n";
  if (ranges.empty()) {
    md << "_No cells were flagged._\n";
    return md.str();
  }
  std::string current;
  for (const auto& r : ranges) {
    if (r.model != current) {
      current = r.model;
      md << "## " << r.model << "\n\n";
    }
    md << "### populations " << r.lo << ".." << r.hi << " (max |AR| " << io::fmt_double(r.max_abs_ar)
       << ")\n\n";
    md << "Attributes of an abrupt transition (mark each yes/no with evidence):\n\n"
       << "- [ ] The curve changes character qualitatively, not just in level.\n"
       << "- [ ] The shift completes faster than the system's ordinary relaxation.\n"
       << "- [ ] A narrow band of the control parameter separates the two regimes.\n"
       << "- [ ] The post-shift state is distinctly different from the prior one.\n\n"
       << "Early-warning indicators observed near the candidate:\n\n"
       << "- [ ] Fluctuations stay small relative to the deterministic trend.\n"
       << "- [ ] Recovery from perturbations slows as the candidate is approached.\n\n"
       << "Analyst notes:\n\n"
       << "> _fill in_\n\n";
  }
  return md.str();
}

}  // namespace pdrsim
