// Times the serial and threaded step paths on one scenario and checks that
// they produce identical trajectories. On a single hardware thread the
// speedup is ~1x; the point of the comparison is the identity check plus a
// per-step cost number.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "pdrsim/engine.hpp"
#include "pdrsim/scenario.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace pdrsim;
using clock_type = std::chrono::steady_clock;

namespace {

double run_timed(const RunSpec& spec, StepMode mode, int repeats, Trajectory& out) {
  double best_ms = 1e300;
  for (int r = 0; r < repeats; ++r) {
    auto t0 = clock_type::now();
    out = run(spec, mode);
    auto t1 = clock_type::now();
    double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    if (ms < best_ms) best_ms = ms;
  }
  return best_ms;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs threaded step benchmark"};
  int population = 20000, n_pois = 400, horizon = 61, repeats = 3;
  std::uint64_t seed = 42;
  std::string model_name = "logit";
  app.add_option("--population", population)->check(CLI::PositiveNumber);
  app.add_option("--pois", n_pois)->check(CLI::PositiveNumber);
  app.add_option("--horizon", horizon)->check(CLI::PositiveNumber);
  app.add_option("--repeats", repeats)->check(CLI::PositiveNumber);
  app.add_option("--seed", seed);
  app.add_option("--model", model_name);
  CLI11_PARSE(app, argc, argv);

  try {
    ScenarioConfig cfg = default_toy_config();
    cfg.population = population;
    cfg.n_pois = n_pois;
    cfg.seed = seed;
    cfg.horizon = horizon;
    // keep density comparable to the 1000-agent toy so neighbor lists stay
    // realistic as population grows
    cfg.disc_radius_km = std::sqrt(population / 1000.0);
    Scenario sc = build_scenario(cfg);
    DecisionModel model = parse_model_shorthand(model_name);
    RunSpec spec{&sc, model, seed, horizon};

#ifdef _OPENMP
    int threads = omp_get_max_threads();
#else
    int threads = 1;
#endif
    std::cout << "population " << population << ", POIs " << n_pois << ", horizon " << horizon
              << ", model " << model_name << ", threads " << threads << "\n";

    Trajectory serial_tr, parallel_tr;
    double serial_ms = run_timed(spec, StepMode::Serial, repeats, serial_tr);
    double parallel_ms = run_timed(spec, StepMode::Parallel, repeats, parallel_tr);

    bool identical = trajectory_csv(serial_tr) == trajectory_csv(parallel_tr);
    std::cout << "mode      total_ms   ms_per_step\n";
    std::cout << "serial    " << serial_ms << "   " << serial_ms / horizon << "\n";
    std::cout << "parallel  " << parallel_ms << "   " << parallel_ms / horizon << "\n";
    std::cout << "speedup   " << serial_ms / parallel_ms << "x\n";
    std::cout << "trajectories identical: " << (identical ? "yes" : "NO") << "\n";
    return identical ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
