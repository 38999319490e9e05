#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdrsim/decision.hpp"
#include "pdrsim/scenario.hpp"

namespace pdrsim {

// Serial and Parallel must produce bit-identical trajectories: all per-element
// arithmetic is the same in both paths, reductions that feed recorded values
// run serially, and every random draw is a pure function of (key, day).
enum class StepMode { Serial, Parallel };

struct RunSpec {
  const Scenario* scenario = nullptr;
  DecisionModel model;
  std::uint64_t seed = 0;
  int horizon = 61;
};

struct TrajectoryRow {
  int t;
  double mean_q_h;
  double mean_q_s;
  double q_p;
  long long returned_count;
};

struct Trajectory {
  std::vector<TrajectoryRow> rows;  // t contiguous from 0
  bool has_agent_rows = false;
  std::vector<std::vector<std::uint8_t>> agent_rows;  // [day][agent], when recorded
};

// Day-0 agent state. Drawn from the run seed, so two models run with a common
// seed on the same scenario share their initial returned set (the coupling
// the dominance and aggregate comparisons rely on). Runs at the same grid
// cell can share one instance instead of redrawing it.
struct InitialState {
  std::uint64_t seed = 0;
  std::vector<std::uint8_t> returned;
  std::vector<std::int32_t> nbr_counts;  // returned home-layer neighbors per agent
  long long total = 0;
};

InitialState make_initial_state(const Scenario& sc, std::uint64_t run_seed);

struct WorldState {
  int t = 0;
  std::vector<std::uint8_t> returned;
  std::vector<std::int32_t> returned_nbrs;
  long long returned_total = 0;
  std::vector<double> q_s;  // per POI
  double q_p = 0.0;
  std::vector<Thresholds> agent_thresholds;  // Individual variant only
  // scratch buffers reused across steps
  std::vector<double> q_s_next;
  std::vector<std::uint8_t> flips;
  std::vector<int> scratch_hits;
};

// validates model and scenario consistency; throws ConfigError before any work
WorldState init_world(const Scenario& sc, const DecisionModel& model, std::uint64_t run_seed,
                      const InitialState* shared = nullptr);

// One day: q_p from the schedule at t+1; each POI's q_s by forward Euler
// against the pre-step q_p; then every still-evacuated agent decides on the
// post-update q_p and q_s and the pre-step neighbor return states. Returns
// are absorbing.
void step(WorldState& w, const Scenario& sc, const DecisionModel& model, std::uint64_t run_seed,
          StepMode mode);

// covariates of `agent` against the current world state (pre-step semantics);
// isolated agents fall back to the population mean return fraction, agents
// with no POI in range to the POI mean
Covariates agent_covariates(const WorldState& w, const Scenario& sc, int agent);

Trajectory run(const RunSpec& spec, StepMode mode = StepMode::Serial,
               bool record_agents = false, const InitialState* shared = nullptr);

// t,mean_q_h,mean_q_s,q_p,returned_count
std::string trajectory_csv(const Trajectory& tr);
std::string trajectory_json_str(const Trajectory& tr);
// t,agent_id,returned (requires record_agents)
std::string agent_states_csv(const Trajectory& tr);

}  // namespace pdrsim
