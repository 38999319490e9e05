#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "pdrsim/engine.hpp"
#include "pdrsim/io.hpp"

using namespace pdrsim;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  auto d = fs::temp_directory_path() / ("pdrsim_engine_" + tag + "_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

// two separated clusters: {0,1,2} with one POI, {3,4} with another; POIs out
// of range of each other so their social degree is zero
Scenario clustered_scenario(const fs::path& dir) {
  std::string csv =
      "node_id,layer,x_or_lon,y_or_lat\n"
      "0,h,0,0\n"
      "1,h,0.5,0\n"
      "2,h,1,0\n"
      "3,h,5,0\n"
      "4,h,5.5,0\n"
      "0,s,0,0.5\n"
      "1,s,5,0.5\n"
      "0,p,0,0\n";
  auto path = dir / "locations.csv";
  io::write_file_atomic(path, csv);
  ScenarioConfig cfg;
  cfg.population = 5;
  cfg.n_pois = 2;
  cfg.locations_file = path.string();
  cfg.synthetic_locations = false;
  cfg.q_s0 = 0.4;
  cfg.schedule = {{0, 0.2}, {1, 0.5}, {2, 0.9}};
  cfg.returned_agents = {0};
  cfg.horizon = 3;
  return build_scenario(cfg);
}

DecisionModel homog_model(double delta) {
  DecisionModel m;
  m.type = DecisionModel::Type::ThresholdHomog;
  m.thresholds.variant = ThresholdConfig::Variant::Homogeneous;
  m.thresholds.delta = delta;
  return m;
}

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("hand-traced cascade on two clusters") {
  auto dir = temp_dir("trace");
  Scenario sc = clustered_scenario(dir);
  RunSpec spec{&sc, homog_model(0.3), 99, 3};
  Trajectory tr = run(spec, StepMode::Serial, true);

  REQUIRE(tr.rows.size() == 4);

  // day 0: agent 0 returned by construction
  CHECK(tr.rows[0].t == 0);
  CHECK(tr.rows[0].returned_count == 1);
  CHECK(tr.rows[0].mean_q_h == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(tr.rows[0].mean_q_s == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(tr.rows[0].q_p == doctest::Approx(0.2).epsilon(1e-15));

  // day 1: zero-degree POIs grow only through the physical coupling
  // (pre-step value 0.2); agents 1 and 2 each see one returned neighbor of
  // two (0.5 > 0.3), the fresh social value 0.4175 and the fresh physical
  // value 0.5, so both return; 3 and 4 see no returned neighbor and stay
  CHECK(tr.rows[1].returned_count == 3);
  CHECK(tr.rows[1].mean_q_h == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(tr.rows[1].mean_q_s == doctest::Approx(0.4175142245989305).epsilon(1e-12));
  CHECK(tr.rows[1].q_p == doctest::Approx(0.5).epsilon(1e-15));

  // day 2: the far cluster has no returned neighbors, so nothing changes
  // even though social and physical values keep climbing
  CHECK(tr.rows[2].returned_count == 3);
  CHECK(tr.rows[2].mean_q_s == doctest::Approx(0.44342812834224604).epsilon(1e-12));
  CHECK(tr.rows[2].q_p == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(tr.rows[3].returned_count == 3);

  // recorded per-agent states match the trace
  REQUIRE(tr.has_agent_rows);
  CHECK(tr.agent_rows[0] == std::vector<std::uint8_t>{1, 0, 0, 0, 0});
  CHECK(tr.agent_rows[1] == std::vector<std::uint8_t>{1, 1, 1, 0, 0});
  CHECK(tr.agent_rows[3] == std::vector<std::uint8_t>{1, 1, 1, 0, 0});

  fs::remove_all(dir);
}

TEST_CASE("a deficit in any layer blocks the return") {
  auto dir = temp_dir("veto");
  Scenario sc = clustered_scenario(dir);
  // day-1 values for agents 1 and 2: q_h=0.5, q_s=0.4175, q_p=0.5.
  // delta 0.45 passes q_h and q_p but fails q_s alone: nobody may return.
  Trajectory tr = run(RunSpec{&sc, homog_model(0.45), 99, 1});
  CHECK(tr.rows[1].returned_count == 1);
  // delta 0.3 passes all three (the cascade case above)
  Trajectory ok = run(RunSpec{&sc, homog_model(0.3), 99, 1});
  CHECK(ok.rows[1].returned_count == 3);
  fs::remove_all(dir);
}

TEST_CASE("covariate fallbacks for isolated agents") {
  auto dir = temp_dir("fallback");
  std::string csv =
      "node_id,layer,x_or_lon,y_or_lat\n"
      "0,h,0,0\n"
      "1,h,0.5,0\n"
      "2,h,50,0\n"  // out of range of everything
      "0,s,0,0.5\n"
      "0,p,0,0\n";
  auto path = dir / "locations.csv";
  io::write_file_atomic(path, csv);
  ScenarioConfig cfg;
  cfg.population = 3;
  cfg.n_pois = 1;
  cfg.locations_file = path.string();
  cfg.synthetic_locations = false;
  cfg.q_s0 = 0.35;
  cfg.schedule = {{0, 0.2}};
  cfg.returned_agents = {0};
  cfg.horizon = 1;
  Scenario sc = build_scenario(cfg);

  WorldState w = init_world(sc, homog_model(0.3), 7);
  Covariates cov = agent_covariates(w, sc, 2);
  // isolated home: population mean return fraction; no POI in range: mean
  // social value
  CHECK(cov.q_h == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(cov.q_s == doctest::Approx(0.35).epsilon(1e-15));
  CHECK(cov.q_p == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(cov.q_house == sc.cfg.q_house);
  CHECK(cov.q_income == sc.cfg.q_income);

  Covariates near = agent_covariates(w, sc, 1);
  CHECK(near.q_h == doctest::Approx(1.0).epsilon(1e-15));  // its one neighbor is back
  CHECK_THROWS_AS(agent_covariates(w, sc, 99), NotFoundError);
  fs::remove_all(dir);
}

TEST_CASE("horizon zero records only the initial day") {
  Scenario sc = generate_toy(50, 3);
  RunSpec spec{&sc, parse_model_shorthand("logit"), 3, 0};
  Trajectory tr = run(spec);
  REQUIRE(tr.rows.size() == 1);
  CHECK(tr.rows[0].t == 0);
}

TEST_CASE("repeat runs are byte-identical") {
  Scenario sc = generate_toy(300, 17);
  RunSpec spec{&sc, parse_model_shorthand("logit"), 17, 20};
  CHECK(trajectory_csv(run(spec)) == trajectory_csv(run(spec)));
  RunSpec tspec{&sc, parse_model_shorthand("timevarying"), 17, 20};
  CHECK(trajectory_csv(run(tspec)) == trajectory_csv(run(tspec)));
}

TEST_CASE("serial and threaded paths produce identical bytes") {
  ScenarioConfig cfg = default_toy_config();
  cfg.population = 2000;  // above the parallel cutover
  cfg.n_pois = 400;
  cfg.seed = 5;
  Scenario sc = build_scenario(cfg);
  for (const char* name : {"logit", "homog:0.6", "individual"}) {
    RunSpec spec{&sc, parse_model_shorthand(name), 5, 15};
    CHECK(trajectory_csv(run(spec, StepMode::Serial)) ==
          trajectory_csv(run(spec, StepMode::Parallel)));
  }
}

TEST_CASE("returns are absorbing") {
  Scenario sc = generate_toy(400, 11);
  RunSpec spec{&sc, parse_model_shorthand("logit"), 11, 40};
  Trajectory tr = run(spec, StepMode::Serial, true);
  for (std::size_t d = 1; d < tr.rows.size(); ++d) {
    CHECK(tr.rows[d].returned_count >= tr.rows[d - 1].returned_count);
    for (std::size_t i = 0; i < tr.agent_rows[d].size(); ++i)
      REQUIRE(tr.agent_rows[d][i] >= tr.agent_rows[d - 1][i]);
  }
}

TEST_CASE("lower thresholds dominate pointwise under a common seed") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    Scenario sc = generate_toy(300, seed);
    Trajectory lo = run(RunSpec{&sc, homog_model(0.6), seed, 30});
    Trajectory hi = run(RunSpec{&sc, homog_model(0.9), seed, 30});
    REQUIRE(lo.rows.size() == hi.rows.size());
    CHECK(lo.rows[0].mean_q_h == hi.rows[0].mean_q_h);  // shared day-0 state
    for (std::size_t d = 0; d < lo.rows.size(); ++d)
      REQUIRE(lo.rows[d].mean_q_h >= hi.rows[d].mean_q_h);
  }
}

TEST_CASE("a shared initial state reproduces the unshared run") {
  Scenario sc = generate_toy(200, 23);
  InitialState init = make_initial_state(sc, 23);
  RunSpec spec{&sc, parse_model_shorthand("hetero"), 23, 10};
  CHECK(trajectory_csv(run(spec)) == trajectory_csv(run(spec, StepMode::Serial, false, &init)));
}

TEST_CASE("initial neighbor counts match a brute scan") {
  Scenario sc = generate_toy(150, 29);
  InitialState init = make_initial_state(sc, 29);
  long long total = 0;
  for (std::size_t i = 0; i < init.returned.size(); ++i) total += init.returned[i];
  CHECK(total == init.total);
  for (std::size_t i = 0; i < init.returned.size(); ++i) {
    int count = 0;
    for (std::size_t j = 0; j < init.returned.size(); ++j)
      if (i != j && init.returned[j] &&
          distance_km(sc.net.homes[i], sc.net.homes[j]) <= sc.cfg.radius_home_km)
        ++count;
    REQUIRE(init.nbr_counts[i] == count);
  }
}

TEST_CASE("invalid model blocks before any stepping") {
  Scenario sc = generate_toy(20, 1);
  auto bad = homog_model(1.5);
  CHECK_THROWS_AS(run(RunSpec{&sc, bad, 1, 5}), ConfigError);
  DecisionModel tv;
  tv.type = DecisionModel::Type::ThresholdTimeVarying;
  tv.thresholds.variant = ThresholdConfig::Variant::TimeVarying;  // empty schedule
  CHECK_THROWS_AS(run(RunSpec{&sc, tv, 1, 5}), ConfigError);
  CHECK_THROWS_AS(run(RunSpec{nullptr, homog_model(0.5), 1, 5}), ConfigError);
  CHECK_THROWS_AS(run(RunSpec{&sc, homog_model(0.5), 1, -1}), ConfigError);
}

TEST_CASE("trajectory serializations") {
  Scenario sc = generate_toy(50, 2);
  RunSpec spec{&sc, parse_model_shorthand("logit"), 2, 2};
  Trajectory tr = run(spec, StepMode::Serial, true);
  std::string csv = trajectory_csv(tr);
  CHECK(csv.substr(0, csv.find('\n')) == "t,mean_q_h,mean_q_s,q_p,returned_count");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 rows

  auto j = nlohmann::json::parse(trajectory_json_str(tr));
  REQUIRE(j.at("rows").size() == 3);
  CHECK(j.at("rows")[0].at("t") == 0);
  CHECK(j.at("rows")[2].at("returned_count").get<long long>() == tr.rows[2].returned_count);

  std::string agents = agent_states_csv(tr);
  CHECK(agents.substr(0, agents.find('\n')) == "t,agent_id,returned");
  CHECK(std::count(agents.begin(), agents.end(), '\n') == 1 + 3 * 50);

  Trajectory bare = run(spec);
  CHECK_THROWS_AS(agent_states_csv(bare), ConfigError);
}

}  // TEST_SUITE
