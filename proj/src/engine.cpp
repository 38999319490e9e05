#include "pdrsim/engine.hpp"

#include <algorithm>

#include "json.hpp"
#include "pdrsim/io.hpp"

namespace pdrsim {

namespace {

void validate_model(const DecisionModel& m) {
  const auto& th = m.thresholds;
  switch (m.type) {
    case DecisionModel::Type::Logit:
      return;
    case DecisionModel::Type::ThresholdHomog:
      if (th.delta < 0.0 || th.delta > 1.0) throw ConfigError("model: delta outside [0,1]");
      return;
    case DecisionModel::Type::ThresholdHetero:
      for (double d : {th.fixed.dh, th.fixed.ds, th.fixed.dp})
        if (d < 0.0 || d > 1.0) throw ConfigError("model: fixed threshold outside [0,1]");
      return;
    case DecisionModel::Type::ThresholdIndividual:
      if (th.sigma <= 0.0) throw ConfigError("model: sigma must be positive");
      for (double d : {th.mu_h, th.mu_s, th.mu_p})
        if (d < 0.0 || d > 1.0) throw ConfigError("model: threshold mean outside [0,1]");
      return;
    case DecisionModel::Type::ThresholdTimeVarying: {
      const auto& knots = th.schedule.knots;
      if (knots.empty()) throw ConfigError("model: time-varying schedule is empty");
      if (knots.front().t != 0.0) throw ConfigError("model: schedule must start at t=0");
      for (std::size_t i = 0; i < knots.size(); ++i) {
        if (i > 0 && knots[i].t <= knots[i - 1].t)
          throw ConfigError("model: schedule times must be strictly increasing");
        for (double d : {knots[i].dh, knots[i].ds, knots[i].dp})
          if (d < 0.0 || d > 1.0) throw ConfigError("model: schedule threshold outside [0,1]");
      }
      return;
    }
  }
  throw ConfigError("model: unknown type");
}

}  // namespace

InitialState make_initial_state(const Scenario& sc, std::uint64_t run_seed) {
  const auto& net = sc.net;
  const int population = static_cast<int>(net.homes.size());
  InitialState init;
  init.seed = run_seed;
  init.returned.assign(population, 0);
  if (!sc.cfg.returned_agents.empty()) {
    for (int id : sc.cfg.returned_agents) init.returned[id] = 1;
  } else {
    for (int i = 0; i < population; ++i) {
      auto s = rng::stream(run_seed, rng::StreamClass::InitReturn, static_cast<std::uint64_t>(i));
      init.returned[i] = s.bernoulli(sc.cfg.returned0) ? 1 : 0;
    }
  }
  init.total = 0;
  init.nbr_counts.assign(population, 0);
  std::vector<int> hits;
  for (int j = 0; j < population; ++j) {
    if (!init.returned[j]) continue;
    ++init.total;
    net.home_index.query(net.homes[j], sc.cfg.radius_home_km, hits);
    for (int i : hits)
      if (i != j) ++init.nbr_counts[i];
  }
  return init;
}

WorldState init_world(const Scenario& sc, const DecisionModel& model, std::uint64_t run_seed,
                      const InitialState* shared) {
  validate_model(model);
  const int population = static_cast<int>(sc.net.homes.size());

  WorldState w;
  if (shared) {
    if (shared->seed != run_seed) throw ConfigError("init_world: shared initial state has a different seed");
    if (static_cast<int>(shared->returned.size()) != population)
      throw ConfigError("init_world: shared initial state sized for a different scenario");
    w.returned = shared->returned;
    w.returned_nbrs = shared->nbr_counts;
    w.returned_total = shared->total;
  } else {
    InitialState init = make_initial_state(sc, run_seed);
    w.returned = std::move(init.returned);
    w.returned_nbrs = std::move(init.nbr_counts);
    w.returned_total = init.total;
  }

  w.q_s.assign(sc.net.pois.size(), sc.cfg.q_s0);
  w.q_p = physical_value(sc.schedule, 0.0);

  if (model.type == DecisionModel::Type::ThresholdIndividual) {
    w.agent_thresholds.resize(population);
    for (int i = 0; i < population; ++i) {
      auto s = rng::stream(run_seed, rng::StreamClass::Thresholds, static_cast<std::uint64_t>(i));
      w.agent_thresholds[i] = resolve_thresholds(model.thresholds, static_cast<std::uint64_t>(i), 0.0, s);
    }
  }
  return w;
}

void step(WorldState& w, const Scenario& sc, const DecisionModel& model, std::uint64_t run_seed,
          StepMode mode) {
  const auto& net = sc.net;
  const int population = static_cast<int>(net.homes.size());
  const int n_pois = static_cast<int>(net.pois.size());
  const int t1 = w.t + 1;
  const double qp_old = w.q_p;
  const double qp_new = physical_value(sc.schedule, static_cast<double>(t1));
  const bool par = mode == StepMode::Parallel;

  // social layer, per node, against the pre-step physical value
  w.q_s_next.resize(n_pois);
  const double n_mean = sc.sd.n;
#pragma omp parallel for schedule(static) if (par && n_pois > 256)
  for (int j = 0; j < n_pois; ++j) {
    double n_j = sc.cfg.per_node_n ? static_cast<double>(net.poi_degree[j]) : n_mean;
    w.q_s_next[j] = sd_step_per_node(w.q_s[j], qp_old, sc.sd, n_j, 1.0);
  }

  // serial reductions: these values feed decisions and the recorded row
  double qs_sum = 0.0;
  for (int j = 0; j < n_pois; ++j) qs_sum += w.q_s_next[j];
  const double mean_qs = qs_sum / n_pois;
  const double pre_mean_returned = static_cast<double>(w.returned_total) / population;

  Thresholds common{};
  bool per_agent_thresholds = false;
  rng::Stream unused{};
  switch (model.type) {
    case DecisionModel::Type::ThresholdHomog:
    case DecisionModel::Type::ThresholdHetero:
      common = resolve_thresholds(model.thresholds, 0, static_cast<double>(t1), unused);
      break;
    case DecisionModel::Type::ThresholdTimeVarying:
      // thresholds belong to the day being decided, like q_p and q_s
      common = resolve_thresholds(model.thresholds, 0, static_cast<double>(t1), unused);
      break;
    case DecisionModel::Type::ThresholdIndividual:
      per_agent_thresholds = true;
      break;
    case DecisionModel::Type::Logit:
      break;
  }

  const bool logit = model.type == DecisionModel::Type::Logit;
  const LogitCoefficients coeffs = logit_for(sc.cfg.regime);
  const std::uint64_t decision_base = rng::mix(run_seed, rng::fnv1a(canonical_model_name(model)));

  w.flips.assign(population, 0);
#pragma omp parallel for schedule(static) if (par && population > 256)
  for (int i = 0; i < population; ++i) {
    if (w.returned[i]) continue;
    double q_h = net.home_degree[i] > 0
                     ? static_cast<double>(w.returned_nbrs[i]) / net.home_degree[i]
                     : pre_mean_returned;
    double q_s_local;
    const auto& pois = net.home_pois[i];
    if (pois.empty()) {
      q_s_local = mean_qs;
    } else {
      double acc = 0.0;
      for (std::int32_t j : pois) acc += w.q_s_next[j];
      q_s_local = acc / static_cast<double>(pois.size());
    }
    int dec;
    if (logit) {
      Covariates cov{sc.cfg.q_house, sc.cfg.q_income, q_h, q_s_local, qp_new};
      double p = blm_probability(blm_utility(coeffs, cov));
      if (model.logit_cutoff) {
        dec = p > 0.5 ? 1 : 0;
      } else {
        // stateless draw at (agent, day): absorbing skips can't shift anyone
        rng::Stream s{rng::mix(decision_base, static_cast<std::uint64_t>(rng::StreamClass::Decision),
                               static_cast<std::uint64_t>(i)),
                      static_cast<std::uint64_t>(t1)};
        dec = blm_decide(p, s);
      }
    } else {
      const Thresholds& th = per_agent_thresholds ? w.agent_thresholds[i] : common;
      dec = threshold_decide(perceive(q_h, th.dh), perceive(q_s_local, th.ds),
                             perceive(qp_new, th.dp));
    }
    w.flips[i] = static_cast<std::uint8_t>(dec);
  }

  std::vector<int>& newly = w.scratch_hits;
  newly.clear();
  for (int i = 0; i < population; ++i)
    if (w.flips[i]) newly.push_back(i);

  // neighbor counts: pure integer additions, so accumulation order is
  // irrelevant and the parallel path stays bit-identical to the serial one
  if (par && newly.size() > 64) {
    const int m = static_cast<int>(newly.size());
#pragma omp parallel
    {
      std::vector<int> hits;
#pragma omp for schedule(static)
      for (int k = 0; k < m; ++k) {
        int j = newly[k];
        net.home_index.query(net.homes[j], sc.cfg.radius_home_km, hits);
        for (int i : hits) {
          if (i == j) continue;
#pragma omp atomic
          ++w.returned_nbrs[i];
        }
      }
    }
  } else {
    std::vector<int> hits;
    for (int j : newly) {
      net.home_index.query(net.homes[j], sc.cfg.radius_home_km, hits);
      for (int i : hits)
        if (i != j) ++w.returned_nbrs[i];
    }
  }
  for (int j : newly) w.returned[j] = 1;
  w.returned_total += static_cast<long long>(newly.size());

  w.q_s.swap(w.q_s_next);
  w.q_p = qp_new;
  w.t = t1;
}

Covariates agent_covariates(const WorldState& w, const Scenario& sc, int agent) {
  const auto& net = sc.net;
  const int population = static_cast<int>(net.homes.size());
  if (agent < 0 || agent >= population)
    throw NotFoundError("agent_covariates: unknown agent " + std::to_string(agent));
  Covariates cov;
  cov.q_house = sc.cfg.q_house;
  cov.q_income = sc.cfg.q_income;
  cov.q_h = net.home_degree[agent] > 0
                ? static_cast<double>(w.returned_nbrs[agent]) / net.home_degree[agent]
                : static_cast<double>(w.returned_total) / population;
  const auto& pois = net.home_pois[agent];
  if (pois.empty()) {
    double acc = 0.0;
    for (double v : w.q_s) acc += v;
    cov.q_s = acc / static_cast<double>(w.q_s.size());
  } else {
    double acc = 0.0;
    for (std::int32_t j : pois) acc += w.q_s[j];
    cov.q_s = acc / static_cast<double>(pois.size());
  }
  cov.q_p = w.q_p;
  return cov;
}

Trajectory run(const RunSpec& spec, StepMode mode, bool record_agents, const InitialState* shared) {
  if (!spec.scenario) throw ConfigError("run: missing scenario");
  if (spec.horizon < 0) throw ConfigError("run: negative horizon");
  const Scenario& sc = *spec.scenario;
  const int population = static_cast<int>(sc.net.homes.size());

  InitialState local;
  const InitialState* init = shared;
  if (!init) {
    local = make_initial_state(sc, spec.seed);
    init = &local;
  }
  WorldState w = init_world(sc, spec.model, spec.seed, init);

  Trajectory tr;
  tr.rows.reserve(spec.horizon + 1);
  tr.has_agent_rows = record_agents;
  auto record = [&]() {
    double qs_sum = 0.0;
    for (double v : w.q_s) qs_sum += v;
    tr.rows.push_back({w.t, static_cast<double>(w.returned_total) / population,
                       qs_sum / static_cast<double>(w.q_s.size()), w.q_p, w.returned_total});
    if (record_agents) tr.agent_rows.push_back(w.returned);
  };
  record();
  for (int t = 1; t <= spec.horizon; ++t) {
    step(w, sc, spec.model, spec.seed, mode);
    record();
  }
  return tr;
}

std::string trajectory_csv(const Trajectory& tr) {
  std::string out = "t,mean_q_h,mean_q_s,q_p,returned_count\n";
  for (const auto& r : tr.rows) {
    out += std::to_string(r.t);
    out += ',';
    out += io::fmt_double(r.mean_q_h);
    out += ',';
    out += io::fmt_double(r.mean_q_s);
    out += ',';
    out += io::fmt_double(r.q_p);
    out += ',';
    out += std::to_string(r.returned_count);
    out += '\n';
  }
  return out;
}

std::string trajectory_json_str(const Trajectory& tr) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : tr.rows)
    rows.push_back({{"t", r.t},
                    {"mean_q_h", r.mean_q_h},
                    {"mean_q_s", r.mean_q_s},
                    {"q_p", r.q_p},
                    {"returned_count", r.returned_count}});
  return nlohmann::json{{"rows", rows}}.dump(2) + "\n";
}

std::string agent_states_csv(const Trajectory& tr) {
  if (!tr.has_agent_rows) throw ConfigError("agent_states_csv: per-agent states were not recorded");
  std::string out = "t,agent_id,returned\n";
  for (std::size_t d = 0; d < tr.agent_rows.size(); ++d) {
    const auto& day = tr.agent_rows[d];
    for (std::size_t a = 0; a < day.size(); ++a) {
      out += std::to_string(tr.rows[d].t);
      out += ',';
      out += std::to_string(a);
      out += ',';
      out += day[a] ? '1' : '0';
      out += '\n';
    }
  }
  return out;
}

}  // namespace pdrsim
