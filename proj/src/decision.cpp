#include "pdrsim/decision.hpp"

#include <algorithm>
#include <cmath>

#include "pdrsim/io.hpp"

namespace pdrsim {

LogitCoefficients urban_logit() {
  LogitCoefficients c;
  c.regime = Regime::Urban;
  c.intercept = -1.904;
  c.q_house = 1.520;
  c.q_h = 1.638;
  c.q_s = -1.756;
  c.q_p = 1.171;
  return c;
}

LogitCoefficients rural_logit() {
  LogitCoefficients c;
  c.regime = Regime::Rural;
  c.intercept = -2.379;
  c.q_income = 2.26e-5;
  c.q_h = 3.298;
  c.q_s = -4.845;
  c.q_p = 1.675;
  return c;
}

LogitCoefficients logit_for(Regime regime) {
  return regime == Regime::Urban ? urban_logit() : rural_logit();
}

double blm_utility(const LogitCoefficients& c, const Covariates& cov) {
  double u = c.intercept + c.q_h * cov.q_h + c.q_s * cov.q_s + c.q_p * cov.q_p;
  if (c.regime == Regime::Urban)
    u += c.q_house * cov.q_house;
  else
    u += c.q_income * cov.q_income;
  return u;
}

double blm_probability(double utility) {
  return 1.0 / (1.0 + std::exp(-utility));
}

int blm_decide(double p, rng::Stream& stream) {
  return stream.bernoulli(p) ? 1 : 0;
}

int perceive(double q, double delta) {
  return q > delta ? 1 : 0;
}

int threshold_decide(int perceived_h, int perceived_s, int perceived_p) {
  return (perceived_h && perceived_s && perceived_p) ? 1 : 0;
}

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

}  // namespace

Thresholds resolve_thresholds(const ThresholdConfig& cfg, std::uint64_t /*agent*/, double t,
                              rng::Stream& stream) {
  switch (cfg.variant) {
    case ThresholdConfig::Variant::Homogeneous:
      return {cfg.delta, cfg.delta, cfg.delta};
    case ThresholdConfig::Variant::Heterogeneous:
      return cfg.fixed;
    case ThresholdConfig::Variant::Individual: {
      // draw order dh, ds, dp is part of the reproducibility contract
      double dh = clamp01(stream.normal(cfg.mu_h, cfg.sigma));
      double ds = clamp01(stream.normal(cfg.mu_s, cfg.sigma));
      double dp = clamp01(stream.normal(cfg.mu_p, cfg.sigma));
      return {dh, ds, dp};
    }
    case ThresholdConfig::Variant::TimeVarying: {
      if (cfg.schedule.knots.empty())
        throw ConfigError("resolve_thresholds: time-varying schedule is empty");
      const ThresholdSchedule::Knot* hit = nullptr;
      for (const auto& k : cfg.schedule.knots) {
        if (k.t <= t) hit = &k;  // latest knot at or before t
      }
      if (!hit) throw DomainError("resolve_thresholds: t before first knot");
      return {hit->dh, hit->ds, hit->dp};
    }
  }
  throw ConfigError("resolve_thresholds: unknown variant");
}

ThresholdSchedule default_timevarying_schedule() {
  return {{
      {0.0, 0.70, 0.68, 0.57},
      {3.0, 0.91, 0.98, 0.78},
      {7.0, 0.94, 0.97, 0.97},
      {30.0, 0.81, 0.89, 0.89},
  }};
}

std::string canonical_model_name(const DecisionModel& m) {
  switch (m.type) {
    case DecisionModel::Type::Logit:
      return m.logit_cutoff ? "logit_cutoff" : "logit";
    case DecisionModel::Type::ThresholdHomog:
      return "homog_" + io::fmt_double(m.thresholds.delta);
    case DecisionModel::Type::ThresholdHetero:
      return "hetero";
    case DecisionModel::Type::ThresholdIndividual:
      return "individual";
    case DecisionModel::Type::ThresholdTimeVarying:
      return "timevarying";
  }
  throw ConfigError("canonical_model_name: unknown model type");
}

DecisionModel parse_model_shorthand(const std::string& text) {
  DecisionModel m;
  if (text == "logit") {
    m.type = DecisionModel::Type::Logit;
    return m;
  }
  if (text == "logit_cutoff") {
    m.type = DecisionModel::Type::Logit;
    m.logit_cutoff = true;
    return m;
  }
  if (text.rfind("homog:", 0) == 0 || text.rfind("homog_", 0) == 0) {
    m.type = DecisionModel::Type::ThresholdHomog;
    m.thresholds.variant = ThresholdConfig::Variant::Homogeneous;
    try {
      m.thresholds.delta = std::stod(text.substr(6));
    } catch (const std::exception&) {
      throw ConfigError("parse_model_shorthand: bad threshold in '" + text + "'");
    }
    if (m.thresholds.delta < 0.0 || m.thresholds.delta > 1.0)
      throw ConfigError("parse_model_shorthand: threshold outside [0,1] in '" + text + "'");
    return m;
  }
  if (text == "hetero") {
    m.type = DecisionModel::Type::ThresholdHetero;
    m.thresholds.variant = ThresholdConfig::Variant::Heterogeneous;
    return m;
  }
  if (text == "individual") {
    m.type = DecisionModel::Type::ThresholdIndividual;
    m.thresholds.variant = ThresholdConfig::Variant::Individual;
    return m;
  }
  if (text == "timevarying") {
    m.type = DecisionModel::Type::ThresholdTimeVarying;
    m.thresholds.variant = ThresholdConfig::Variant::TimeVarying;
    m.thresholds.schedule = default_timevarying_schedule();
    return m;
  }
  throw ConfigError("parse_model_shorthand: unknown model '" + text + "'");
}

}  // namespace pdrsim
