#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdrsim/errors.hpp"
#include "pdrsim/rng.hpp"

namespace pdrsim {

enum class Regime { Urban, Rural };

// Urban uses {q_house, q_h, q_s, q_p}; Rural uses {q_income, q_h, q_s, q_p}.
struct LogitCoefficients {
  Regime regime = Regime::Rural;
  double intercept = 0.0;
  double q_house = 0.0;   // Urban only
  double q_income = 0.0;  // Rural only, per dollar
  double q_h = 0.0;
  double q_s = 0.0;
  double q_p = 0.0;
};

LogitCoefficients urban_logit();
LogitCoefficients rural_logit();
LogitCoefficients logit_for(Regime regime);

struct Covariates {
  double q_house = 1.0;
  double q_income = 0.0;  // dollars
  double q_h = 0.0;
  double q_s = 0.0;
  double q_p = 0.0;
};

double blm_utility(const LogitCoefficients& c, const Covariates& cov);
double blm_probability(double utility);

// one Bernoulli draw from the agent-owned stream; 1 = return
int blm_decide(double p, rng::Stream& stream);

// recognized value: 1 iff q is strictly above the threshold
int perceive(double q, double delta);

// conjunction of the three recognized values; any deficit blocks the return,
// which is what makes the rule non-compensatory
int threshold_decide(int perceived_h, int perceived_s, int perceived_p);

struct Thresholds {
  double dh = 0.0, ds = 0.0, dp = 0.0;
};

struct ThresholdSchedule {
  struct Knot {
    double t;
    double dh, ds, dp;
  };
  std::vector<Knot> knots;  // times strictly increasing, first at t=0
};

struct ThresholdConfig {
  enum class Variant { Homogeneous, Heterogeneous, Individual, TimeVarying };
  Variant variant = Variant::Homogeneous;
  double delta = 0.6;                       // Homogeneous
  Thresholds fixed{0.85, 0.93, 0.93};       // Heterogeneous
  double mu_h = 0.85, mu_s = 0.93, mu_p = 0.93, sigma = 0.2;  // Individual
  ThresholdSchedule schedule;               // TimeVarying
};

// Homogeneous/Heterogeneous ignore agent, t and the stream. Individual draws
// the agent's triple from the stream (6 uniforms: three clamped normals) and
// is reproducible per (stream key); callers cache the result at t=0.
// TimeVarying is a piecewise-constant, right-continuous lookup at t.
Thresholds resolve_thresholds(const ThresholdConfig& cfg, std::uint64_t agent, double t,
                              rng::Stream& stream);

ThresholdSchedule default_timevarying_schedule();

struct DecisionModel {
  enum class Type { Logit, ThresholdHomog, ThresholdHetero, ThresholdIndividual, ThresholdTimeVarying };
  Type type = Type::Logit;
  bool logit_cutoff = false;  // decide return iff p > 0.5 instead of drawing
  ThresholdConfig thresholds;
};

// stable identity used for results paths and decision-stream keying:
// logit, logit_cutoff, homog_<delta>, hetero, individual, timevarying
std::string canonical_model_name(const DecisionModel& m);

// shorthand: "logit", "homog:0.6", "hetero", "individual", "timevarying"
DecisionModel parse_model_shorthand(const std::string& text);

}  // namespace pdrsim
