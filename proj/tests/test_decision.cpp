#include <cmath>

#include "doctest.h"
#include "pdrsim/decision.hpp"

using namespace pdrsim;

TEST_SUITE("decision") {

TEST_CASE("urban probability anchors") {
  auto c = urban_logit();
  Covariates zero{0, 0, 0, 0, 0};
  // frozen scalar oracles, computed independently of this code
  CHECK(blm_utility(c, zero) == doctest::Approx(-1.904).epsilon(1e-15));
  CHECK(blm_probability(blm_utility(c, zero)) ==
        doctest::Approx(0.12965642276890066).epsilon(1e-12));

  Covariates ones{1, 1, 1, 1, 1};
  CHECK(blm_utility(c, ones) == doctest::Approx(0.669).epsilon(1e-12));
  CHECK(blm_probability(blm_utility(c, ones)) ==
        doctest::Approx(0.66127920632295).epsilon(1e-12));
}

TEST_CASE("rural income anchor") {
  auto c = rural_logit();
  Covariates cov{1.0, 50000.0, 0, 0, 0};
  CHECK(blm_utility(c, cov) == doctest::Approx(-1.249).epsilon(1e-12));
  CHECK(blm_probability(blm_utility(c, cov)) ==
        doctest::Approx(0.22287329161311603).epsilon(1e-12));
}

TEST_CASE("regime selects the house or income term") {
  Covariates cov{1.0, 50000.0, 0.5, 0.5, 0.5};
  auto u = urban_logit();
  auto r = rural_logit();
  // urban must ignore income entirely, rural must ignore home ownership
  Covariates no_income = cov;
  no_income.q_income = 0.0;
  CHECK(blm_utility(u, cov) == blm_utility(u, no_income));
  Covariates no_house = cov;
  no_house.q_house = 0.0;
  CHECK(blm_utility(r, cov) == blm_utility(r, no_house));
  CHECK(logit_for(Regime::Urban).intercept == u.intercept);
  CHECK(logit_for(Regime::Rural).intercept == r.intercept);
}

TEST_CASE("probability is a logistic link") {
  CHECK(blm_probability(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(blm_probability(40.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(blm_probability(-40.0) == doctest::Approx(0.0).scale(1).epsilon(1e-12));
  CHECK(blm_probability(1.3) + blm_probability(-1.3) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("decide draws one bernoulli from the agent stream") {
  auto st = rng::stream(7, rng::StreamClass::Decision, 3);
  // frozen first uniform of this stream is 0.49876...
  CHECK(blm_decide(0.6, st) == 1);
  CHECK(st.ctr == 1);
  st.ctr = 0;
  CHECK(blm_decide(0.4, st) == 0);
}

TEST_CASE("perception is strictly greater than") {
  CHECK(perceive(0.78, 0.78) == 0);
  CHECK(perceive(0.78000001, 0.78) == 1);
  CHECK(perceive(0.779, 0.78) == 0);
  CHECK(perceive(1.0, 0.0) == 1);
  CHECK(perceive(0.0, 0.0) == 0);
}

TEST_CASE("threshold rule is a pure conjunction") {
  for (int h = 0; h <= 1; ++h)
    for (int s = 0; s <= 1; ++s)
      for (int p = 0; p <= 1; ++p)
        CHECK(threshold_decide(h, s, p) == (h && s && p ? 1 : 0));
}

TEST_CASE("homogeneous and heterogeneous thresholds ignore time and agent") {
  rng::Stream dummy;
  ThresholdConfig homog;
  homog.variant = ThresholdConfig::Variant::Homogeneous;
  homog.delta = 0.6;
  for (double t : {0.0, 3.0, 61.0}) {
    auto th = resolve_thresholds(homog, 5, t, dummy);
    CHECK(th.dh == 0.6);
    CHECK(th.ds == 0.6);
    CHECK(th.dp == 0.6);
  }
  ThresholdConfig hetero;
  hetero.variant = ThresholdConfig::Variant::Heterogeneous;
  auto th = resolve_thresholds(hetero, 0, 10.0, dummy);
  CHECK(th.dh == 0.85);
  CHECK(th.ds == 0.93);
  CHECK(th.dp == 0.93);
  CHECK(dummy.ctr == 0);  // no draws consumed
}

TEST_CASE("individual thresholds are clamped, reproducible draws") {
  ThresholdConfig cfg;
  cfg.variant = ThresholdConfig::Variant::Individual;
  cfg.sigma = 2.0;  // wide spread so both clamp sides get exercised
  auto st = rng::stream(42, rng::StreamClass::Thresholds, 17);
  auto th = resolve_thresholds(cfg, 17, 0.0, st);
  CHECK(st.ctr == 6);  // three normals, two uniforms each
  for (double v : {th.dh, th.ds, th.dp}) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  auto st2 = rng::stream(42, rng::StreamClass::Thresholds, 17);
  auto th2 = resolve_thresholds(cfg, 17, 0.0, st2);
  CHECK(th.dh == th2.dh);
  CHECK(th.ds == th2.ds);
  CHECK(th.dp == th2.dp);
}

TEST_CASE("individual draws center on their means") {
  ThresholdConfig cfg;
  cfg.variant = ThresholdConfig::Variant::Individual;
  const int n = 10000;
  double sh = 0, ss = 0, sp = 0;
  for (int i = 0; i < n; ++i) {
    auto st = rng::stream(1234, rng::StreamClass::Thresholds, i);
    auto th = resolve_thresholds(cfg, i, 0.0, st);
    sh += th.dh;
    ss += th.ds;
    sp += th.dp;
  }
  // clamping to [0,1] pulls the mean below mu; frozen truncated-moment oracles
  CHECK(std::fabs(sh / n - 0.8237670749059688) < 0.01);
  CHECK(std::fabs(ss / n - 0.8803738509729261) < 0.01);
  CHECK(std::fabs(sp / n - 0.8803738509729261) < 0.01);
}

TEST_CASE("time-varying lookup is piecewise constant and right continuous") {
  ThresholdConfig cfg;
  cfg.variant = ThresholdConfig::Variant::TimeVarying;
  cfg.schedule = default_timevarying_schedule();
  rng::Stream dummy;
  auto at = [&](double t) { return resolve_thresholds(cfg, 0, t, dummy); };

  CHECK(at(0).dh == 0.70);
  CHECK(at(0).ds == 0.68);
  CHECK(at(0).dp == 0.57);
  CHECK(at(3).dh == 0.91);
  CHECK(at(3).ds == 0.98);
  CHECK(at(3).dp == 0.78);
  CHECK(at(5).dh == at(3).dh);  // constant until the next knot
  CHECK(at(5).ds == at(3).ds);
  CHECK(at(5).dp == at(3).dp);
  CHECK(at(7).dh == 0.94);
  CHECK(at(7).ds == 0.97);
  CHECK(at(7).dp == 0.97);
  CHECK(at(30).dh == 0.81);
  CHECK(at(30).ds == 0.89);
  CHECK(at(30).dp == 0.89);
  CHECK(at(1000).dh == 0.81);  // last knot holds

  CHECK_THROWS_AS(at(-0.5), DomainError);
  ThresholdConfig empty;
  empty.variant = ThresholdConfig::Variant::TimeVarying;
  CHECK_THROWS_AS(resolve_thresholds(empty, 0, 0.0, dummy), ConfigError);
}

TEST_CASE("model names round trip through shorthand") {
  CHECK(canonical_model_name(parse_model_shorthand("logit")) == "logit");
  CHECK(canonical_model_name(parse_model_shorthand("logit_cutoff")) == "logit_cutoff");
  CHECK(parse_model_shorthand("logit_cutoff").logit_cutoff);
  CHECK(canonical_model_name(parse_model_shorthand("homog:0.6")) == "homog_0.6");
  CHECK(canonical_model_name(parse_model_shorthand("homog_0.7")) == "homog_0.7");
  CHECK(canonical_model_name(parse_model_shorthand("hetero")) == "hetero");
  CHECK(canonical_model_name(parse_model_shorthand("individual")) == "individual");
  CHECK(canonical_model_name(parse_model_shorthand("timevarying")) == "timevarying");
  CHECK_FALSE(parse_model_shorthand("timevarying").thresholds.schedule.knots.empty());
  CHECK_THROWS_AS(parse_model_shorthand("bogus"), ConfigError);
  CHECK_THROWS_AS(parse_model_shorthand("homog:1.5"), ConfigError);
  CHECK_THROWS_AS(parse_model_shorthand("homog:-0.1"), ConfigError);
}

}  // TEST_SUITE
