#include "pdrsim/dynamics.hpp"

#include <algorithm>

namespace pdrsim {

SDParams harris_sd(double n) { return {0.026, 0.671, 1.432, 0.901, n}; }

SDParams other_counties_sd(double n) { return {0.093, 0.736, 1.114, 0.935, n}; }

double sd_rhs(double q_s, double q_p, const SDParams& p) {
  return 0.001 * p.beta_s * p.n * q_s * (1.0 - q_s / p.k_s) +
         0.1 * p.beta_p * q_p * (1.0 - q_p / p.k_p);
}

double sd_step(double q_s, double q_p, const SDParams& p, double dt) {
  double v = q_s + dt * sd_rhs(q_s, q_p, p);
  return std::min(1.0, std::max(0.0, v));
}

double sd_step_per_node(double q_sj, double q_p, const SDParams& p, double n_j, double dt) {
  SDParams local = p;
  local.n = n_j;
  return sd_step(q_sj, q_p, local, dt);
}

double physical_value(const PhysicalSchedule& s, double t) {
  if (s.knots.empty()) throw ConfigError("physical_value: empty schedule");
  if (t < s.knots.front().t) throw DomainError("physical_value: t before first knot");
  for (std::size_t i = 1; i < s.knots.size(); ++i) {
    if (t <= s.knots[i].t) {
      const auto& a = s.knots[i - 1];
      const auto& b = s.knots[i];
      double w = (t - a.t) / (b.t - a.t);
      return a.q_p + w * (b.q_p - a.q_p);
    }
  }
  return s.knots.back().q_p;  // constant extrapolation
}

PhysicalSchedule default_physical_schedule() {
  return {{{0.0, 0.57}, {3.0, 0.78}, {7.0, 0.88}, {14.0, 0.92}, {30.0, 0.93}, {61.0, 0.93}}};
}

}  // namespace pdrsim
