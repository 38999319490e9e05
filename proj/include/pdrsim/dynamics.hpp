#pragma once

#include <vector>

#include "pdrsim/errors.hpp"

namespace pdrsim {

// Social-layer growth parameters. n is the social interaction count: the
// county mean in the mean-field form, or a POI's own social-layer degree in
// the per-node form.
struct SDParams {
  double beta_s = 0.0;
  double k_s = 1.0;
  double beta_p = 0.0;
  double k_p = 1.0;
  double n = 0.0;
};

SDParams harris_sd(double n = 139.1);
SDParams other_counties_sd(double n = 78.5);

// d q_s / dt = 0.001*beta_s*n*q_s*(1 - q_s/k_s) + 0.1*beta_p*q_p*(1 - q_p/k_p)
double sd_rhs(double q_s, double q_p, const SDParams& p);

// forward Euler, clamped to [0,1]
double sd_step(double q_s, double q_p, const SDParams& p, double dt);

// per-node form: same law with the POI's own degree n_j
double sd_step_per_node(double q_sj, double q_p, const SDParams& p, double n_j, double dt);

struct PhysicalSchedule {
  struct Knot {
    double t;
    double q_p;
  };
  std::vector<Knot> knots;  // times strictly increasing, first at t=0
};

// linear interpolation between knots, constant after the last; t before the
// first knot is outside the schedule's domain
double physical_value(const PhysicalSchedule& s, double t);

PhysicalSchedule default_physical_schedule();  // synthetic, see README

}  // namespace pdrsim
