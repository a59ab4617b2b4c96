#pragma once

#include "sweepflow/evolution.hpp"

namespace sweepflow {

/// Constants entering the quantitative estimates: drift constant L_f, set
/// motion constant L_s, horizon T, the initial first absolute moment, the
/// single-trajectory |x0|, and the empirical step-bound constant C_max.
struct SystemConstants {
  double L_f = 0.0;
  double L_s = 0.0;
  double T = 0.0;
  double first_abs_moment = 0.0;
  double x0_abs = 0.0;
  double C_max = 0.0;
};

/// kappa = (e^{2 L_f T} - 1)(2 L_f + L_s)/(2 L_f). Requires L_f > 0.
double kappa(const SystemConstants& c);

/// Trajectory gap bound (L_f(1 + kappa + |x0|) + L_s) sqrt(lambda (e^{2 L_f t} - 1)/(2 L_f)).
double lemma_traj_bound(const SystemConstants& c, double lambda, double t);

/// Measure gap bound C1 sqrt(L_f lambda (e^{L_f t} - 1)/2) * first_abs_moment,
/// C1 = L_f(1 + kappa) + L_s. (The exponent here and the one in
/// lemma_traj_bound differ in the source material; both are kept as printed.)
double thm_w1_bound(const SystemConstants& c, double lambda, double t);

/// Specialized halfline-benchmark bound (3/2) e^2 sqrt(lambda (e^t - 1)/2).
double one_d_bound(double lambda, double t);

/// Closed-form W1 between the constrained and penalized flows of the
/// halfline benchmark started at 0.5: 0 before the hitting time 1/2, then
/// |lambda (e^{-(t-1/2)/lambda} - 1)|.
double one_d_exact_w1(double lambda, double t);

/// One-step transport bound tau (L_f C_max + L_s).
double step_w2_bound(const SystemConstants& c, double tau);

/// Uniform Hoelder estimate (t-s)^{1/2} (L_s + L_f C_max) T^{1/2}.
double holder_bound(const SystemConstants& c, double s, double t);

/// Moment gap C_k * w1 with C_k = k R^{k-1} on a domain of radius R.
double moment_diff_bound(int degree, double domain_radius, double w1);

/// Empirical C_max of a simulated run: sup over snapshots of
/// (integral (1 + |x|)^2 dmu_k)^{1/2}. Throws on an empty run.
double empirical_c_max(const MeasureCurve& run);

}  // namespace sweepflow
