#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "sweepflow/geometry.hpp"
#include "sweepflow/vec.hpp"

namespace sweepflow {

/// Perturbation term f(t, x) with its declared growth/Lipschitz constant L_f
/// (|f(t,x)| <= L_f (1+|x|), |f(t,x)-f(t,y)| <= L_f |x-y|). The constant is
/// declared, not inferred; check_drift_assumption validates it by sampling.
struct DriftField {
  std::function<Vec(double, const Vec&)> eval;
  double lipschitz = 0.0;

  static DriftField constant(Vec value);
  static DriftField zero(int dimension);
};

/// Sampled validation of the declared L_f over a box of states and the time
/// horizon. Returns violation descriptions (empty = consistent).
std::vector<std::string> check_drift_assumption(const DriftField& f, double horizon,
                                                const Vec& lower, const Vec& upper,
                                                int samples = 64);

enum class TrajectoryScheme { catching_up, regularized };

struct Trajectory {
  std::vector<double> times;  // strictly increasing from 0
  std::vector<Vec> states;
  TrajectoryScheme scheme = TrajectoryScheme::catching_up;
  double step = 0.0;    // tau or h
  double lambda = 0.0;  // regularized only

  const Vec& state_at(double t) const;  // exact grid time lookup
};

/// Right-hand side of the penalized dynamics:
/// f(t,x) - (1/lambda)(x - proj(x, S(t))).
Vec regularized_rhs(const DriftField& f, const MovingConvexSet& sets, double lambda,
                    double t, const Vec& x);

/// Explicit Euler on the penalized ODE over [0, T], uniform step h with a
/// final partial step. Requires x0 in S(0) and h <= lambda/10: the penalty
/// term has stiffness 1/lambda and that margin keeps the linear test problem
/// well inside the stability region.
Trajectory integrate_regularized(const DriftField& f, const MovingConvexSet& sets,
                                 double lambda, Vec x0, double h);

/// Catching-up time stepping x_{k+1} = P_{S((k+1)tau)}(x_k + tau f(k tau, x_k))
/// on a uniform grid with a final partial step. Every state lies in its set.
Trajectory catching_up(const DriftField& f, const MovingConvexSet& sets, Vec x0,
                       double tau);

/// CSV with columns t, x_1..x_n, scheme, parameter.
void write_csv(const Trajectory& trajectory, std::ostream& out);

}  // namespace sweepflow
