#pragma once

#include <filesystem>
#include <utility>
#include <vector>

#include "sweepflow/dynamics.hpp"
#include "sweepflow/measures.hpp"
#include "sweepflow/transport.hpp"

namespace sweepflow {

enum class CurveScheme { timestepping, regularized, reference };

/// Discrete-time curve of measures on [0, T]: one snapshot per grid time.
/// Snapshots are immutable; per-atom stepping carries no shared mutable state.
struct MeasureCurve {
  std::vector<double> times;
  std::vector<DiscreteMeasure> snapshots;
  CurveScheme scheme = CurveScheme::timestepping;
  double step = 0.0;    // tau, h, or tau_ref
  double lambda = 0.0;  // regularized only

  double horizon() const { return times.empty() ? 0.0 : times.back(); }
  const DiscreteMeasure& snapshot_at(double t) const;  // exact grid lookup
};

/// One catching-up step on measures: push-forward of mu_k under
/// x -> P_{S((k+1)tau)}(x + tau f(k tau, x)). Mass is preserved; collisions
/// after projection merge (this is how concentration on edges shows up).
DiscreteMeasure step_measure(const DiscreteMeasure& mu_k, const DriftField& f,
                             const MovingConvexSet& sets, int k, double tau);

/// Same step between two explicit times (used for the final partial step).
DiscreteMeasure step_measure_between(const DiscreteMeasure& mu, const DriftField& f,
                                     const MovingConvexSet& sets, double t_from,
                                     double t_to);

/// Iterated catching-up on measures over the whole horizon.
MeasureCurve evolve_timestepping(const DiscreteMeasure& mu0, const DriftField& f,
                                 const MovingConvexSet& sets, double tau);

/// Every atom follows the penalized ODE (explicit Euler, step h); weights are
/// untouched.
MeasureCurve evolve_regularized(const DiscreteMeasure& mu0, const DriftField& f,
                                const MovingConvexSet& sets, double lambda, double h);

/// Fine catching-up run that serves as the oracle for distance experiments.
MeasureCurve evolve_reference(const DiscreteMeasure& mu0, const DriftField& f,
                              const MovingConvexSet& sets, double tau_ref);

enum class InterpolationMode { geodesic, piecewise_constant };

/// Measure at an off-grid time. Geodesic mode displaces mass along a fresh
/// optimal W2 plan between the bracketing snapshots; piecewise mode returns
/// the right snapshot of the bracketing interval (mu_{k+1} on (t_k, t_{k+1}]).
DiscreteMeasure interpolate_curve(const MeasureCurve& curve, double t,
                                  InterpolationMode mode);

/// Per-atom discrete velocities (x, (G^k(x) - x)/tau) at step k.
std::vector<std::pair<Vec, Vec>> discrete_velocity(const DiscreteMeasure& mu_k,
                                                   const DriftField& f,
                                                   const MovingConvexSet& sets, int k,
                                                   double tau);

/// Snapshot CSVs plus an index file (time, filename, mass, support size).
/// Writes snapshots for the given indices into `directory`, named
/// <prefix>_<index>.csv.
void write_curve_csv(const MeasureCurve& curve, const std::filesystem::path& directory,
                     const std::string& prefix, const std::vector<std::size_t>& indices);

}  // namespace sweepflow
