#pragma once

#include <vector>

#include "sweepflow/measures.hpp"

namespace sweepflow {

struct PlanEntry {
  int source = 0;
  int target = 0;
  double mass = 0.0;
};

/// Coupling between two discrete measures. Row sums match source weights and
/// column sums match target weights within 1e-10; `cost` records
/// (sum mass * |x-y|^p)^(1/p). Entries below 1e-15 mass are dropped.
struct TransportPlan {
  std::vector<PlanEntry> pairs;
  int cost_exponent = 2;
  double cost = 0.0;
};

struct TransportResult {
  double distance = 0.0;
  TransportPlan plan;
};

/// Exact optimum of the discrete Kantorovich problem with cost |x-y|^p,
/// p in {1,2}, by transportation simplex with Bland's anti-cycling rule.
/// Requires equal total masses (within 1e-10); throws "unbalanced" otherwise.
TransportResult kantorovich(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int p);

/// Independent oracle: exact optimum by enumeration. Equal-weight square
/// instances enumerate all permutation couplings; general weights enumerate
/// every spanning tree of the complete bipartite support graph (each tree is
/// one basic solution, i.e. one candidate vertex of the transportation
/// polytope). Support sizes are limited to 8 per side and the general path to
/// small tree counts; larger inputs throw "support too large".
double brute_force_w(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int p);

/// W1 on the line via the CDF formula: integral of |F_mu - F_nu| by a sorted
/// breakpoint sweep. Dimension-1 measures with equal masses only.
double w1_1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Displacement interpolation along a coupling: atoms (1-s) x_i + s y_j with
/// the plan masses. s=0 recovers mu, s=1 recovers nu; an optimal plan makes
/// the curve a constant-speed W2 geodesic.
DiscreteMeasure mccann_interpolate(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                   const TransportPlan& plan, double s);

}  // namespace sweepflow
