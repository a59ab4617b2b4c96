#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "sweepflow/tolerances.hpp"
#include "sweepflow/vec.hpp"

namespace sweepflow {

/// Closed convex sets used as constraint sets of the swept dynamics.
/// Supported shapes: halfspace {x : <n,x> <= c} with |n| = 1, Euclidean ball,
/// axis-aligned box, and finite intersections of these. Values are immutable
/// after construction and safe to share across threads.
class ConvexSet {
 public:
  struct Halfspace {
    Vec normal;  // unit outward normal
    double offset;
  };
  struct Ball {
    Vec center;
    double radius;
  };
  struct Box {
    Vec lower;
    Vec upper;
  };
  struct Intersection {
    std::vector<ConvexSet> parts;               // nonempty
    std::optional<Vec> feasible_point;          // certificate from config, if any
  };

  static ConvexSet halfspace(Vec normal, double offset);
  static ConvexSet ball(Vec center, double radius);
  static ConvexSet box(Vec lower, Vec upper);
  static ConvexSet intersection(std::vector<ConvexSet> parts,
                                std::optional<Vec> feasible_point = std::nullopt);

  int dimension() const;

  /// Distance-like residual of set membership: 0 inside, otherwise the
  /// Euclidean distance to the set (for intersections, the max over parts,
  /// which lower-bounds the true distance).
  double membership_residual(const Vec& x) const;
  bool contains(const Vec& x, double tol = Tol::membership) const;

  /// The same shape translated by `shift`.
  ConvexSet translated(const Vec& shift) const;

  const Halfspace* as_halfspace() const { return std::get_if<Halfspace>(&shape_); }
  const Ball* as_ball() const { return std::get_if<Ball>(&shape_); }
  const Box* as_box() const { return std::get_if<Box>(&shape_); }
  const Intersection* as_intersection() const { return std::get_if<Intersection>(&shape_); }

  /// If `other` is the same shape translated by some vector v, returns v.
  std::optional<Vec> translation_from(const ConvexSet& other) const;

  bool is_bounded() const;

  /// A point in (or near the centroid of) the set, used to anchor boundary
  /// sampling. Halfspaces use the boundary foot point of the origin.
  Vec anchor_point() const;

 private:
  template <typename S>
  explicit ConvexSet(S shape) : shape_(std::move(shape)) {}
  std::variant<Halfspace, Ball, Box, Intersection> shape_;
};

/// Raised when the cyclic projection loop for intersections fails to reach a
/// fixpoint; carries the last iterate and its membership residual.
class ProjectionError : public std::runtime_error {
 public:
  ProjectionError(std::string what, Vec last_iterate, double residual)
      : std::runtime_error(std::move(what)),
        last_iterate(std::move(last_iterate)),
        residual(residual) {}
  Vec last_iterate;
  double residual;
};

/// Euclidean projection of x onto the set. Exact for primitive shapes;
/// intersections use Dykstra's cyclic scheme (which converges to the nearest
/// point, unlike plain alternating projections) with max_iter 10'000 and a
/// 1e-12 fixpoint stop.
Vec project(const ConvexSet& set, const Vec& x);

struct HausdorffEstimate {
  double value = 0.0;
  bool exact = false;  // false => sampled lower estimate
};

/// Hausdorff distance between two convex sets. Exact for translates of a
/// common shape, ball pairs, box pairs and parallel halfspaces; otherwise a
/// sampled lower estimate over `boundary_samples` boundary points, flagged
/// approximate. Throws std::domain_error for unbounded pairs without
/// translate structure.
HausdorffEstimate hausdorff(const ConvexSet& a, const ConvexSet& b,
                            int boundary_samples = 256);

/// Discrete normal-cone certificate: max over probes y in `set` of
/// <y - x, -w>. A value <= tol certifies w in -N_set(x) against the probes.
/// Preconditions: x in set, probes in set (membership residual <= 1e-9).
double vi_residual(const ConvexSet& set, const Vec& x, const Vec& w,
                   std::span<const Vec> probes);

/// Piecewise-linear translation path through waypoints; offsets(t) is the
/// linear interpolation between bracketing waypoints (clamped at the ends).
struct TranslationPath {
  std::vector<double> times;   // strictly increasing
  std::vector<Vec> offsets;    // one per time

  Vec at(double t) const;
};

/// Time-parameterized family S(t) of closed convex sets on [0, T] with a
/// declared Lipschitz constant L_s (Assumption-style regularity is validated
/// by sampling, never inferred).
class MovingConvexSet {
 public:
  MovingConvexSet(std::function<ConvexSet(double)> generator, double lipschitz_constant,
                  double horizon);

  static MovingConvexSet constant(ConvexSet set, double horizon);
  static MovingConvexSet translating(ConvexSet base, TranslationPath path,
                                     double lipschitz_constant, double horizon);

  /// S(t); throws std::domain_error outside [0, T].
  ConvexSet at(double t) const;

  double lipschitz_constant() const { return lipschitz_; }
  double horizon() const { return horizon_; }

 private:
  std::function<ConvexSet(double)> generator_;
  double lipschitz_;
  double horizon_;
};

/// Sampled validation of the declared set Lipschitz constant:
/// hausdorff(S(s), S(t)) <= (L_s + 1e-8)|t - s| over a sample grid.
/// Returns descriptions of violated pairs (empty = consistent).
std::vector<std::string> check_set_lipschitz(const MovingConvexSet& ms, int samples = 24);

}  // namespace sweepflow
