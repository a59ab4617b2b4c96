#pragma once

#include <functional>
#include <vector>

#include "sweepflow/tolerances.hpp"
#include "sweepflow/vec.hpp"

namespace sweepflow {

struct Atom {
  Vec position;
  double weight = 0.0;
};

/// Finitely supported nonnegative measure: an atom cloud. Grid measures are
/// atom clouds at cell centers, so push-forward is exact and projection-induced
/// collisions concentrate mass by merging (atoms closer than 1e-14 coalesce at
/// construction). Immutable after construction.
class DiscreteMeasure {
 public:
  DiscreteMeasure(int dimension, std::vector<Atom> atoms);

  static DiscreteMeasure dirac(Vec point, double mass = 1.0);

  /// Probability measure with one atom per cell center of a uniform subdivision
  /// of the box [lower, upper], `cells_per_axis` cells along every axis.
  static DiscreteMeasure uniform_grid(const Vec& lower, const Vec& upper,
                                      int cells_per_axis);

  int dimension() const { return dimension_; }
  double total_mass() const { return total_mass_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t support_size() const { return atoms_.size(); }

 private:
  int dimension_;
  std::vector<Atom> atoms_;
  double total_mass_;
};

/// Exponent of a monomial t^a x^b in time and state.
struct MultiIndex {
  int time_power = 0;
  std::vector<int> space_powers;

  int total_degree() const {
    int d = time_power;
    for (int b : space_powers) d += b;
    return d;
  }
};

/// Image measure g#mu: atoms (g(x_i), w_i), merged. Mass is preserved exactly
/// (weights are carried over, never renormalized).
DiscreteMeasure pushforward(const DiscreteMeasure& mu,
                            const std::function<Vec(const Vec&)>& g);

/// t^a * sum_i w_i * x_i^b.
double moment(const DiscreteMeasure& mu, const MultiIndex& idx, double t);

}  // namespace sweepflow
