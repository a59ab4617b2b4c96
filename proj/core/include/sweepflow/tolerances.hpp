#pragma once

namespace sweepflow {

/// Numerical tolerances shared across the library. Single source of truth:
/// every membership / conservation / marginal check reads these constants.
struct Tol {
  static constexpr double membership = 1e-9;           // set-membership residual
  static constexpr double atom_merge = 1e-14;          // atoms closer than this coalesce
  static constexpr double mass_conservation = 1e-12;   // total-mass drift allowed
  static constexpr double marginal = 1e-10;            // transport-plan marginal slack
  static constexpr double unit_normal = 1e-12;         // halfspace normal normalization
  static constexpr double projection_stop = 1e-12;     // cyclic projection fixpoint
  static constexpr int projection_max_iter = 10'000;
  static constexpr double lipschitz_slack = 1e-8;      // sampled assumption checks
  static constexpr double plan_mass_floor = 1e-15;     // plan entries below are dropped
};

}  // namespace sweepflow
