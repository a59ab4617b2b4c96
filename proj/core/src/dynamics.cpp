#include "sweepflow/dynamics.hpp"

#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "sweepflow/tolerances.hpp"

namespace sweepflow {

namespace {

std::vector<double> uniform_grid_times(double horizon, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
  std::vector<double> times{0.0};
  const auto n_full = static_cast<std::size_t>(std::floor(horizon / step + 1e-12));
  for (std::size_t k = 1; k <= n_full; ++k) times.push_back(static_cast<double>(k) * step);
  if (times.back() < horizon - 1e-12 * std::max(1.0, horizon)) times.push_back(horizon);
  return times;
}

std::uint64_t splitmix(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

DriftField DriftField::constant(Vec value) {
  // |f| = |v| <= |v| (1 + |x|) and the x-Lipschitz modulus is 0.
  const double lf = norm(value);
  return DriftField{[v = std::move(value)](double, const Vec&) { return v; }, lf};
}

DriftField DriftField::zero(int dimension) {
  return DriftField{[dimension](double, const Vec&) { return Vec(dimension, 0.0); }, 0.0};
}

std::vector<std::string> check_drift_assumption(const DriftField& f, double horizon,
                                                const Vec& lower, const Vec& upper,
                                                int samples) {
  std::vector<std::string> failures;
  const int n = static_cast<int>(lower.size());
  std::uint64_t rng = 0x5eedu;
  auto sample_point = [&]() {
    Vec x(n);
    for (int i = 0; i < n; ++i) {
      const double u =
          static_cast<double>(splitmix(rng)) / static_cast<double>(std::uint64_t(-1));
      x[i] = lower[i] + u * (upper[i] - lower[i]);
    }
    return x;
  };
  const double budget_scale = f.lipschitz + Tol::lipschitz_slack;
  for (int k = 0; k < samples; ++k) {
    const double t =
        horizon * static_cast<double>(splitmix(rng)) / static_cast<double>(std::uint64_t(-1));
    const Vec x = sample_point();
    const Vec y = sample_point();
    const Vec fx = f.eval(t, x);
    const Vec fy = f.eval(t, y);
    if (norm(fx) > budget_scale * (1.0 + norm(x))) {
      std::ostringstream os;
      os << "drift growth bound violated at t=" << t << ": |f|=" << norm(fx)
         << " > " << budget_scale * (1.0 + norm(x));
      failures.push_back(os.str());
    }
    if (distance(fx, fy) > budget_scale * distance(x, y) + Tol::lipschitz_slack) {
      std::ostringstream os;
      os << "drift Lipschitz bound violated at t=" << t;
      failures.push_back(os.str());
    }
  }
  return failures;
}

const Vec& Trajectory::state_at(double t) const {
  for (std::size_t k = 0; k < times.size(); ++k)
    if (std::abs(times[k] - t) <= 1e-9) return states[k];
  throw std::domain_error("trajectory has no state at the requested time");
}

Vec regularized_rhs(const DriftField& f, const MovingConvexSet& sets, double lambda,
                    double t, const Vec& x) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  const Vec proj = project(sets.at(t), x);
  Vec rhs = f.eval(t, x);
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] -= (x[i] - proj[i]) / lambda;
  return rhs;
}

Trajectory integrate_regularized(const DriftField& f, const MovingConvexSet& sets,
                                 double lambda, Vec x0, double h) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (h > lambda / 10.0 * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "step h=" << h << " rejected: the penalty term has stiffness 1/lambda="
       << 1.0 / lambda << ", explicit Euler requires h <= lambda/10 = " << lambda / 10.0;
    throw std::invalid_argument(os.str());
  }
  if (!sets.at(0.0).contains(x0))
    throw std::invalid_argument("x0 must lie in S(0)");

  Trajectory traj;
  traj.scheme = TrajectoryScheme::regularized;
  traj.step = h;
  traj.lambda = lambda;
  traj.times = uniform_grid_times(sets.horizon(), h);
  traj.states.reserve(traj.times.size());
  traj.states.push_back(std::move(x0));
  for (std::size_t k = 0; k + 1 < traj.times.size(); ++k) {
    const double t = traj.times[k];
    const double dt = traj.times[k + 1] - t;
    const Vec rhs = regularized_rhs(f, sets, lambda, t, traj.states.back());
    Vec next = axpy(traj.states.back(), dt, rhs);
    if (!all_finite(next)) {
      std::ostringstream os;
      os << "regularized integration produced a non-finite state at step " << k + 1;
      throw std::runtime_error(os.str());
    }
    traj.states.push_back(std::move(next));
  }
  return traj;
}

Trajectory catching_up(const DriftField& f, const MovingConvexSet& sets, Vec x0,
                       double tau) {
  if (!sets.at(0.0).contains(x0))
    throw std::invalid_argument("x0 must lie in S(0)");

  Trajectory traj;
  traj.scheme = TrajectoryScheme::catching_up;
  traj.step = tau;
  traj.times = uniform_grid_times(sets.horizon(), tau);
  traj.states.reserve(traj.times.size());
  traj.states.push_back(std::move(x0));
  for (std::size_t k = 0; k + 1 < traj.times.size(); ++k) {
    const double t = traj.times[k];
    const double dt = traj.times[k + 1] - t;
    const Vec drifted = axpy(traj.states.back(), dt, f.eval(t, traj.states.back()));
    try {
      traj.states.push_back(project(sets.at(traj.times[k + 1]), drifted));
    } catch (const ProjectionError& e) {
      std::ostringstream os;
      os << "catching-up projection failed at step " << k + 1 << ": " << e.what();
      throw ProjectionError(os.str(), e.last_iterate, e.residual);
    }
  }
  return traj;
}

void write_csv(const Trajectory& trajectory, std::ostream& out) {
  const std::size_t n = trajectory.states.empty() ? 0 : trajectory.states.front().size();
  out << "t";
  for (std::size_t i = 1; i <= n; ++i) out << ",x_" << i;
  out << ",scheme,parameter\n";
  const char* scheme =
      trajectory.scheme == TrajectoryScheme::catching_up ? "catching_up" : "regularized";
  const double parameter = trajectory.scheme == TrajectoryScheme::catching_up
                               ? trajectory.step
                               : trajectory.lambda;
  char buf[64];
  for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", trajectory.times[k]);
    out << buf;
    for (double x : trajectory.states[k]) {
      std::snprintf(buf, sizeof buf, "%.17g", x);
      out << ',' << buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", parameter);
    out << ',' << scheme << ',' << buf << '\n';
  }
}

}  // namespace sweepflow
