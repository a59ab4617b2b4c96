#include "sweepflow/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sweepflow {

namespace {

std::vector<double> grid_times(double horizon, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
  std::vector<double> times{0.0};
  const auto n_full = static_cast<std::size_t>(std::floor(horizon / step + 1e-12));
  for (std::size_t k = 1; k <= n_full; ++k) times.push_back(static_cast<double>(k) * step);
  if (times.back() < horizon - 1e-12 * std::max(1.0, horizon)) times.push_back(horizon);
  return times;
}

void require_initial_support(const DiscreteMeasure& mu0, const MovingConvexSet& sets) {
  const ConvexSet s0 = sets.at(0.0);
  for (std::size_t i = 0; i < mu0.atoms().size(); ++i)
    if (!s0.contains(mu0.atoms()[i].position)) {
      std::ostringstream os;
      os << "initial atom " << i << " lies outside S(0) (residual "
         << s0.membership_residual(mu0.atoms()[i].position) << ")";
      throw std::invalid_argument(os.str());
    }
}

MeasureCurve stepped_curve(const DiscreteMeasure& mu0, const DriftField& f,
                           const MovingConvexSet& sets, double tau, CurveScheme scheme) {
  require_initial_support(mu0, sets);
  MeasureCurve curve;
  curve.scheme = scheme;
  curve.step = tau;
  curve.times = grid_times(sets.horizon(), tau);
  curve.snapshots.reserve(curve.times.size());
  curve.snapshots.push_back(mu0);
  for (std::size_t k = 0; k + 1 < curve.times.size(); ++k)
    curve.snapshots.push_back(step_measure_between(curve.snapshots.back(), f, sets,
                                                   curve.times[k], curve.times[k + 1]));
  return curve;
}

}  // namespace

const DiscreteMeasure& MeasureCurve::snapshot_at(double t) const {
  for (std::size_t k = 0; k < times.size(); ++k)
    if (std::abs(times[k] - t) <= 1e-9) return snapshots[k];
  throw std::domain_error("curve has no snapshot at the requested time");
}

DiscreteMeasure step_measure_between(const DiscreteMeasure& mu, const DriftField& f,
                                     const MovingConvexSet& sets, double t_from,
                                     double t_to) {
  const double dt = t_to - t_from;
  const ConvexSet target = sets.at(t_to);
  return pushforward(mu, [&](const Vec& x) {
    return project(target, axpy(x, dt, f.eval(t_from, x)));
  });
}

DiscreteMeasure step_measure(const DiscreteMeasure& mu_k, const DriftField& f,
                             const MovingConvexSet& sets, int k, double tau) {
  return step_measure_between(mu_k, f, sets, k * tau, (k + 1) * tau);
}

MeasureCurve evolve_timestepping(const DiscreteMeasure& mu0, const DriftField& f,
                                 const MovingConvexSet& sets, double tau) {
  return stepped_curve(mu0, f, sets, tau, CurveScheme::timestepping);
}

MeasureCurve evolve_reference(const DiscreteMeasure& mu0, const DriftField& f,
                              const MovingConvexSet& sets, double tau_ref) {
  return stepped_curve(mu0, f, sets, tau_ref, CurveScheme::reference);
}

MeasureCurve evolve_regularized(const DiscreteMeasure& mu0, const DriftField& f,
                                const MovingConvexSet& sets, double lambda, double h) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (h > lambda / 10.0 * (1.0 + 1e-12))
    throw std::invalid_argument("stiffness guard: evolve_regularized requires h <= lambda/10");
  require_initial_support(mu0, sets);

  MeasureCurve curve;
  curve.scheme = CurveScheme::regularized;
  curve.step = h;
  curve.lambda = lambda;
  curve.times = grid_times(sets.horizon(), h);
  curve.snapshots.reserve(curve.times.size());
  curve.snapshots.push_back(mu0);
  for (std::size_t k = 0; k + 1 < curve.times.size(); ++k) {
    const double t = curve.times[k];
    const double dt = curve.times[k + 1] - t;
    curve.snapshots.push_back(pushforward(curve.snapshots.back(), [&](const Vec& x) {
      return axpy(x, dt, regularized_rhs(f, sets, lambda, t, x));
    }));
  }
  return curve;
}

DiscreteMeasure interpolate_curve(const MeasureCurve& curve, double t,
                                  InterpolationMode mode) {
  if (curve.times.empty()) throw std::domain_error("empty curve");
  if (t < curve.times.front() - 1e-12 || t > curve.times.back() + 1e-12)
    throw std::domain_error("interpolation time outside [0, T]");
  t = std::clamp(t, curve.times.front(), curve.times.back());

  std::size_t k = 0;
  while (k + 1 < curve.times.size() && curve.times[k + 1] < t) ++k;
  // t in (times[k], times[k+1]] now, or t == times[0]. Grid hits return the
  // snapshot itself in both modes (piecewise interpolation is
  // right-continuous on (t_k, t_{k+1}]).
  if (std::abs(t - curve.times[k]) <= 1e-12) return curve.snapshots[k];
  if (std::abs(t - curve.times[k + 1]) <= 1e-12) return curve.snapshots[k + 1];
  if (mode == InterpolationMode::piecewise_constant) return curve.snapshots[k + 1];

  const double s = (t - curve.times[k]) / (curve.times[k + 1] - curve.times[k]);
  const TransportResult ot = kantorovich(curve.snapshots[k], curve.snapshots[k + 1], 2);
  return mccann_interpolate(curve.snapshots[k], curve.snapshots[k + 1], ot.plan, s);
}

std::vector<std::pair<Vec, Vec>> discrete_velocity(const DiscreteMeasure& mu_k,
                                                   const DriftField& f,
                                                   const MovingConvexSet& sets, int k,
                                                   double tau) {
  const double t_from = k * tau;
  const double t_to = std::min((k + 1) * tau, sets.horizon());
  const double dt = t_to - t_from;
  const ConvexSet target = sets.at(t_to);
  std::vector<std::pair<Vec, Vec>> out;
  out.reserve(mu_k.atoms().size());
  for (const Atom& a : mu_k.atoms()) {
    const Vec image = project(target, axpy(a.position, dt, f.eval(t_from, a.position)));
    Vec v(image.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = (image[i] - a.position[i]) / dt;
    out.emplace_back(a.position, std::move(v));
  }
  return out;
}

void write_curve_csv(const MeasureCurve& curve, const std::filesystem::path& directory,
                     const std::string& prefix, const std::vector<std::size_t>& indices) {
  std::filesystem::create_directories(directory);
  std::ofstream index_file(directory / (prefix + "_index.csv"));
  index_file << "time,filename,mass,support_size\n";
  char buf[64];
  for (std::size_t idx : indices) {
    const DiscreteMeasure& snap = curve.snapshots.at(idx);
    std::snprintf(buf, sizeof buf, "%s_%06zu.csv", prefix.c_str(), idx);
    const std::string name = buf;
    std::ofstream snap_file(directory / name);
    snap_file << "x_1";
    for (int i = 2; i <= snap.dimension(); ++i) snap_file << ",x_" << i;
    snap_file << ",weight\n";
    for (const Atom& a : snap.atoms()) {
      for (std::size_t i = 0; i < a.position.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", a.position[i]);
        snap_file << (i ? "," : "") << buf;
      }
      std::snprintf(buf, sizeof buf, "%.17g", a.weight);
      snap_file << ',' << buf << '\n';
    }
    std::snprintf(buf, sizeof buf, "%.17g", curve.times.at(idx));
    index_file << buf << ',' << prefix << '_';
    std::snprintf(buf, sizeof buf, "%06zu", idx);
    index_file << buf << ".csv,";
    std::snprintf(buf, sizeof buf, "%.17g", snap.total_mass());
    index_file << buf << ',' << snap.support_size() << '\n';
  }
}

}  // namespace sweepflow
