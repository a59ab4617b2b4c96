#include "sweepflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sweepflow {

namespace {

Vec project_halfspace(const ConvexSet::Halfspace& h, const Vec& x) {
  const double excess = dot(x, h.normal) - h.offset;
  if (excess <= 0.0) return x;
  return axpy(x, -excess, h.normal);
}

Vec project_ball(const ConvexSet::Ball& b, const Vec& x) {
  const Vec d = sub(x, b.center);
  const double r = norm(d);
  if (r <= b.radius) return x;
  return axpy(b.center, b.radius / r, d);
}

Vec project_box(const ConvexSet::Box& b, const Vec& x) {
  Vec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    y[i] = std::clamp(x[i], b.lower[i], b.upper[i]);
  return y;
}

// Dykstra's cyclic projection: converges to the nearest point of the
// intersection (plain alternation only finds a feasible point).
Vec project_intersection(const ConvexSet::Intersection& inter, const Vec& x) {
  const std::size_t k = inter.parts.size();
  Vec z = x;
  std::vector<Vec> increments(k, Vec(x.size(), 0.0));
  for (int iter = 0; iter < Tol::projection_max_iter; ++iter) {
    const Vec z_before = z;
    for (std::size_t i = 0; i < k; ++i) {
      const Vec shifted = add(z, increments[i]);
      const Vec y = project(inter.parts[i], shifted);
      increments[i] = sub(shifted, y);
      z = y;
    }
    if (distance(z, z_before) < Tol::projection_stop) return z;
  }
  double residual = 0.0;
  for (const ConvexSet& part : inter.parts)
    residual = std::max(residual, part.membership_residual(z));
  throw ProjectionError("projection onto intersection did not converge within max_iter",
                        z, residual);
}

bool same_vec(const Vec& a, const Vec& b, double tol = 1e-12) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

// Deterministic unit directions in R^n: uniform angles in 2-D, splitmix-fed
// normalized Gaussians otherwise.
std::vector<Vec> unit_directions(int n, int count) {
  std::vector<Vec> dirs;
  dirs.reserve(static_cast<std::size_t>(count));
  if (n == 1) {
    dirs.push_back({1.0});
    dirs.push_back({-1.0});
    return dirs;
  }
  if (n == 2) {
    for (int i = 0; i < count; ++i) {
      const double a = 2.0 * M_PI * static_cast<double>(i) / count;
      dirs.push_back({std::cos(a), std::sin(a)});
    }
    return dirs;
  }
  std::uint64_t state = 0x9e3779b97f4a7c15ull;
  auto next_unit = [&state]() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z ^= z >> 31;
    return static_cast<double>(z) / static_cast<double>(std::uint64_t(-1)) * 2.0 - 1.0;
  };
  while (dirs.size() < static_cast<std::size_t>(count)) {
    Vec d(n);
    for (int j = 0; j < n; ++j) d[j] = next_unit();
    const double r = norm(d);
    if (r < 1e-6) continue;
    dirs.push_back(scaled(d, 1.0 / r));
  }
  return dirs;
}

// One-sided sampled estimate sup_{x in a} dist(x, b): boundary points of `a`
// obtained by projecting far-away probes back onto it.
double directed_sampled(const ConvexSet& a, const ConvexSet& b, int samples) {
  const Vec anchor = a.anchor_point();
  const double reach = 4.0 * (1.0 + norm(anchor)) + 16.0;
  double worst = 0.0;
  for (const Vec& u : unit_directions(a.dimension(), samples)) {
    const Vec probe = axpy(anchor, reach, u);
    const Vec on_a = project(a, probe);
    worst = std::max(worst, distance(on_a, project(b, on_a)));
  }
  return worst;
}

}  // namespace

ConvexSet ConvexSet::halfspace(Vec normal, double offset) {
  const double r = norm(normal);
  if (!(std::abs(r - 1.0) <= 1e-6) || normal.empty())
    throw std::invalid_argument("halfspace normal must be a unit vector");
  if (std::abs(r - 1.0) > Tol::unit_normal) normal = scaled(normal, 1.0 / r);
  return ConvexSet(Halfspace{std::move(normal), offset});
}

ConvexSet ConvexSet::ball(Vec center, double radius) {
  if (radius < 0.0) throw std::invalid_argument("ball radius must be >= 0");
  if (center.empty()) throw std::invalid_argument("ball center must be nonempty");
  return ConvexSet(Ball{std::move(center), radius});
}

ConvexSet ConvexSet::box(Vec lower, Vec upper) {
  if (lower.size() != upper.size() || lower.empty())
    throw std::invalid_argument("box bounds must have equal nonzero dimension");
  for (std::size_t i = 0; i < lower.size(); ++i)
    if (lower[i] > upper[i]) throw std::invalid_argument("box requires lower <= upper");
  return ConvexSet(Box{std::move(lower), std::move(upper)});
}

ConvexSet ConvexSet::intersection(std::vector<ConvexSet> parts,
                                  std::optional<Vec> feasible_point) {
  if (parts.empty()) throw std::invalid_argument("intersection requires at least one set");
  const int n = parts.front().dimension();
  for (const ConvexSet& p : parts)
    if (p.dimension() != n)
      throw std::invalid_argument("intersection parts must share a dimension");
  return ConvexSet(Intersection{std::move(parts), std::move(feasible_point)});
}

int ConvexSet::dimension() const {
  return std::visit(
      [](const auto& s) -> int {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Halfspace>) return static_cast<int>(s.normal.size());
        if constexpr (std::is_same_v<S, Ball>) return static_cast<int>(s.center.size());
        if constexpr (std::is_same_v<S, Box>) return static_cast<int>(s.lower.size());
        if constexpr (std::is_same_v<S, Intersection>) return s.parts.front().dimension();
      },
      shape_);
}

double ConvexSet::membership_residual(const Vec& x) const {
  return std::visit(
      [&x](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Halfspace>)
          return std::max(0.0, dot(x, s.normal) - s.offset);
        if constexpr (std::is_same_v<S, Ball>)
          return std::max(0.0, distance(x, s.center) - s.radius);
        if constexpr (std::is_same_v<S, Box>) {
          double sum = 0.0;
          for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = std::max({s.lower[i] - x[i], x[i] - s.upper[i], 0.0});
            sum += d * d;
          }
          return std::sqrt(sum);
        }
        if constexpr (std::is_same_v<S, Intersection>) {
          double worst = 0.0;
          for (const ConvexSet& p : s.parts)
            worst = std::max(worst, p.membership_residual(x));
          return worst;
        }
      },
      shape_);
}

bool ConvexSet::contains(const Vec& x, double tol) const {
  return membership_residual(x) <= tol;
}

ConvexSet ConvexSet::translated(const Vec& shift) const {
  return std::visit(
      [&shift](const auto& s) -> ConvexSet {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Halfspace>)
          return ConvexSet::halfspace(s.normal, s.offset + dot(s.normal, shift));
        if constexpr (std::is_same_v<S, Ball>)
          return ConvexSet::ball(add(s.center, shift), s.radius);
        if constexpr (std::is_same_v<S, Box>)
          return ConvexSet::box(add(s.lower, shift), add(s.upper, shift));
        if constexpr (std::is_same_v<S, Intersection>) {
          std::vector<ConvexSet> parts;
          parts.reserve(s.parts.size());
          for (const ConvexSet& p : s.parts) parts.push_back(p.translated(shift));
          std::optional<Vec> fp;
          if (s.feasible_point) fp = add(*s.feasible_point, shift);
          return ConvexSet::intersection(std::move(parts), std::move(fp));
        }
      },
      shape_);
}

std::optional<Vec> ConvexSet::translation_from(const ConvexSet& other) const {
  // Offset v with *this == other + v, when both are the same shape.
  if (const auto* b1 = as_ball()) {
    const auto* b2 = other.as_ball();
    if (b2 && std::abs(b1->radius - b2->radius) <= 1e-12 &&
        b1->center.size() == b2->center.size())
      return sub(b1->center, b2->center);
    return std::nullopt;
  }
  if (const auto* x1 = as_box()) {
    const auto* x2 = other.as_box();
    if (!x2 || x1->lower.size() != x2->lower.size()) return std::nullopt;
    const Vec v = sub(x1->lower, x2->lower);
    if (same_vec(sub(x1->upper, x2->upper), v)) return v;
    return std::nullopt;
  }
  if (const auto* h1 = as_halfspace()) {
    const auto* h2 = other.as_halfspace();
    if (!h2 || !same_vec(h1->normal, h2->normal)) return std::nullopt;
    // Any shift with <n, v> = c1 - c2 works; report the normal one.
    return scaled(h1->normal, h1->offset - h2->offset);
  }
  if (const auto* i1 = as_intersection()) {
    const auto* i2 = other.as_intersection();
    if (!i2 || i1->parts.size() != i2->parts.size()) return std::nullopt;
    std::optional<Vec> v;
    for (std::size_t i = 0; i < i1->parts.size(); ++i) {
      auto vi = i1->parts[i].translation_from(i2->parts[i]);
      if (!vi) return std::nullopt;
      if (i1->parts[i].as_halfspace()) continue;  // offset shift is not unique
      if (v && !same_vec(*v, *vi)) return std::nullopt;
      v = vi;
    }
    return v;
  }
  return std::nullopt;
}

bool ConvexSet::is_bounded() const {
  if (as_halfspace()) return false;
  if (const auto* i = as_intersection()) {
    // Conservative: bounded if some part is bounded.
    for (const ConvexSet& p : i->parts)
      if (p.is_bounded()) return true;
    return false;
  }
  return true;
}

Vec ConvexSet::anchor_point() const {
  return std::visit(
      [this](const auto& s) -> Vec {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Halfspace>) return scaled(s.normal, s.offset);
        if constexpr (std::is_same_v<S, Ball>) return s.center;
        if constexpr (std::is_same_v<S, Box>) {
          Vec mid(s.lower.size());
          for (std::size_t i = 0; i < mid.size(); ++i)
            mid[i] = 0.5 * (s.lower[i] + s.upper[i]);
          return mid;
        }
        if constexpr (std::is_same_v<S, Intersection>) {
          if (s.feasible_point) return *s.feasible_point;
          Vec acc(dimension(), 0.0);
          for (const ConvexSet& p : s.parts) acc = add(acc, p.anchor_point());
          return scaled(acc, 1.0 / static_cast<double>(s.parts.size()));
        }
      },
      shape_);
}

Vec project(const ConvexSet& set, const Vec& x) {
  if (static_cast<int>(x.size()) != set.dimension())
    throw std::invalid_argument("projection point dimension mismatch");
  if (const auto* h = set.as_halfspace()) return project_halfspace(*h, x);
  if (const auto* b = set.as_ball()) return project_ball(*b, x);
  if (const auto* bx = set.as_box()) return project_box(*bx, x);
  return project_intersection(*set.as_intersection(), x);
}

HausdorffEstimate hausdorff(const ConvexSet& a, const ConvexSet& b, int boundary_samples) {
  // Exact paths first: common-shape translates, ball pairs, box pairs,
  // parallel halfspaces.
  if (auto v = a.translation_from(b)) return {norm(*v), true};
  if (const auto* ba = a.as_ball()) {
    if (const auto* bb = b.as_ball())
      return {distance(ba->center, bb->center) + std::abs(ba->radius - bb->radius), true};
  }
  if (const auto* xa = a.as_box()) {
    if (const auto* xb = b.as_box()) {
      // dist(., other box) is convex, so each one-sided sup is attained at a
      // corner.
      const auto corners_sup = [](const ConvexSet::Box& from, const ConvexSet& to) {
        const std::size_t n = from.lower.size();
        double worst = 0.0;
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
          Vec corner(n);
          for (std::size_t i = 0; i < n; ++i)
            corner[i] = (mask >> i) & 1 ? from.upper[i] : from.lower[i];
          worst = std::max(worst, to.membership_residual(corner));
        }
        return worst;
      };
      return {std::max(corners_sup(*xa, b), corners_sup(*xb, a)), true};
    }
  }
  if (const auto* ha = a.as_halfspace()) {
    if (const auto* hb = b.as_halfspace()) {
      if (same_vec(ha->normal, hb->normal))
        return {std::abs(ha->offset - hb->offset), true};
      throw std::domain_error("hausdorff undefined on unbounded pair");
    }
  }
  if (!a.is_bounded() || !b.is_bounded())
    throw std::domain_error("hausdorff undefined on unbounded pair");
  const double est = std::max(directed_sampled(a, b, boundary_samples),
                              directed_sampled(b, a, boundary_samples));
  return {est, false};
}

double vi_residual(const ConvexSet& set, const Vec& x, const Vec& w,
                   std::span<const Vec> probes) {
  if (probes.empty()) throw std::invalid_argument("vi_residual requires probe points");
  if (set.membership_residual(x) > Tol::membership)
    throw std::invalid_argument("vi_residual: x is not in the set");
  double worst = -std::numeric_limits<double>::infinity();
  for (const Vec& y : probes) {
    if (set.membership_residual(y) > Tol::membership)
      throw std::invalid_argument("vi_residual: probe outside the set");
    worst = std::max(worst, -dot(sub(y, x), w));
  }
  return worst;
}

Vec TranslationPath::at(double t) const {
  if (times.empty() || times.size() != offsets.size())
    throw std::invalid_argument("translation path needs matching times and offsets");
  if (t <= times.front()) return offsets.front();
  if (t >= times.back()) return offsets.back();
  std::size_t k = 0;
  while (k + 1 < times.size() && times[k + 1] < t) ++k;
  if (t == times[k + 1]) return offsets[k + 1];
  const double s = (t - times[k]) / (times[k + 1] - times[k]);
  return axpy(offsets[k], s, sub(offsets[k + 1], offsets[k]));
}

MovingConvexSet::MovingConvexSet(std::function<ConvexSet(double)> generator,
                                 double lipschitz_constant, double horizon)
    : generator_(std::move(generator)), lipschitz_(lipschitz_constant), horizon_(horizon) {
  if (!(horizon_ > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (lipschitz_ < 0.0) throw std::invalid_argument("set Lipschitz constant must be >= 0");
}

MovingConvexSet MovingConvexSet::constant(ConvexSet set, double horizon) {
  return MovingConvexSet([s = std::move(set)](double) { return s; }, 0.0, horizon);
}

MovingConvexSet MovingConvexSet::translating(ConvexSet base, TranslationPath path,
                                             double lipschitz_constant, double horizon) {
  return MovingConvexSet(
      [b = std::move(base), p = std::move(path)](double t) { return b.translated(p.at(t)); },
      lipschitz_constant, horizon);
}

ConvexSet MovingConvexSet::at(double t) const {
  if (t < 0.0 || t > horizon_)
    throw std::domain_error("set family queried outside [0, T]");
  return generator_(t);
}

std::vector<std::string> check_set_lipschitz(const MovingConvexSet& ms, int samples) {
  std::vector<std::string> failures;
  const double T = ms.horizon();
  std::vector<double> ts;
  for (int i = 0; i <= samples; ++i) ts.push_back(T * i / samples);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    for (std::size_t j = i + 1; j < ts.size(); ++j) {
      const HausdorffEstimate d = hausdorff(ms.at(ts[i]), ms.at(ts[j]), 64);
      const double budget = (ms.lipschitz_constant() + Tol::lipschitz_slack) *
                            std::abs(ts[j] - ts[i]);
      if (d.value > budget) {
        std::ostringstream os;
        os << "set family violates declared Lipschitz constant between t=" << ts[i]
           << " and t=" << ts[j] << ": hausdorff " << d.value << " > " << budget;
        failures.push_back(os.str());
      }
    }
  }
  return failures;
}

}  // namespace sweepflow
