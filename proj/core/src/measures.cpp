#include "sweepflow/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sweepflow {

namespace {

bool positions_match(const Vec& a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > Tol::atom_merge) return false;
  return true;
}

// Coalesce atoms with identical positions (within the merge tolerance).
// Lexicographic sort groups exact collisions adjacently; weights accumulate
// onto the first representative. Deterministic.
std::vector<Atom> merged(std::vector<Atom> atoms) {
  std::vector<std::size_t> order(atoms.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&atoms](std::size_t a, std::size_t b) {
    if (atoms[a].position != atoms[b].position)
      return atoms[a].position < atoms[b].position;
    return a < b;
  });
  std::vector<Atom> out;
  out.reserve(atoms.size());
  for (std::size_t idx : order) {
    if (!out.empty() && positions_match(out.back().position, atoms[idx].position))
      out.back().weight += atoms[idx].weight;
    else
      out.push_back(std::move(atoms[idx]));
  }
  return out;
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(int dimension, std::vector<Atom> atoms)
    : dimension_(dimension) {
  if (dimension_ <= 0) throw std::invalid_argument("measure dimension must be positive");
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const Atom& a = atoms[i];
    if (static_cast<int>(a.position.size()) != dimension_)
      throw std::invalid_argument("atom dimension mismatch");
    if (!all_finite(a.position) || !std::isfinite(a.weight)) {
      std::ostringstream os;
      os << "atom " << i << " has a non-finite coordinate or weight";
      throw std::invalid_argument(os.str());
    }
    if (a.weight < 0.0) throw std::invalid_argument("atom weights must be >= 0");
  }
  atoms_ = merged(std::move(atoms));
  total_mass_ = 0.0;
  for (const Atom& a : atoms_) total_mass_ += a.weight;
}

DiscreteMeasure DiscreteMeasure::dirac(Vec point, double mass) {
  const int n = static_cast<int>(point.size());
  return DiscreteMeasure(n, {Atom{std::move(point), mass}});
}

DiscreteMeasure DiscreteMeasure::uniform_grid(const Vec& lower, const Vec& upper,
                                              int cells_per_axis) {
  if (cells_per_axis < 1) throw std::invalid_argument("cells_per_axis must be >= 1");
  if (lower.size() != upper.size() || lower.empty())
    throw std::invalid_argument("grid region bounds must have equal nonzero dimension");
  const int n = static_cast<int>(lower.size());
  for (int i = 0; i < n; ++i)
    if (!(upper[i] > lower[i]))
      throw std::invalid_argument("grid region box is degenerate");
  std::size_t count = 1;
  for (int i = 0; i < n; ++i) count *= static_cast<std::size_t>(cells_per_axis);
  const double w = 1.0 / static_cast<double>(count);

  std::vector<Atom> atoms;
  atoms.reserve(count);
  std::vector<int> cell(n, 0);
  while (true) {
    Vec p(n);
    for (int i = 0; i < n; ++i) {
      const double width = (upper[i] - lower[i]) / cells_per_axis;
      p[i] = lower[i] + (cell[i] + 0.5) * width;
    }
    atoms.push_back(Atom{std::move(p), w});
    int axis = n - 1;
    while (axis >= 0 && ++cell[axis] == cells_per_axis) cell[axis--] = 0;
    if (axis < 0) break;
  }
  return DiscreteMeasure(n, std::move(atoms));
}

DiscreteMeasure pushforward(const DiscreteMeasure& mu,
                            const std::function<Vec(const Vec&)>& g) {
  std::vector<Atom> atoms;
  atoms.reserve(mu.atoms().size());
  for (std::size_t i = 0; i < mu.atoms().size(); ++i) {
    Vec image = g(mu.atoms()[i].position);
    if (!all_finite(image)) {
      std::ostringstream os;
      os << "pushforward map produced a non-finite value at atom " << i;
      throw std::runtime_error(os.str());
    }
    atoms.push_back(Atom{std::move(image), mu.atoms()[i].weight});
  }
  return DiscreteMeasure(mu.dimension(), std::move(atoms));
}

double moment(const DiscreteMeasure& mu, const MultiIndex& idx, double t) {
  if (static_cast<int>(idx.space_powers.size()) != mu.dimension())
    throw std::invalid_argument("moment index dimension mismatch");
  double sum = 0.0;
  for (const Atom& a : mu.atoms()) {
    double term = a.weight;
    for (std::size_t i = 0; i < a.position.size(); ++i)
      term *= ipow(a.position[i], idx.space_powers[i]);
    sum += term;
  }
  return ipow(t, idx.time_power) * sum;
}

}  // namespace sweepflow
