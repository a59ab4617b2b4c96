#include "sweepflow/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace sweepflow {

namespace {

double pair_cost(const Vec& x, const Vec& y, int p) {
  const double d = distance(x, y);
  return p == 1 ? d : d * d;
}

void validate_pair(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int p) {
  if (p != 1 && p != 2) throw std::invalid_argument("cost exponent must be 1 or 2");
  if (mu.dimension() != nu.dimension())
    throw std::invalid_argument("measures must share a dimension");
  if (mu.atoms().empty() || nu.atoms().empty())
    throw std::invalid_argument("empty support");
  if (std::abs(mu.total_mass() - nu.total_mass()) > Tol::marginal)
    throw std::invalid_argument("unbalanced");
}

// --- transportation simplex -------------------------------------------------
//
// Basis = spanning tree over m source + n target nodes, one basic cell per
// arc. Bland's rule on the entering cell (first negative reduced cost in
// row-major order) and on the leaving arc (first minimizer along the cycle)
// rules out cycling under degeneracy.
class TransportSimplex {
 public:
  TransportSimplex(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int p)
      : m_(static_cast<int>(mu.atoms().size())),
        n_(static_cast<int>(nu.atoms().size())),
        cost_(static_cast<std::size_t>(m_) * n_) {
    double max_cost = 0.0;
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < n_; ++j) {
        const double c = pair_cost(mu.atoms()[i].position, nu.atoms()[j].position, p);
        cost_[at(i, j)] = c;
        max_cost = std::max(max_cost, c);
      }
    reduced_tol_ = 1e-12 * (1.0 + max_cost);

    std::vector<double> supply(m_), demand(n_);
    for (int i = 0; i < m_; ++i) supply[i] = mu.atoms()[i].weight;
    for (int j = 0; j < n_; ++j) demand[j] = nu.atoms()[j].weight;
    northwest_corner(supply, demand);
  }

  void solve() {
    const long max_pivots = 2000L * (m_ + n_) * (m_ + n_) + 10000L;
    for (long pivot = 0; pivot < max_pivots; ++pivot) {
      compute_potentials();
      int ei = -1, ej = -1;
      for (int i = 0; i < m_ && ei < 0; ++i)
        for (int j = 0; j < n_; ++j)
          if (!basic_[at(i, j)] && cost_[at(i, j)] - u_[i] - v_[j] < -reduced_tol_) {
            ei = i;
            ej = j;
            break;
          }
      if (ei < 0) return;  // optimal
      pivot_on(ei, ej);
    }
    throw std::runtime_error("transportation simplex exceeded its pivot budget");
  }

  double objective() const {
    double obj = 0.0;
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < n_; ++j)
        if (basic_[at(i, j)]) obj += flow_[at(i, j)] * cost_[at(i, j)];
    return obj;
  }

  std::vector<PlanEntry> plan_entries() const {
    std::vector<PlanEntry> entries;
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < n_; ++j)
        if (basic_[at(i, j)] && flow_[at(i, j)] > Tol::plan_mass_floor)
          entries.push_back({i, j, flow_[at(i, j)]});
    return entries;
  }

 private:
  std::size_t at(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }

  void northwest_corner(std::vector<double> supply, std::vector<double> demand) {
    flow_.assign(static_cast<std::size_t>(m_) * n_, 0.0);
    basic_.assign(static_cast<std::size_t>(m_) * n_, false);
    const double tiny = 1e-15 * (1.0 + std::accumulate(supply.begin(), supply.end(), 0.0));
    int i = 0, j = 0;
    while (true) {
      const double t = std::min(supply[i], demand[j]);
      flow_[at(i, j)] = t;
      basic_[at(i, j)] = true;
      supply[i] -= t;
      demand[j] -= t;
      if (i == m_ - 1 && j == n_ - 1) break;
      if (supply[i] <= tiny && i < m_ - 1)
        ++i;
      else
        ++j;
    }
  }

  // Solve u_i + v_j = c_ij over the basis tree (u_0 = 0) by BFS.
  void compute_potentials() {
    u_.assign(m_, 0.0);
    v_.assign(n_, 0.0);
    std::vector<char> known_u(m_, 0), known_v(n_, 0);
    known_u[0] = 1;
    std::vector<int> queue{0};  // encoded: source i, or m_ + target j
    while (!queue.empty()) {
      const int node = queue.back();
      queue.pop_back();
      if (node < m_) {
        const int i = node;
        for (int j = 0; j < n_; ++j)
          if (basic_[at(i, j)] && !known_v[j]) {
            v_[j] = cost_[at(i, j)] - u_[i];
            known_v[j] = 1;
            queue.push_back(m_ + j);
          }
      } else {
        const int j = node - m_;
        for (int i = 0; i < m_; ++i)
          if (basic_[at(i, j)] && !known_u[i]) {
            u_[i] = cost_[at(i, j)] - v_[j];
            known_u[i] = 1;
            queue.push_back(i);
          }
      }
    }
  }

  // Unique alternating cycle created by the entering cell: find the tree path
  // from source ei to target ej, then shift flow around it.
  void pivot_on(int ei, int ej) {
    const int nodes = m_ + n_;
    std::vector<int> parent(nodes, -1), parent_arc(nodes, -1);
    std::vector<char> seen(nodes, 0);
    std::vector<int> stack{ei};
    seen[ei] = 1;
    while (!stack.empty()) {
      const int node = stack.back();
      stack.pop_back();
      if (node == m_ + ej) break;
      if (node < m_) {
        const int i = node;
        for (int j = 0; j < n_; ++j)
          if (basic_[at(i, j)] && !seen[m_ + j]) {
            seen[m_ + j] = 1;
            parent[m_ + j] = node;
            parent_arc[m_ + j] = static_cast<int>(at(i, j));
            stack.push_back(m_ + j);
          }
      } else {
        const int j = node - m_;
        for (int i = 0; i < m_; ++i)
          if (basic_[at(i, j)] && !seen[i]) {
            seen[i] = 1;
            parent[i] = node;
            parent_arc[i] = static_cast<int>(at(i, j));
            stack.push_back(i);
          }
      }
    }
    if (!seen[m_ + ej]) throw std::runtime_error("basis lost tree connectivity");

    // Path arcs from target ej back to source ei; odd positions (0-based even
    // index = first arc adjacent to ej) receive -theta? Orient explicitly:
    // walking ei -> ... -> ej, arcs alternate +,-,+,... after the entering
    // arc, so collect the path, then mark signs.
    std::vector<int> path_arcs;
    for (int node = m_ + ej; node != ei; node = parent[node])
      path_arcs.push_back(parent_arc[node]);
    std::reverse(path_arcs.begin(), path_arcs.end());  // now ei -> ej order

    // Entering arc (ei,ej) is +; the path ei->...->ej closes the cycle, with
    // signs -,+,-,... along it (first path arc leaves source ei).
    double theta = std::numeric_limits<double>::infinity();
    int leaving = -1;
    for (std::size_t k = 0; k < path_arcs.size(); ++k) {
      if (k % 2 == 0) {  // minus arc
        const double f = flow_[static_cast<std::size_t>(path_arcs[k])];
        if (f < theta || (f == theta && path_arcs[k] < leaving)) {
          theta = f;
          leaving = path_arcs[k];
        }
      }
    }
    if (leaving < 0) throw std::runtime_error("degenerate pivot found no leaving arc");

    for (std::size_t k = 0; k < path_arcs.size(); ++k) {
      const auto arc = static_cast<std::size_t>(path_arcs[k]);
      flow_[arc] += (k % 2 == 0 ? -theta : theta);
    }
    const auto enter = at(ei, ej);
    flow_[enter] = theta;
    basic_[enter] = true;
    basic_[static_cast<std::size_t>(leaving)] = false;
    flow_[static_cast<std::size_t>(leaving)] = 0.0;
  }

  int m_, n_;
  std::vector<double> cost_, flow_, u_, v_;
  std::vector<char> basic_;
  double reduced_tol_ = 0.0;
};

// --- brute-force oracle -----------------------------------------------------

bool equal_weights(const DiscreteMeasure& mu) {
  const double w0 = mu.atoms().front().weight;
  for (const Atom& a : mu.atoms())
    if (std::abs(a.weight - w0) > 1e-12 * (1.0 + std::abs(w0))) return false;
  return true;
}

double permutation_optimum(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int p) {
  const int n = static_cast<int>(mu.atoms().size());
  const double w = mu.atoms().front().weight;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (int i = 0; i < n; ++i)
      total += w * pair_cost(mu.atoms()[i].position, nu.atoms()[perm[i]].position, p);
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Enumerate spanning trees of K_{m,n} by DFS over arcs with union-find
// pruning; each tree determines one basic solution by leaf elimination.
class TreeEnumerator {
 public:
  TreeEnumerator(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int p)
      : m_(static_cast<int>(mu.atoms().size())),
        n_(static_cast<int>(nu.atoms().size())) {
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < n_; ++j)
        arcs_.push_back({i, m_ + j,
                         pair_cost(mu.atoms()[i].position, nu.atoms()[j].position, p)});
    supply_.resize(m_ + n_);
    for (int i = 0; i < m_; ++i) supply_[i] = mu.atoms()[i].weight;
    for (int j = 0; j < n_; ++j) supply_[m_ + j] = -nu.atoms()[j].weight;
  }

  double run() {
    chosen_.clear();
    parent_.resize(m_ + n_);
    std::iota(parent_.begin(), parent_.end(), 0);
    rank_.assign(m_ + n_, 0);
    best_ = std::numeric_limits<double>::infinity();
    descend(0);
    return best_;
  }

 private:
  struct Arc {
    int a, b;
    double cost;
  };

  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }

  void descend(std::size_t next_arc) {
    const int need = m_ + n_ - 1;
    if (static_cast<int>(chosen_.size()) == need) {
      evaluate();
      return;
    }
    const int remaining_slots = need - static_cast<int>(chosen_.size());
    if (arcs_.size() - next_arc < static_cast<std::size_t>(remaining_slots)) return;
    for (std::size_t k = next_arc; k + remaining_slots <= arcs_.size(); ++k) {
      const int ra = find(arcs_[k].a), rb = find(arcs_[k].b);
      if (ra == rb) continue;
      // Union with rollback.
      const auto saved_parent = parent_;
      const auto saved_rank = rank_;
      if (rank_[ra] < rank_[rb])
        parent_[ra] = rb;
      else if (rank_[ra] > rank_[rb])
        parent_[rb] = ra;
      else {
        parent_[rb] = ra;
        ++rank_[ra];
      }
      chosen_.push_back(static_cast<int>(k));
      descend(k + 1);
      chosen_.pop_back();
      parent_ = saved_parent;
      rank_ = saved_rank;
    }
  }

  // Flows on a spanning tree are unique: peel leaves, pushing each node's
  // accumulated balance through its last incident arc.
  void evaluate() {
    const int nodes = m_ + n_;
    std::vector<int> degree(nodes, 0);
    std::vector<std::vector<int>> incident(nodes);
    for (int arc_id : chosen_) {
      const Arc& arc = arcs_[static_cast<std::size_t>(arc_id)];
      ++degree[arc.a];
      ++degree[arc.b];
      incident[arc.a].push_back(arc_id);
      incident[arc.b].push_back(arc_id);
    }
    std::vector<double> balance = supply_;
    std::vector<char> done_arc(arcs_.size(), 0), done_node(nodes, 0);
    std::vector<int> leaves;
    for (int v = 0; v < nodes; ++v)
      if (degree[v] == 1) leaves.push_back(v);

    double total = 0.0;
    for (int processed = 0; processed + 1 < nodes; ++processed) {
      if (leaves.empty()) return;  // disconnected (should not happen)
      const int v = leaves.back();
      leaves.pop_back();
      done_node[v] = 1;
      int arc_id = -1;
      for (int cand : incident[v])
        if (!done_arc[static_cast<std::size_t>(cand)]) {
          arc_id = cand;
          break;
        }
      if (arc_id < 0) return;
      const Arc& arc = arcs_[static_cast<std::size_t>(arc_id)];
      const int other = arc.a == v ? arc.b : arc.a;
      // Flow from source side to target side must be >= 0 for feasibility.
      const double shipped = arc.a == v ? balance[v] : -balance[v];
      if (shipped < -1e-12) return;  // infeasible basic solution, not a vertex
      total += std::max(shipped, 0.0) * arc.cost;
      if (total >= best_) return;  // cost can only grow
      balance[other] += balance[v];
      balance[v] = 0.0;
      done_arc[static_cast<std::size_t>(arc_id)] = 1;
      if (--degree[other] == 1 && !done_node[other]) leaves.push_back(other);
      degree[v] = 0;
    }
    best_ = std::min(best_, total);
  }

  int m_, n_;
  std::vector<Arc> arcs_;
  std::vector<double> supply_;
  std::vector<int> chosen_, parent_, rank_;
  double best_ = 0.0;
};

double tree_count(int m, int n) {
  // Spanning trees of K_{m,n}: m^(n-1) * n^(m-1).
  return std::pow(static_cast<double>(m), n - 1) * std::pow(static_cast<double>(n), m - 1);
}

}  // namespace

TransportResult kantorovich(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int p) {
  validate_pair(mu, nu, p);
  TransportSimplex simplex(mu, nu, p);
  simplex.solve();
  const double obj = simplex.objective();
  const double dist = p == 1 ? obj : std::sqrt(std::max(obj, 0.0));
  TransportPlan plan;
  plan.pairs = simplex.plan_entries();
  plan.cost_exponent = p;
  plan.cost = dist;
  return {dist, std::move(plan)};
}

double brute_force_w(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int p) {
  validate_pair(mu, nu, p);
  const int m = static_cast<int>(mu.atoms().size());
  const int n = static_cast<int>(nu.atoms().size());
  if (m > 8 || n > 8) throw std::invalid_argument("support too large");
  double obj = 0.0;
  if (m == n && equal_weights(mu) && equal_weights(nu) &&
      std::abs(mu.atoms().front().weight - nu.atoms().front().weight) < 1e-12) {
    obj = permutation_optimum(mu, nu, p);
  } else {
    if (tree_count(m, n) > 5e6) throw std::invalid_argument("support too large");
    obj = TreeEnumerator(mu, nu, p).run();
  }
  return p == 1 ? obj : std::sqrt(std::max(obj, 0.0));
}

double w1_1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dimension() != 1 || nu.dimension() != 1)
    throw std::invalid_argument("w1_1d requires dimension-1 measures");
  if (std::abs(mu.total_mass() - nu.total_mass()) > Tol::marginal)
    throw std::invalid_argument("unbalanced");

  struct Jump {
    double x;
    double dmu;
    double dnu;
  };
  std::vector<Jump> jumps;
  jumps.reserve(mu.atoms().size() + nu.atoms().size());
  for (const Atom& a : mu.atoms()) jumps.push_back({a.position[0], a.weight, 0.0});
  for (const Atom& a : nu.atoms()) jumps.push_back({a.position[0], 0.0, a.weight});
  std::sort(jumps.begin(), jumps.end(),
            [](const Jump& a, const Jump& b) { return a.x < b.x; });

  double integral = 0.0, fmu = 0.0, fnu = 0.0;
  for (std::size_t k = 0; k < jumps.size(); ++k) {
    if (k > 0) integral += std::abs(fmu - fnu) * (jumps[k].x - jumps[k - 1].x);
    fmu += jumps[k].dmu;
    fnu += jumps[k].dnu;
  }
  return integral;
}

DiscreteMeasure mccann_interpolate(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                   const TransportPlan& plan, double s) {
  if (s < 0.0 || s > 1.0) throw std::invalid_argument("interpolation fraction outside [0,1]");
  std::vector<double> row(mu.atoms().size(), 0.0), col(nu.atoms().size(), 0.0);
  for (const PlanEntry& e : plan.pairs) {
    if (e.source < 0 || e.source >= static_cast<int>(mu.atoms().size()) ||
        e.target < 0 || e.target >= static_cast<int>(nu.atoms().size()))
      throw std::invalid_argument("plan does not couple the given measures");
    row[static_cast<std::size_t>(e.source)] += e.mass;
    col[static_cast<std::size_t>(e.target)] += e.mass;
  }
  for (std::size_t i = 0; i < row.size(); ++i)
    if (std::abs(row[i] - mu.atoms()[i].weight) > Tol::marginal)
      throw std::invalid_argument("plan does not couple the given measures");
  for (std::size_t j = 0; j < col.size(); ++j)
    if (std::abs(col[j] - nu.atoms()[j].weight) > Tol::marginal)
      throw std::invalid_argument("plan does not couple the given measures");

  std::vector<Atom> atoms;
  atoms.reserve(plan.pairs.size());
  for (const PlanEntry& e : plan.pairs) {
    const Vec& x = mu.atoms()[static_cast<std::size_t>(e.source)].position;
    const Vec& y = nu.atoms()[static_cast<std::size_t>(e.target)].position;
    Vec z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = (1.0 - s) * x[i] + s * y[i];
    atoms.push_back(Atom{std::move(z), e.mass});
  }
  return DiscreteMeasure(mu.dimension(), std::move(atoms));
}

}  // namespace sweepflow
