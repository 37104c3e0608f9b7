#include "netrecon/mindens.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "netrecon/rng.hpp"

namespace netrecon {

long mindens_lower_bound(const MarginalVector& m) {
  long rows = 0, cols = 0;
  for (Index i = 0; i < m.size(); ++i) {
    if (m.out(i) > 0.0) ++rows;
    if (m.in(i) > 0.0) ++cols;
  }
  return std::max(rows, cols);
}

namespace {

struct Cell {
  Index i, j;
};

double rel_deviation(const Matrix& w, const MarginalVector& m) {
  double dev = 0.0;
  const Vector rs = w.rowwise().sum();
  const Vector cs = w.colwise().sum().transpose();
  for (Index i = 0; i < m.size(); ++i) {
    dev = std::max(dev, std::abs(rs(i) - m.out(i)) / std::max(1.0, m.out(i)));
    dev = std::max(dev, std::abs(cs(i) - m.in(i)) / std::max(1.0, m.in(i)));
  }
  return dev;
}

// Greedy feasible start: repeatedly send the largest remaining
// out-residual to the largest remaining in-residual. When only the
// diagonal pairing is left, reroute the residual through an existing edge.
Matrix greedy_start(const MarginalVector& m) {
  const Index n = m.size();
  Matrix w = Matrix::Zero(n, n);
  Vector ro = m.out_sums();
  Vector ri = m.in_sums();
  const double eps = 1e-12 * std::max(1.0, m.total());

  for (long guard = 0; guard < 8 * n * n + 8; ++guard) {
    Index bi = -1, bj = -1;
    double best = 0.0;
    for (Index i = 0; i < n; ++i) {
      if (ro(i) <= eps) continue;
      for (Index j = 0; j < n; ++j) {
        if (i == j || ri(j) <= eps) continue;
        const double v = std::min(ro(i), ri(j));
        if (v > best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    }
    if (bi >= 0) {
      w(bi, bj) += best;
      ro(bi) -= best;
      ri(bj) -= best;
      continue;
    }
    // Residual left only on one node's own row and column. Reroute it
    // through existing edges off that node, splitting across donors.
    Index a = -1;
    for (Index i = 0; i < n; ++i)
      if (ro(i) > eps) a = i;
    if (a < 0) return w;  // done
    double r = ro(a);
    if (std::abs(ri(a) - r) > eps)
      throw NoFeasibleStart("mindens: marginals admit no diagonal-free network");
    for (Index k = 0; k < n && r > eps; ++k) {
      if (k == a) continue;
      for (Index l = 0; l < n && r > eps; ++l) {
        if (l == a || l == k || w(k, l) <= 0.0) continue;
        const double q = std::min(r, w(k, l));
        w(k, l) -= q;
        w(k, a) += q;
        w(a, l) += q;
        r -= q;
      }
    }
    if (r > eps)
      throw NoFeasibleStart("mindens: residual cannot be rerouted off the diagonal");
    ro(a) = 0.0;
    ri(a) = 0.0;
  }
  throw NoFeasibleStart("mindens: greedy construction did not terminate");
}

long edge_count(const Matrix& w) {
  long c = 0;
  for (Index i = 0; i < w.rows(); ++i)
    for (Index j = 0; j < w.cols(); ++j)
      if (i != j && w(i, j) > 0.0) ++c;
  return c;
}

std::vector<Cell> edge_list(const Matrix& w) {
  std::vector<Cell> e;
  for (Index i = 0; i < w.rows(); ++i)
    for (Index j = 0; j < w.cols(); ++j)
      if (i != j && w(i, j) > 0.0) e.push_back({i, j});
  return e;
}

// Applies the alternating-cycle transfer sources[k] -> cross cells
// (i_k, j_{k+1}); marginals are preserved exactly. Returns the edge-count
// change.
long apply_cycle(Matrix& w, const std::vector<Cell>& sources, double t) {
  long delta = 0;
  const size_t k = sources.size();
  for (size_t a = 0; a < k; ++a) {
    const Cell& s = sources[a];
    w(s.i, s.j) -= t;
    if (w(s.i, s.j) <= 0.0) {
      w(s.i, s.j) = 0.0;
      --delta;
    }
  }
  for (size_t a = 0; a < k; ++a) {
    const Index i = sources[a].i;
    const Index j = sources[(a + 1) % k].j;
    if (w(i, j) <= 0.0) ++delta;
    w(i, j) += t;
  }
  return delta;
}

bool cycle_valid(const std::vector<Cell>& sources) {
  const size_t k = sources.size();
  for (size_t a = 0; a < k; ++a)
    for (size_t b = a + 1; b < k; ++b)
      if (sources[a].i == sources[b].i || sources[a].j == sources[b].j) return false;
  for (size_t a = 0; a < k; ++a)
    if (sources[a].i == sources[(a + 1) % k].j) return false;  // cross cell on diagonal
  return true;
}

double cycle_transfer(const Matrix& w, const std::vector<Cell>& sources) {
  double t = std::numeric_limits<double>::infinity();
  for (const Cell& s : sources) t = std::min(t, w(s.i, s.j));
  return t;
}

// Searches for a cycle that removes the full mass of `target`. Prefers
// 4-cell cycles, falls back to 6-cell ones; enumerates completions when
// the edge set is small and samples them otherwise.
bool find_deleting_cycle(const Matrix& w, const std::vector<Cell>& edges, const Cell& target,
                         Rng& rng, std::vector<Cell>& out_cycle) {
  const double need = w(target.i, target.j);
  std::vector<std::vector<Cell>> options;

  for (const Cell& e : edges) {
    if (e.i == target.i && e.j == target.j) continue;
    std::vector<Cell> cyc{target, e};
    if (cycle_valid(cyc) && w(e.i, e.j) >= need) options.push_back(std::move(cyc));
  }
  if (options.empty()) {
    const size_t e_count = edges.size();
    if (e_count * e_count <= 1600) {
      for (size_t a = 0; a < e_count; ++a)
        for (size_t b = 0; b < e_count; ++b) {
          if (a == b) continue;
          std::vector<Cell> cyc{target, edges[a], edges[b]};
          if (cycle_valid(cyc) && std::min(w(edges[a].i, edges[a].j),
                                           w(edges[b].i, edges[b].j)) >= need)
            options.push_back(std::move(cyc));
        }
    } else {
      for (int trial = 0; trial < 400; ++trial) {
        const Cell& a = edges[rng.below(e_count)];
        const Cell& b = edges[rng.below(e_count)];
        std::vector<Cell> cyc{target, a, b};
        if (cycle_valid(cyc) && std::min(w(a.i, a.j), w(b.i, b.j)) >= need) {
          options.push_back(std::move(cyc));
          break;
        }
      }
    }
  }
  if (options.empty()) return false;

  // Prefer completions that create the fewest new edges.
  long best_delta = std::numeric_limits<long>::max();
  std::vector<size_t> best;
  for (size_t o = 0; o < options.size(); ++o) {
    Matrix probe = w;
    const long d = apply_cycle(probe, options[o], cycle_transfer(w, options[o]));
    if (d < best_delta) {
      best_delta = d;
      best = {o};
    } else if (d == best_delta) {
      best.push_back(o);
    }
  }
  out_cycle = options[best[rng.below(best.size())]];
  return true;
}

Matrix run_chain(const MarginalVector& m, const MindensConfig& cfg, Matrix w,
                 std::uint64_t seed) {
  const Index n = m.size();
  Rng rng(seed);
  Matrix best = w;
  long best_count = edge_count(w);
  const long window = static_cast<long>(n) * static_cast<long>(n);
  long since_delete = 0;

  for (int step = 0; step < cfg.max_steps && since_delete < window; ++step) {
    std::vector<Cell> edges = edge_list(w);
    if (edges.size() < 2) break;
    ++since_delete;

    const bool directed = rng.uniform() < 0.8;
    std::vector<Cell> cycle;
    if (directed) {
      const Cell target = edges[rng.below(edges.size())];
      if (!find_deleting_cycle(w, edges, target, rng, cycle)) continue;
    } else {
      const size_t k = rng.uniform() < 0.5 && edges.size() >= 3 ? 3 : 2;
      cycle.clear();
      for (size_t a = 0; a < k; ++a) cycle.push_back(edges[rng.below(edges.size())]);
      if (!cycle_valid(cycle)) continue;
    }

    const double t = cycle_transfer(w, cycle);
    if (!(t > 0.0)) continue;
    Matrix cand = w;
    const long delta = apply_cycle(cand, cycle, t);
    bool accept = delta <= 0;
    if (!accept && cfg.temperature > 0.0)
      accept = rng.uniform() < std::exp(-static_cast<double>(delta) / cfg.temperature);
    if (!accept) continue;
    w = std::move(cand);
    if (delta < 0) since_delete = 0;
    const long count = edge_count(w);
    if (count < best_count) {
      best_count = count;
      best = w;
    }
  }
  return best;
}

}  // namespace

std::vector<WeightedNetwork> mindens_run(const MarginalVector& m, const MindensConfig& cfg) {
  if (cfg.restarts < 1) throw InvalidArgument("mindens: need restarts >= 1");
  if (!(cfg.marginal_tolerance > 0.0))
    throw InvalidArgument("mindens: marginal_tolerance must be > 0");

  const Matrix start = greedy_start(m);
  if (rel_deviation(start, m) > cfg.marginal_tolerance)
    throw NoFeasibleStart("mindens: greedy start misses the marginals beyond tolerance");

  std::vector<WeightedNetwork> ensemble;
  ensemble.reserve(cfg.restarts);
  for (int r = 0; r < cfg.restarts; ++r) {
    Matrix w = run_chain(m, cfg, start, derive_seed(cfg.rng_seed, "mindens-chain", r));
    ensemble.emplace_back(std::move(w));
  }
  return ensemble;
}

const WeightedNetwork& mindens_best(const std::vector<WeightedNetwork>& ensemble,
                                    const MarginalVector& m) {
  if (ensemble.empty()) throw InvalidArgument("mindens_best: empty ensemble");
  const auto squared_deviation = [&](const Matrix& w) {
    double s = 0.0;
    const Vector rs = w.rowwise().sum();
    const Vector cs = w.colwise().sum().transpose();
    for (Index i = 0; i < m.size(); ++i) {
      s += (rs(i) - m.out(i)) * (rs(i) - m.out(i));
      s += (cs(i) - m.in(i)) * (cs(i) - m.in(i));
    }
    return s;
  };
  size_t best = 0;
  long best_count = std::numeric_limits<long>::max();
  double best_dev = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < ensemble.size(); ++k) {
    const long count = edge_count(ensemble[k].values());
    const double dev = squared_deviation(ensemble[k].values());
    if (count < best_count || (count == best_count && dev < best_dev)) {
      best = k;
      best_count = count;
      best_dev = dev;
    }
  }
  return ensemble[best];
}

}  // namespace netrecon
