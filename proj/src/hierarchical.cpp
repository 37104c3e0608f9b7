#include "netrecon/hierarchical.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "netrecon/rng.hpp"

namespace netrecon {

EdgeProbabilityMatrix er_probabilities(Index n, const DensityTarget& target) {
  if (n < 2) throw InvalidArgument("er_probabilities: need n >= 2");
  Matrix p = Matrix::Constant(n, n, target.value());
  p.diagonal().setZero();
  return EdgeProbabilityMatrix(std::move(p));
}

namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

EdgeProbabilityMatrix fit_probabilities(const MarginalVector& m, const DensityTarget& target) {
  const Index n = m.size();
  Vector log_total(n);
  std::vector<bool> active(n);
  for (Index i = 0; i < n; ++i) {
    const double s = m.out(i) + m.in(i);
    active[i] = s > 0.0;
    log_total(i) = active[i] ? std::log(s) : 0.0;
  }
  long included = 0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j && active[i] && active[j]) ++included;
  if (included == 0)
    throw TargetUnreachable("fit_probabilities: no dyads with positive node totals");

  const auto mean_p = [&](double alpha) {
    double s = 0.0;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (i != j && active[i] && active[j])
          s += logistic(alpha + log_total(i) + log_total(j));
    return s / static_cast<double>(included);
  };

  const double d = target.value();
  double lo = -700.0, hi = 700.0;
  if (mean_p(hi) < d - 1e-10 || mean_p(lo) > d + 1e-10)
    throw TargetUnreachable("fit_probabilities: target density out of reach");
  for (int it = 0; it < 120; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (mean_p(mid) < d)
      lo = mid;
    else
      hi = mid;
  }
  const double alpha = 0.5 * (lo + hi);
  if (std::abs(mean_p(alpha) - d) > 1e-10)
    throw TargetUnreachable("fit_probabilities: bisection could not reach the target density");

  Matrix p = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j && active[i] && active[j])
        p(i, j) = logistic(alpha + log_total(i) + log_total(j));
  return EdgeProbabilityMatrix(std::move(p));
}

namespace {

// Exact feasibility of the marginals on a binary support, decided by
// max-flow (source -> rows -> support edges -> columns -> sink).
bool support_admits_marginals(const IntMatrix& z, const Vector& out, const Vector& in) {
  const Index n = out.size();
  const int V = static_cast<int>(2 * n + 2);
  const int S = V - 2, T = V - 1;
  struct Edge {
    int to;
    double cap;
    int rev;
  };
  std::vector<std::vector<Edge>> adj(V);
  const auto add_edge = [&](int a, int b, double cap) {
    adj[a].push_back({b, cap, static_cast<int>(adj[b].size())});
    adj[b].push_back({a, 0.0, static_cast<int>(adj[a].size()) - 1});
  };
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    if (out(i) > 0.0) {
      add_edge(S, static_cast<int>(i), out(i));
      total += out(i);
    }
    if (in(i) > 0.0) add_edge(static_cast<int>(n + i), T, in(i));
  }
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j && z(i, j) != 0 && out(i) > 0.0 && in(j) > 0.0)
        add_edge(static_cast<int>(i), static_cast<int>(n + j),
                 std::numeric_limits<double>::infinity());

  // Dinic
  double flow = 0.0;
  std::vector<int> level(V), iter(V);
  const double eps = 1e-12 * std::max(1.0, total);
  while (true) {
    std::fill(level.begin(), level.end(), -1);
    std::vector<int> queue{S};
    level[S] = 0;
    for (size_t qh = 0; qh < queue.size(); ++qh) {
      const int v = queue[qh];
      for (const Edge& e : adj[v])
        if (e.cap > eps && level[e.to] < 0) {
          level[e.to] = level[v] + 1;
          queue.push_back(e.to);
        }
    }
    if (level[T] < 0) break;
    std::fill(iter.begin(), iter.end(), 0);
    std::function<double(int, double)> dfs = [&](int v, double f) -> double {
      if (v == T) return f;
      for (int& k = iter[v]; k < static_cast<int>(adj[v].size()); ++k) {
        Edge& e = adj[v][k];
        if (e.cap > eps && level[e.to] == level[v] + 1) {
          const double d = dfs(e.to, std::min(f, e.cap));
          if (d > eps) {
            e.cap -= d;
            adj[e.to][e.rev].cap += d;
            return d;
          }
        }
      }
      return 0.0;
    };
    double pushed;
    while ((pushed = dfs(S, std::numeric_limits<double>::infinity())) > eps) flow += pushed;
  }
  return flow >= total - 1e-9 * std::max(1.0, total);
}

// Alternating scaling of the drawn weights to the marginals; returns
// false when the sweep cap is exhausted.
bool scale_to_support(Matrix& w, const Vector& out, const Vector& in, double tol,
                      int max_sweeps) {
  const Index n = out.size();
  for (Index i = 0; i < n; ++i)
    if (out(i) <= 0.0) w.row(i).setZero();
  for (Index j = 0; j < n; ++j)
    if (in(j) <= 0.0) w.col(j).setZero();

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (Index i = 0; i < n; ++i) {
      const double rs = w.row(i).sum();
      if (out(i) > 0.0) {
        if (rs <= 0.0) return false;
        w.row(i) *= out(i) / rs;
      }
    }
    for (Index j = 0; j < n; ++j) {
      const double cs = w.col(j).sum();
      if (in(j) > 0.0) {
        if (cs <= 0.0) return false;
        w.col(j) *= in(j) / cs;
      }
    }
    double dev = 0.0;
    const Vector rs = w.rowwise().sum();
    const Vector cs = w.colwise().sum().transpose();
    for (Index i = 0; i < n; ++i) {
      dev = std::max(dev, std::abs(rs(i) - out(i)) / std::max(1.0, out(i)));
      dev = std::max(dev, std::abs(cs(i) - in(i)) / std::max(1.0, in(i)));
    }
    if (dev < tol) return true;
  }
  return false;
}

std::pair<BinaryStructure, WeightedNetwork> sample_one(const MarginalVector& m,
                                                       const EdgeProbabilityMatrix& p,
                                                       const HierarchicalConfig& cfg,
                                                       std::uint64_t seed) {
  const Index n = m.size();
  const double max_marg = std::max(m.out_sums().maxCoeff(), m.in_sums().maxCoeff());
  const double scale = max_marg > cfg.marginal_scale ? cfg.marginal_scale / max_marg : 1.0;
  const Vector out = m.out_sums() * scale;
  const Vector in = m.in_sums() * scale;
  const double mean_weight =
      out.sum() / std::max(1e-300, cfg.target_density * static_cast<double>(dyad_count(n)));

  Rng rng(seed);
  for (int attempt = 0; attempt < cfg.max_structure_retries; ++attempt) {
    IntMatrix z = IntMatrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (i != j && rng.bernoulli(p.at(i, j))) z(i, j) = 1;

    bool feasible = true;
    for (Index i = 0; i < n && feasible; ++i) {
      if (out(i) > 0.0 && z.row(i).sum() == 0) feasible = false;
      if (in(i) > 0.0 && z.col(i).sum() == 0) feasible = false;
    }
    if (!feasible) continue;
    if (!support_admits_marginals(z, out, in)) continue;

    Matrix w = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (z(i, j) > 0) w(i, j) = rng.exponential(mean_weight);

    if (!scale_to_support(w, out, in, 1e-8, 20000)) continue;

    w /= scale;
    // Drop structure edges that ended up weightless (rows/columns with
    // zero marginals).
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (z(i, j) > 0 && w(i, j) <= 0.0) z(i, j) = 0;
    return {BinaryStructure(std::move(z)), WeightedNetwork(std::move(w))};
  }
  throw StructureInfeasible("sample_network: no feasible structure within the retry budget");
}

}  // namespace

std::pair<BinaryStructure, WeightedNetwork> sample_network(const MarginalVector& m,
                                                           const EdgeProbabilityMatrix& p,
                                                           const HierarchicalConfig& cfg) {
  if (p.size() != m.size()) throw DimensionMismatch("sample_network: size mismatch");
  return sample_one(m, p, cfg, cfg.rng_seed);
}

std::vector<std::pair<BinaryStructure, WeightedNetwork>> sample_ensemble(
    const MarginalVector& m, const EdgeProbabilityMatrix& p, const HierarchicalConfig& cfg) {
  if (cfg.n_samples < 1) throw InvalidArgument("sample_ensemble: need n_samples >= 1");
  std::vector<std::pair<BinaryStructure, WeightedNetwork>> samples;
  samples.reserve(cfg.n_samples);
  for (int s = 0; s < cfg.n_samples; ++s)
    samples.push_back(sample_one(m, p, cfg, derive_seed(cfg.rng_seed, "hier-sample", s)));
  return samples;
}

EnsemblePointEstimate ensemble_point_estimate(
    const std::vector<std::pair<BinaryStructure, WeightedNetwork>>& samples) {
  if (samples.empty()) throw InvalidArgument("ensemble_point_estimate: need at least one sample");
  const Index n = samples.front().first.size();
  Matrix freq = Matrix::Zero(n, n);
  Matrix vals = Matrix::Zero(n, n);
  for (const auto& [z, w] : samples) {
    freq += z.adjacency().cast<double>();
    vals += w.values();
  }
  freq /= static_cast<double>(samples.size());
  vals /= static_cast<double>(samples.size());
  return {std::move(freq), std::move(vals)};
}

}  // namespace netrecon
