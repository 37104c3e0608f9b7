#include "netrecon/lasso.hpp"

#include <cmath>

#include "netrecon/core.hpp"

namespace netrecon {

double lasso_tau_max(const MarginalVector& m) {
  const Index n = m.size();
  double best = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j) best = std::max(best, m.out(i) + m.in(j));
  return 2.0 * best;
}

std::vector<double> lasso_default_grid(const MarginalVector& m, int points) {
  const double hi = lasso_tau_max(m);
  const double lo = 1e-6 * hi;
  std::vector<double> grid(points);
  for (int k = 0; k < points; ++k) {
    const double t = points == 1 ? 1.0 : static_cast<double>(k) / (points - 1);
    grid[k] = lo * std::pow(hi / lo, t);
  }
  return grid;
}

namespace {

Matrix lasso_sweep(const MarginalVector& m, double tau, double tol, int max_iter, Matrix mu,
                   std::vector<double>* objective_trace = nullptr) {
  const Index n = m.size();
  Vector row_res = m.out_sums() - mu.rowwise().sum();
  Vector col_res = m.in_sums() - mu.colwise().sum().transpose();
  const double scale = std::max(1.0, std::max(m.out_sums().maxCoeff(), m.in_sums().maxCoeff()));

  for (int sweep = 0; sweep < max_iter; ++sweep) {
    double max_change = 0.0;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        if (i == j) continue;
        const double old = mu(i, j);
        const double r = row_res(i) + old;
        const double c = col_res(j) + old;
        const double next = std::max(0.0, 0.5 * (r + c - 0.5 * tau));
        if (next != old) {
          mu(i, j) = next;
          row_res(i) += old - next;
          col_res(j) += old - next;
          max_change = std::max(max_change, std::abs(next - old));
        }
      }
    if (objective_trace) {
      double quad = 0.0;
      for (Index i = 0; i < n; ++i)
        quad += row_res(i) * row_res(i) + col_res(i) * col_res(i);
      objective_trace->push_back(quad + tau * mu.sum());
    }
    if (max_change < tol * scale) return mu;
  }
  throw NonConvergence("lasso: coordinate descent did not converge", 0.0);
}

}  // namespace

Matrix lasso_fit(const MarginalVector& m, double tau, double tol, int max_iter,
                 std::vector<double>* objective_trace) {
  if (tau < 0.0) throw InvalidArgument("lasso: tau must be >= 0");
  const Index n = m.size();
  return lasso_sweep(m, tau, tol, max_iter, Matrix::Zero(n, n), objective_trace);
}

long lasso_nonzero_count(const Matrix& mu, double threshold) {
  long count = 0;
  for (Index i = 0; i < mu.rows(); ++i)
    for (Index j = 0; j < mu.cols(); ++j)
      if (i != j && mu(i, j) > threshold) ++count;
  return count;
}

TauSearchResult tau_search(const MarginalVector& m, const DensityTarget& target,
                           const std::vector<double>& grid) {
  if (grid.empty()) throw InvalidArgument("tau_search: grid must be non-empty");
  for (size_t k = 1; k < grid.size(); ++k)
    if (grid[k] < grid[k - 1]) throw InvalidArgument("tau_search: grid must be ascending");

  const long want = round_half_up(target.value() * static_cast<double>(dyad_count(m.size())));
  TauSearchResult best;
  bool have_best = false;
  Matrix warm = Matrix::Zero(m.size(), m.size());
  for (const double tau : grid) {
    warm = lasso_sweep(m, tau, 1e-10, 100000, std::move(warm));
    const long nz = lasso_nonzero_count(warm);
    const long gap = std::labs(nz - want);
    // Ties go to the larger tau, so >= replaces on equal gaps.
    if (!have_best || gap <= std::labs(best.nonzeros - want)) {
      best = {tau, warm, nz};
      have_best = true;
    }
  }
  return best;
}

std::vector<Matrix> lasso_path(const MarginalVector& m, const std::vector<double>& grid) {
  if (grid.empty()) throw InvalidArgument("lasso_path: grid must be non-empty");
  for (size_t k = 1; k < grid.size(); ++k)
    if (grid[k] < grid[k - 1]) throw InvalidArgument("lasso_path: grid must be ascending");
  std::vector<Matrix> path;
  path.reserve(grid.size());
  Matrix warm = Matrix::Zero(m.size(), m.size());
  for (const double tau : grid) {
    warm = lasso_sweep(m, tau, 1e-10, 100000, std::move(warm));
    path.push_back(warm);
  }
  return path;
}

}  // namespace netrecon
