#ifndef NETRECON_LASSO_HPP_
#define NETRECON_LASSO_HPP_

#include <vector>

#include "netrecon/types.hpp"

namespace netrecon {

/// Smallest penalty that shrinks every coordinate to zero:
/// 2 * max_{i!=j} (out_i + in_j).
double lasso_tau_max(const MarginalVector& m);

/// Default search grid: 50 log-spaced points on [1e-6*tau_max, tau_max].
std::vector<double> lasso_default_grid(const MarginalVector& m, int points = 50);

/// Non-negative L1-penalized least squares against the marginals,
/// minimized by cyclic coordinate descent. Each coordinate has the closed
/// form mu_ij <- max(0, (r_i + c_j - tau/2) / 2) with r_i, c_j the row and
/// column residuals excluding the coordinate itself. Sweeps until the
/// largest coordinate change falls below tol (relative to the marginal
/// scale). When objective_trace is given it receives the objective value
/// after every sweep.
Matrix lasso_fit(const MarginalVector& m, double tau, double tol = 1e-10,
                 int max_iter = 100000, std::vector<double>* objective_trace = nullptr);

struct TauSearchResult {
  double tau = 0.0;
  Matrix fit;
  long nonzeros = 0;
};

/// Fits every grid point (warm-started, ascending) and returns the tau
/// whose non-zero count is closest to round(D*N); ties pick the larger
/// (sparser) tau. Entries count as non-zero above 1e-10.
TauSearchResult tau_search(const MarginalVector& m, const DensityTarget& target,
                           const std::vector<double>& grid);

/// All per-tau fits along the grid, for exploratory path plots.
std::vector<Matrix> lasso_path(const MarginalVector& m, const std::vector<double>& grid);

long lasso_nonzero_count(const Matrix& mu, double threshold = 1e-10);

}  // namespace netrecon

#endif  // NETRECON_LASSO_HPP_
