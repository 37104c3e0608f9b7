#ifndef NETRECON_TOMOGRAVITY_HPP_
#define NETRECON_TOMOGRAVITY_HPP_

#include <vector>

#include "netrecon/types.hpp"

namespace netrecon {

struct TomogravityConfig {
  double psi = 0.01;  // regularization weight (rule-of-thumb default)
  // Gradient tolerance, relative to the marginal scale.
  double tol = 1e-10;
  int max_iter = 100000;
};

struct TomogravityFit {
  Matrix mu;
  int iterations = 0;
  double grad_norm = 0.0;          // final loss-gradient inf-norm
  double marginal_residual = 0.0;  // ||A*mu - y|| at the solution, reported not enforced
  // Objective driven by the line search: the loss itself for psi = 0,
  // the convex dual potential for psi > 0. Non-increasing per iteration.
  std::vector<double> objective_history;
};

/// Squared marginal deviation plus psi^2-weighted KL penalty against the
/// marginal products x_i. * x_.j, with the convention 0*log(0) = 0.
/// Entries with zero marginal product must be zero (DomainError otherwise).
double tomogravity_loss(const MatrixRef& mu, const MarginalVector& m,
                        const TomogravityConfig& cfg);

/// Analytic gradient of tomogravity_loss on dyads with positive marginal
/// product; zero elsewhere.
Matrix tomogravity_gradient(const MatrixRef& mu, const MarginalVector& m,
                            const TomogravityConfig& cfg);

/// Minimizes the loss subject to non-negativity. Dyads with zero
/// marginal product are hard-fixed to zero. For psi > 0 the solve runs
/// as damped Newton on the strictly convex dual potential (the product
/// form the stationarity condition forces); for psi = 0 it falls back to
/// scaled projected gradient with backtracking from the gravity start.
TomogravityFit tomogravity_fit(const MarginalVector& m, const TomogravityConfig& cfg = {});

}  // namespace netrecon

#endif  // NETRECON_TOMOGRAVITY_HPP_
