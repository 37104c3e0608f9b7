#ifndef NETRECON_IPFP_HPP_
#define NETRECON_IPFP_HPP_

#include <atomic>
#include <optional>
#include <vector>

#include "netrecon/types.hpp"

namespace netrecon {

/// Maximum-entropy fit: the unique log-linear matrix mu_ij =
/// exp(row_effects_i + col_effects_j [+ c_ij * beta]) whose row and
/// column sums match the observed marginals.
struct IpfpResult {
  Matrix mu;
  Vector row_effects;  // -inf on rows removed for zero marginals
  Vector col_effects;
  std::optional<double> beta;
  int iterations = 0;
  bool converged = false;
  bool covariate_degenerate = false;
  // Max relative marginal deviation after each full row+column sweep.
  std::vector<double> deviation_history;
};

/// Alternating row/column scaling from a uniform positive start,
/// restricted to the given support when present (diagonal always
/// excluded). Rows and columns with zero marginals are removed before
/// iteration and re-inserted as zeros. Throws NonConvergence when
/// max_iter sweeps leave the marginal deviation >= tol, which signals an
/// infeasible support or inconsistent marginals.
IpfpResult ipfp_fit(const MarginalVector& m,
                    const BinaryStructure* support = nullptr,
                    double tol = 1e-8, int max_iter = 10000,
                    const std::atomic<bool>* cancel = nullptr);

/// Probability of a positive edge value under the Poisson reading of the
/// fit: p_ij = 1 - exp(-mu_ij). Saturates to 1 quickly as mu grows.
EdgeProbabilityMatrix poisson_edge_probabilities(const IpfpResult& r);

/// Covariate-extended fit with mean exp(delta_i + gamma_j + c_ij * beta),
/// estimated by block coordinate ascent: given beta, scale the offset
/// matrix exp(c*beta) to the marginals; given the fit, update (intercept,
/// beta) by safeguarded Newton on the Poisson pseudo-likelihood; iterate
/// until beta is stable to tol. A constant covariate makes beta
/// unidentifiable: the fit falls back to plain scaling with beta = 0 and
/// the covariate_degenerate flag set.
IpfpResult ipfp_covariate_fit(const MarginalVector& m, const CovariateMatrix& c,
                              double tol = 1e-8, int max_iter = 10000,
                              const std::atomic<bool>* cancel = nullptr);

}  // namespace netrecon

#endif  // NETRECON_IPFP_HPP_
