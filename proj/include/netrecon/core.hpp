#ifndef NETRECON_CORE_HPP_
#define NETRECON_CORE_HPP_

#include <utility>

#include "netrecon/types.hpp"

namespace netrecon {

/// Row and column sums of the edge values (valued out-/indegrees).
MarginalVector compute_marginals(const WeightedNetwork& net);

/// Indicator of strict positivity per off-diagonal entry.
BinaryStructure binarize(const WeightedNetwork& net);

/// Fraction of possible directed dyads carrying an edge. Zero densities
/// are representable here but rejected by DensityTarget, which calibrated
/// methods require.
double density(const BinaryStructure& z);

/// Number of outgoing / incoming edges per node.
std::pair<IntVector, IntVector> binary_degrees(const BinaryStructure& z);

/// Sets the round(D*N) largest off-diagonal scores to one (half-up
/// rounding). Ties are broken by lexicographic dyad order (i asc, then
/// j asc) so the result is deterministic.
BinaryStructure threshold_binarize(const MatrixRef& scores, const DensityTarget& target);

/// Dyadic covariate c_ij = log(gdp_i + gdp_j); rejects non-positive gdp.
CovariateMatrix covariate_gdp_pair(const Vector& gdp);

/// Dyadic covariate c_ij = log(offset + prev_ij). offset 1.0 gives the
/// plain lagged log transform; offset 1.1 keeps the value positive on
/// empty dyads so fitness-based probabilities are never pinned to zero.
CovariateMatrix covariate_lag_log(const WeightedNetwork& prev, double offset);

/// Half-up rounding used wherever a density is turned into an edge count.
long round_half_up(double x);

}  // namespace netrecon

#endif  // NETRECON_CORE_HPP_
