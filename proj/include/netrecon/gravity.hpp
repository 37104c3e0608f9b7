#ifndef NETRECON_GRAVITY_HPP_
#define NETRECON_GRAVITY_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "netrecon/types.hpp"

namespace netrecon {

/// Per-dyad fitness products chi_i * psi_j driving edge probabilities.
/// Either the marginal products x_i. * x_.j or a positive dyadic
/// covariate. All off-diagonal values must be positive so calibration can
/// reach any density in (0, 1).
class FitnessSpec {
 public:
  static FitnessSpec marginal_product(const MarginalVector& m);
  /// Uses c_ij directly as the product chi_i * psi_j. Rejects values <= 0
  /// (rescale the covariate, e.g. GDP units, so all entries are positive).
  static FitnessSpec from_covariate(const CovariateMatrix& c);

  Index size() const { return values_.rows(); }
  const Matrix& values() const { return values_; }
  double at(Index i, Index j) const { return values_(i, j); }

 private:
  explicit FitnessSpec(Matrix values);
  Matrix values_;
};

/// Density-calibration constant: mean edge probability equals the target.
struct CalibratedAlpha {
  double alpha = 0.0;
  double achieved_density = 0.0;
  double target_density = 0.0;
};

struct DcGravityResult {
  EdgeProbabilityMatrix probabilities;
  std::vector<std::pair<BinaryStructure, WeightedNetwork>> ensemble;
  Matrix point_estimate;  // ensemble mean
  CalibratedAlpha alpha;
};

/// Independence estimate mu_ij = x_i. * x_.j / x_.. on off-diagonal
/// dyads. Row/column sums of the result do not match the marginals
/// exactly because the diagonal is excluded.
Matrix gravity_fit(const MarginalVector& m);

/// Solves mean_{i!=j} alpha*f_ij / (1 + alpha*f_ij) = D for alpha by
/// bisection on log(alpha); the map is strictly increasing so the root is
/// unique. Requires target strictly inside (0, 1).
CalibratedAlpha calibrate_alpha(const FitnessSpec& f, const DensityTarget& target);

/// p_ij = alpha*f_ij / (1 + alpha*f_ij).
EdgeProbabilityMatrix edge_probabilities(const FitnessSpec& f, const CalibratedAlpha& a);

/// Independent Bernoulli(p_ij) draw per dyad, reproducible from the seed.
BinaryStructure sample_binary(const EdgeProbabilityMatrix& p, std::uint64_t rng_seed);

/// Density-corrected values (1/alpha + x_i. * x_.j) / x_.. on the edges
/// of the sampled structure, zero elsewhere.
WeightedNetwork dc_gravity_values(const MarginalVector& m, const CalibratedAlpha& a,
                                  const BinaryStructure& z);

/// Two-step reconstruction: calibrate, sample n_samples binary
/// structures, fill edge values, average the ensemble into the point
/// estimate. Ensemble members use per-member derived seeds.
DcGravityResult dc_gravity_reconstruct(const MarginalVector& m, const FitnessSpec& f,
                                       const DensityTarget& target, int n_samples,
                                       std::uint64_t rng_seed);

}  // namespace netrecon

#endif  // NETRECON_GRAVITY_HPP_
