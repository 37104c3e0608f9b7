#ifndef NETRECON_HIERARCHICAL_HPP_
#define NETRECON_HIERARCHICAL_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "netrecon/types.hpp"

namespace netrecon {

enum class ProbabilityModel { erdos_renyi, fitness };

struct HierarchicalConfig {
  ProbabilityModel probability_model = ProbabilityModel::erdos_renyi;
  double target_density = 0.5;
  int n_samples = 1;
  int max_structure_retries = 1000;
  std::uint64_t rng_seed = 0;
  // Marginals are scaled down so their maximum is at most this value
  // before sampling, and the weights are rescaled afterwards.
  double marginal_scale = 1e3;
};

/// Equal probability p_ij = D for every dyad.
EdgeProbabilityMatrix er_probabilities(Index n, const DensityTarget& target);

/// Logistic fitness probabilities p_ij = 1 / (1 + exp(-alpha
/// - log(s_i) - log(s_j))) with s_i the node's total marginal
/// out_i + in_i. alpha is calibrated by bisection so the mean probability
/// over included dyads equals the target. Dyads touching a node with zero
/// total marginal get p = 0 and are excluded from calibration.
EdgeProbabilityMatrix fit_probabilities(const MarginalVector& m, const DensityTarget& target);

/// One marginal-consistent draw: sample a binary structure from
/// independent Bernoulli(p_ij), reject structures that starve a positive
/// marginal, then place exponential weights on the support and rescale
/// them to the marginals by support-restricted alternating scaling.
/// Structures whose support admits no feasible matrix are redrawn,
/// counted against max_structure_retries.
std::pair<BinaryStructure, WeightedNetwork> sample_network(const MarginalVector& m,
                                                           const EdgeProbabilityMatrix& p,
                                                           const HierarchicalConfig& cfg);

/// cfg.n_samples independent draws with per-sample derived seeds.
std::vector<std::pair<BinaryStructure, WeightedNetwork>> sample_ensemble(
    const MarginalVector& m, const EdgeProbabilityMatrix& p, const HierarchicalConfig& cfg);

struct EnsemblePointEstimate {
  Matrix frequencies;  // empirical edge frequencies
  Matrix values;       // per-dyad ensemble means
};

EnsemblePointEstimate ensemble_point_estimate(
    const std::vector<std::pair<BinaryStructure, WeightedNetwork>>& samples);

}  // namespace netrecon

#endif  // NETRECON_HIERARCHICAL_HPP_
