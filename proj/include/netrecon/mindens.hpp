#ifndef NETRECON_MINDENS_HPP_
#define NETRECON_MINDENS_HPP_

#include <cstdint>
#include <vector>

#include "netrecon/types.hpp"

namespace netrecon {

struct MindensConfig {
  int max_steps = 20000;             // proposals per restart
  double marginal_tolerance = 1e-6;  // relative deviation bound for acceptance
  int restarts = 8;
  std::uint64_t rng_seed = 0;
  // Softness for count-worsening moves; 0 means greedy (never accept).
  double temperature = 0.0;
};

/// Analytic floor on the edge count: every node with a positive marginal
/// needs at least one incident edge.
long mindens_lower_bound(const MarginalVector& m);

/// Stochastic add/delete search for low-edge-count networks that satisfy
/// the marginals within tolerance. Each restart builds a greedy feasible
/// start (largest remaining out-marginal matched to largest remaining
/// in-marginal) and then applies marginal-preserving cycle transfers that
/// delete edges; count-worsening transfers are accepted with probability
/// exp(-delta/temperature). A restart stops at max_steps or after n^2
/// consecutive proposals without an accepted deletion. Returns one
/// network per restart.
std::vector<WeightedNetwork> mindens_run(const MarginalVector& m, const MindensConfig& cfg);

/// Minimum edge count; ties broken by smaller squared marginal deviation,
/// then by first occurrence.
const WeightedNetwork& mindens_best(const std::vector<WeightedNetwork>& ensemble,
                                    const MarginalVector& m);

}  // namespace netrecon

#endif  // NETRECON_MINDENS_HPP_
