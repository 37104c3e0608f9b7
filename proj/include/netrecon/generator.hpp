#ifndef NETRECON_GENERATOR_HPP_
#define NETRECON_GENERATOR_HPP_

#include <cstdint>
#include <string_view>

#include "netrecon/types.hpp"

namespace netrecon {

struct GeneratorConfig {
  Index n = 59;
  int T = 24;
  double target_density = 0.85;
  double weight_tail = 2.5;    // Pareto shape for edge values (> 1, finite mean)
  double trend = 1.01;         // per-period multiplicative growth of total volume
  double persistence = 0.95;   // probability an edge survives to the next period
  double fitness_sigma = 1.0;  // log-normal node fitness spread
  std::uint64_t rng_seed = 1;

  void validate() const;
};

/// Presets anchored to the two data regimes: "reduced" (n=59 dense),
/// "full" (n=203 sparse) and "uniform-degree" (tight fitness spread).
GeneratorConfig generator_preset(std::string_view name);

struct GeneratedSeries {
  TimeSeriesDataset dataset;  // covariates filled with the gdp-pair transform
  Vector gdp;                 // per-node positive covariate (min-normalized fitness)
};

/// Fitness-based synthetic series: a log-normal fitness per node drives a
/// density-calibrated first slice with Pareto edge values; later slices
/// keep each edge with the persistence probability, relocate the dead
/// mass onto fresh dyads and scale all values by the trend.
GeneratedSeries generate_series(const GeneratorConfig& cfg);

}  // namespace netrecon

#endif  // NETRECON_GENERATOR_HPP_
