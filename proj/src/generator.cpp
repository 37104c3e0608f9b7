#include "netrecon/generator.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "netrecon/core.hpp"
#include "netrecon/gravity.hpp"
#include "netrecon/rng.hpp"

namespace netrecon {

void GeneratorConfig::validate() const {
  if (n < 2) throw InvalidArgument("generator: need n >= 2");
  if (T < 1) throw InvalidArgument("generator: need T >= 1");
  if (!(target_density > 0.0) || target_density > 1.0)
    throw InvalidArgument("generator: target_density must lie in (0, 1]");
  if (!(weight_tail > 1.0)) throw InvalidArgument("generator: weight_tail must be > 1");
  if (persistence < 0.0 || persistence > 1.0)
    throw InvalidArgument("generator: persistence must lie in [0, 1]");
  if (!(trend > 0.0)) throw InvalidArgument("generator: trend must be > 0");
  if (fitness_sigma < 0.0) throw InvalidArgument("generator: fitness_sigma must be >= 0");
}

GeneratorConfig generator_preset(std::string_view name) {
  GeneratorConfig cfg;
  if (name == "reduced") {
    cfg.n = 59;
    cfg.target_density = 0.85;
    cfg.T = 24;
  } else if (name == "full") {
    cfg.n = 203;
    cfg.target_density = 0.3;
    cfg.T = 24;
  } else if (name == "uniform-degree") {
    cfg.n = 59;
    cfg.target_density = 0.85;
    cfg.T = 24;
    cfg.fitness_sigma = 0.05;
  } else {
    throw InvalidArgument("generator: unknown preset '" + std::string(name) + "'");
  }
  return cfg;
}

GeneratedSeries generate_series(const GeneratorConfig& cfg) {
  cfg.validate();
  const Index n = cfg.n;

  Rng fit_rng(derive_seed(cfg.rng_seed, "generator-fitness"));
  Vector fitness(n);
  for (Index i = 0; i < n; ++i) fitness(i) = std::exp(cfg.fitness_sigma * fit_rng.normal());

  // Edge probabilities from the calibrated fitness products.
  Matrix p(n, n);
  if (cfg.target_density >= 1.0) {
    p.setOnes();
  } else {
    Matrix products = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (i != j) products(i, j) = fitness(i) * fitness(j);
    const CalibratedAlpha a = calibrate_alpha(FitnessSpec::from_covariate(CovariateMatrix(products)),
                                              DensityTarget(cfg.target_density));
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        p(i, j) = i == j ? 0.0 : a.alpha * products(i, j) / (1.0 + a.alpha * products(i, j));
  }
  p.diagonal().setZero();

  Rng rng(derive_seed(cfg.rng_seed, "generator-series"));
  Matrix w = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j && rng.bernoulli(p(i, j))) w(i, j) = rng.pareto(cfg.weight_tail);

  GeneratedSeries out;
  out.dataset.networks.emplace_back(w);

  for (int t = 1; t < cfg.T; ++t) {
    // Survival pass in fixed dyad order.
    double dead_mass = 0.0;
    long dead_count = 0;
    Matrix died = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        if (i == j || w(i, j) <= 0.0) continue;
        if (!rng.bernoulli(cfg.persistence)) {
          dead_mass += w(i, j);
          ++dead_count;
          died(i, j) = 1.0;
          w(i, j) = 0.0;
        }
      }

    if (dead_count > 0) {
      // Relocate onto dyads empty before this step, probability ~ p_ij.
      struct Slot {
        Index i, j;
        double weight;
      };
      std::vector<Slot> pool;
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
          if (i != j && w(i, j) <= 0.0 && died(i, j) == 0.0 && p(i, j) > 0.0)
            pool.push_back({i, j, p(i, j)});
      if (static_cast<long>(pool.size()) < dead_count)
        for (Index i = 0; i < n; ++i)
          for (Index j = 0; j < n; ++j)
            if (died(i, j) > 0.0) pool.push_back({i, j, p(i, j)});

      const long births = std::min<long>(dead_count, static_cast<long>(pool.size()));
      std::vector<double> fresh(births);
      double fresh_total = 0.0;
      for (long b = 0; b < births; ++b) {
        fresh[b] = rng.pareto(cfg.weight_tail);
        fresh_total += fresh[b];
      }
      double pool_weight = 0.0;
      for (const auto& s : pool) pool_weight += s.weight;
      for (long b = 0; b < births && !pool.empty(); ++b) {
        double u = rng.uniform() * pool_weight;
        size_t pick = 0;
        for (; pick + 1 < pool.size(); ++pick) {
          if (u < pool[pick].weight) break;
          u -= pool[pick].weight;
        }
        w(pool[pick].i, pool[pick].j) = fresh[b] * (dead_mass / fresh_total);
        pool_weight -= pool[pick].weight;
        pool[pick] = pool.back();
        pool.pop_back();
      }
    }

    w *= cfg.trend;
    out.dataset.networks.emplace_back(w);
  }

  // GDP-like covariate: fitness normalized so the smallest node sits at 1,
  // keeping every pairwise sum above 1 for the log transform.
  out.gdp = fitness / fitness.minCoeff();
  const CovariateMatrix gdp_pair = covariate_gdp_pair(out.gdp);
  out.dataset.covariates.assign(static_cast<size_t>(cfg.T), gdp_pair);

  out.dataset.time_labels.reserve(cfg.T);
  for (int t = 0; t < cfg.T; ++t) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "t%03d", t);
    out.dataset.time_labels.emplace_back(buf);
  }
  out.dataset.validate();
  return out;
}

}  // namespace netrecon
