#include "netrecon/gravity.hpp"

#include <cmath>

#include "netrecon/rng.hpp"

namespace netrecon {

FitnessSpec::FitnessSpec(Matrix values) : values_(std::move(values)) {
  const Index n = values_.rows();
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      if (!(values_(i, j) > 0.0) || !std::isfinite(values_(i, j)))
        throw InvalidArgument(
            "FitnessSpec: fitness products must be positive and finite; "
            "rescale the covariate so every off-diagonal entry is > 0");
    }
  values_.diagonal().setZero();
}

FitnessSpec FitnessSpec::marginal_product(const MarginalVector& m) {
  const Index n = m.size();
  Matrix f = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j) f(i, j) = m.out(i) * m.in(j);
  return FitnessSpec(std::move(f));
}

FitnessSpec FitnessSpec::from_covariate(const CovariateMatrix& c) {
  return FitnessSpec(c.values());
}

Matrix gravity_fit(const MarginalVector& m) {
  const double total = m.total();
  if (!(total > 0.0)) throw ZeroTotal("gravity_fit: total flow is zero");
  const Index n = m.size();
  Matrix mu = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j) mu(i, j) = m.out(i) * m.in(j) / total;
  return mu;
}

namespace {

double mean_probability(const Matrix& f, double alpha) {
  const Index n = f.rows();
  double s = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j) {
        const double af = alpha * f(i, j);
        s += std::isinf(af) ? 1.0 : af / (1.0 + af);
      }
  return s / static_cast<double>(dyad_count(n));
}

}  // namespace

CalibratedAlpha calibrate_alpha(const FitnessSpec& f, const DensityTarget& target) {
  const double d = target.value();
  if (!(d > 0.0) || !(d < 1.0))
    throw TargetUnreachable("calibrate_alpha: target density must lie strictly in (0, 1)");

  double lo = -700.0, hi = 700.0;
  for (int it = 0; it < 120; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (mean_probability(f.values(), std::exp(mid)) < d)
      lo = mid;
    else
      hi = mid;
  }
  const double alpha = std::exp(0.5 * (lo + hi));
  const double achieved = mean_probability(f.values(), alpha);
  if (std::abs(achieved - d) > 1e-10)
    throw TargetUnreachable("calibrate_alpha: bisection could not reach the target density");
  return {alpha, achieved, d};
}

EdgeProbabilityMatrix edge_probabilities(const FitnessSpec& f, const CalibratedAlpha& a) {
  const Index n = f.size();
  Matrix p = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j) {
        const double af = a.alpha * f.at(i, j);
        p(i, j) = std::isinf(af) ? 1.0 : af / (1.0 + af);
      }
  return EdgeProbabilityMatrix(std::move(p));
}

BinaryStructure sample_binary(const EdgeProbabilityMatrix& p, std::uint64_t rng_seed) {
  const Index n = p.size();
  Rng rng(rng_seed);
  IntMatrix z = IntMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j && rng.bernoulli(p.at(i, j))) z(i, j) = 1;
  return BinaryStructure(std::move(z));
}

WeightedNetwork dc_gravity_values(const MarginalVector& m, const CalibratedAlpha& a,
                                  const BinaryStructure& z) {
  const double total = m.total();
  if (!(total > 0.0)) throw ZeroTotal("dc_gravity_values: total flow is zero");
  if (z.size() != m.size()) throw DimensionMismatch("dc_gravity_values: size mismatch");
  const Index n = m.size();
  Matrix w = Matrix::Zero(n, n);
  const double inv_alpha = 1.0 / a.alpha;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j && z.at(i, j) > 0) w(i, j) = (inv_alpha + m.out(i) * m.in(j)) / total;
  return WeightedNetwork(std::move(w));
}

DcGravityResult dc_gravity_reconstruct(const MarginalVector& m, const FitnessSpec& f,
                                       const DensityTarget& target, int n_samples,
                                       std::uint64_t rng_seed) {
  if (n_samples < 1) throw InvalidArgument("dc_gravity_reconstruct: need n_samples >= 1");
  const CalibratedAlpha a = calibrate_alpha(f, target);
  EdgeProbabilityMatrix p = edge_probabilities(f, a);

  const Index n = m.size();
  Matrix mean = Matrix::Zero(n, n);
  std::vector<std::pair<BinaryStructure, WeightedNetwork>> ensemble;
  ensemble.reserve(n_samples);
  for (int s = 0; s < n_samples; ++s) {
    BinaryStructure z = sample_binary(p, derive_seed(rng_seed, "dc-gravity", s));
    WeightedNetwork w = dc_gravity_values(m, a, z);
    mean += w.values();
    ensemble.emplace_back(std::move(z), std::move(w));
  }
  mean /= static_cast<double>(n_samples);
  return {std::move(p), std::move(ensemble), std::move(mean), a};
}

}  // namespace netrecon
