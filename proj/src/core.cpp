#include "netrecon/core.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace netrecon {

MarginalVector compute_marginals(const WeightedNetwork& net) {
  // Diagonal is stored as zero, so plain row/column sums are exact.
  return MarginalVector(net.values().rowwise().sum(), net.values().colwise().sum().transpose());
}

BinaryStructure binarize(const WeightedNetwork& net) {
  const Index n = net.size();
  IntMatrix z = IntMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j && net.value(i, j) > 0.0) z(i, j) = 1;
  return BinaryStructure(std::move(z));
}

double density(const BinaryStructure& z) {
  return static_cast<double>(z.edge_count()) / static_cast<double>(dyad_count(z.size()));
}

std::pair<IntVector, IntVector> binary_degrees(const BinaryStructure& z) {
  return {z.adjacency().rowwise().sum(), z.adjacency().colwise().sum().transpose()};
}

long round_half_up(double x) { return static_cast<long>(std::floor(x + 0.5)); }

BinaryStructure threshold_binarize(const MatrixRef& scores, const DensityTarget& target) {
  const Index n = scores.rows();
  if (scores.cols() != n || n < 2) throw InvalidArgument("threshold_binarize: square scores, n >= 2");
  struct Dyad {
    double score;
    Index i, j;
  };
  std::vector<Dyad> dyads;
  dyads.reserve(dyad_count(n));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      if (!std::isfinite(scores(i, j)))
        throw InvalidArgument("threshold_binarize: scores must be finite off-diagonal");
      dyads.push_back({scores(i, j), i, j});
    }
  const long k = std::min<long>(round_half_up(target.value() * static_cast<double>(dyad_count(n))),
                                static_cast<long>(dyads.size()));
  std::sort(dyads.begin(), dyads.end(), [](const Dyad& a, const Dyad& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  IntMatrix z = IntMatrix::Zero(n, n);
  for (long r = 0; r < k; ++r) z(dyads[r].i, dyads[r].j) = 1;
  return BinaryStructure(std::move(z));
}

CovariateMatrix covariate_gdp_pair(const Vector& gdp) {
  const Index n = gdp.size();
  if (n < 2) throw InvalidArgument("covariate_gdp_pair: need at least 2 nodes");
  for (Index i = 0; i < n; ++i)
    if (!(gdp(i) > 0.0)) throw InvalidArgument("covariate_gdp_pair: gdp entries must be > 0");
  Matrix c = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j) c(i, j) = std::log(gdp(i) + gdp(j));
  return CovariateMatrix(std::move(c));
}

CovariateMatrix covariate_lag_log(const WeightedNetwork& prev, double offset) {
  if (!(offset > 0.0)) throw InvalidArgument("covariate_lag_log: offset must be > 0");
  const Index n = prev.size();
  Matrix c = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j) c(i, j) = std::log(offset + prev.value(i, j));
  return CovariateMatrix(std::move(c));
}

}  // namespace netrecon
