#include "netrecon/types.hpp"

#include <cmath>

namespace netrecon {

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) throw InvalidArgument(std::string(what) + ": matrix must be square");
  if (m.rows() < 2) throw InvalidArgument(std::string(what) + ": need at least 2 nodes");
}

}  // namespace

WeightedNetwork::WeightedNetwork(Matrix values, std::vector<std::string> node_labels)
    : values_(std::move(values)), labels_(std::move(node_labels)) {
  require_square(values_, "WeightedNetwork");
  const Index n = values_.rows();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = values_(i, j);
      if (!std::isfinite(v) || v < 0.0)
        throw InvalidArgument("WeightedNetwork: off-diagonal values must be finite and >= 0");
    }
  }
  values_.diagonal().setZero();
  if (!labels_.empty() && static_cast<Index>(labels_.size()) != n)
    throw InvalidArgument("WeightedNetwork: label count must match node count");
}

BinaryStructure::BinaryStructure(IntMatrix adjacency) : adjacency_(std::move(adjacency)) {
  if (adjacency_.rows() != adjacency_.cols() || adjacency_.rows() < 2)
    throw InvalidArgument("BinaryStructure: adjacency must be square, n >= 2");
  const Index n = adjacency_.rows();
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const int v = adjacency_(i, j);
      if (v != 0 && v != 1) throw InvalidArgument("BinaryStructure: entries must be 0 or 1");
    }
  adjacency_.diagonal().setZero();
}

MarginalVector::MarginalVector(Vector out_sums, Vector in_sums)
    : out_(std::move(out_sums)), in_(std::move(in_sums)) {
  if (out_.size() != in_.size() || out_.size() < 2)
    throw InvalidMarginals("MarginalVector: out/in lengths must match, n >= 2");
  for (Index i = 0; i < out_.size(); ++i) {
    if (!std::isfinite(out_(i)) || out_(i) < 0.0 || !std::isfinite(in_(i)) || in_(i) < 0.0)
      throw InvalidMarginals("MarginalVector: entries must be finite and >= 0");
  }
  const double so = out_.sum();
  const double si = in_.sum();
  if (std::abs(so - si) > 1e-9 * std::max({1.0, so, si}))
    throw InvalidMarginals("MarginalVector: sum(out) != sum(in)");
}

DensityTarget::DensityTarget(double value) : value_(value) {
  if (!(value > 0.0) || value > 1.0)
    throw InvalidArgument("DensityTarget: density must lie in (0, 1]");
}

CovariateMatrix::CovariateMatrix(Matrix c) : c_(std::move(c)) {
  require_square(c_, "CovariateMatrix");
  const Index n = c_.rows();
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      if (!std::isfinite(c_(i, j)))
        throw InvalidArgument("CovariateMatrix: entries must be finite");
    }
  c_.diagonal().setZero();
}

EdgeProbabilityMatrix::EdgeProbabilityMatrix(Matrix p) : p_(std::move(p)) {
  require_square(p_, "EdgeProbabilityMatrix");
  const Index n = p_.rows();
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = p_(i, j);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0)
        throw InvalidArgument("EdgeProbabilityMatrix: entries must lie in [0, 1]");
    }
  p_.diagonal().setZero();
}

void TimeSeriesDataset::validate() const {
  if (networks.empty()) throw InvalidArgument("TimeSeriesDataset: need at least one time point");
  const Index n = networks.front().size();
  for (const auto& net : networks)
    if (net.size() != n) throw DimensionMismatch("TimeSeriesDataset: node count varies over time");
  if (!covariates.empty() && covariates.size() != networks.size())
    throw DimensionMismatch("TimeSeriesDataset: covariates must be absent or one per time point");
  for (const auto& c : covariates)
    if (c.size() != n) throw DimensionMismatch("TimeSeriesDataset: covariate size mismatch");
  if (!time_labels.empty() && time_labels.size() != networks.size())
    throw InvalidArgument("TimeSeriesDataset: time label count mismatch");
}

}  // namespace netrecon
