#ifndef NETRECON_TYPES_HPP_
#define NETRECON_TYPES_HPP_

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "netrecon/errors.hpp"

namespace netrecon {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntMatrix = Eigen::MatrixXi;
using IntVector = Eigen::VectorXi;
using MatrixRef = Eigen::Ref<const Matrix>;

/// Number of ordered dyads N = n(n-1).
inline Index dyad_count(Index n) { return n * (n - 1); }

/// Directed weighted network with non-negative off-diagonal edge values.
/// The diagonal is structurally absent: it is stored as zero and never
/// read or written by any operation.
class WeightedNetwork {
 public:
  explicit WeightedNetwork(Matrix values, std::vector<std::string> node_labels = {});

  Index size() const { return values_.rows(); }
  Index dyads() const { return dyad_count(size()); }
  const Matrix& values() const { return values_; }
  double value(Index i, Index j) const { return values_(i, j); }
  const std::vector<std::string>& node_labels() const { return labels_; }

 private:
  Matrix values_;
  std::vector<std::string> labels_;
};

/// Binary edge-existence structure (0/1 adjacency, diagonal excluded).
class BinaryStructure {
 public:
  explicit BinaryStructure(IntMatrix adjacency);

  Index size() const { return adjacency_.rows(); }
  const IntMatrix& adjacency() const { return adjacency_; }
  int at(Index i, Index j) const { return adjacency_(i, j); }
  Index edge_count() const { return adjacency_.sum(); }

 private:
  IntMatrix adjacency_;
};

/// Stacked row/column sums of a valued network: the only observed data in
/// the reconstruction problem. Construction enforces non-negativity and
/// balance: every unit sent is received, so sum(out) == sum(in).
class MarginalVector {
 public:
  MarginalVector(Vector out_sums, Vector in_sums);

  Index size() const { return out_.size(); }
  const Vector& out_sums() const { return out_; }
  const Vector& in_sums() const { return in_; }
  double out(Index i) const { return out_(i); }
  double in(Index i) const { return in_(i); }
  double total() const { return out_.sum(); }

 private:
  Vector out_;
  Vector in_;
};

/// Target edge density in (0, 1].
class DensityTarget {
 public:
  explicit DensityTarget(double value);
  double value() const { return value_; }

 private:
  double value_;
};

/// Dyadic covariate c_ij with finite entries, diagonal excluded.
class CovariateMatrix {
 public:
  explicit CovariateMatrix(Matrix c);

  Index size() const { return c_.rows(); }
  const Matrix& values() const { return c_; }
  double at(Index i, Index j) const { return c_(i, j); }

 private:
  Matrix c_;
};

/// Per-dyad edge probabilities in [0, 1], diagonal excluded.
class EdgeProbabilityMatrix {
 public:
  explicit EdgeProbabilityMatrix(Matrix p);

  Index size() const { return p_.rows(); }
  const Matrix& values() const { return p_; }
  double at(Index i, Index j) const { return p_(i, j); }

 private:
  Matrix p_;
};

/// Ordered sequence of same-sized networks over T time points, with
/// optional per-time dyadic covariates.
struct TimeSeriesDataset {
  std::vector<WeightedNetwork> networks;
  std::vector<CovariateMatrix> covariates;  // empty or one per time point
  std::vector<std::string> time_labels;

  Index node_count() const { return networks.empty() ? 0 : networks.front().size(); }
  Index time_points() const { return static_cast<Index>(networks.size()); }

  void validate() const;
};

/// Output of a reconstruction method: predicted edge values, optional
/// edge probabilities, optional ensemble of sampled networks.
struct ReconstructionResult {
  Matrix mu;
  std::optional<EdgeProbabilityMatrix> probabilities;
  std::vector<std::pair<BinaryStructure, WeightedNetwork>> ensemble;
  std::optional<double> calibrated_alpha;  // set by density-calibrated methods
};

}  // namespace netrecon

#endif  // NETRECON_TYPES_HPP_
