#ifndef NETRECON_METRICS_HPP_
#define NETRECON_METRICS_HPP_

#include "netrecon/types.hpp"

namespace netrecon {

struct BrierComponents {
  double score = 0.0;
  double reliability = 0.0;
  double resolution = 0.0;
  double uncertainty = 0.0;
};

struct EvaluationReport {
  double auc_roc = 0.0;
  double auc_pr = 0.0;
  BrierComponents brier;
  double rmse_outdeg = 0.0;
  double rmse_indeg = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
};

enum class Direction { out, in };

/// Probability that a uniformly random positive outranks a uniformly
/// random negative, ties counted 1/2 (Mann-Whitney form).
double roc_auc(const Vector& scores, const IntVector& labels);

/// Area under the precision-recall step curve by descending-score sweep
/// with average-precision summation; equal scores enter together.
double pr_auc(const Vector& scores, const IntVector& labels);

/// Murphy decomposition over bins of exactly equal probabilities. The
/// identity score = reliability - resolution + uncertainty holds exactly.
BrierComponents brier_decomposition(const Vector& probs, const IntVector& labels);

/// Histogram distance between predicted and true degree distributions
/// over degree values 1..n (degree-0 counts excluded).
double degree_rmse(const BinaryStructure& z_hat, const BinaryStructure& z, Direction direction);

/// L1 and L2 edge-value errors over off-diagonal dyads.
std::pair<double, double> value_errors(const MatrixRef& mu_hat, const WeightedNetwork& x);

/// Full evaluation battery. Probabilities (or the predicted values when
/// absent) serve as ranking scores for the AUCs, the Brier decomposition
/// and the density-thresholded degree reconstruction.
EvaluationReport evaluate(const ReconstructionResult& result, const WeightedNetwork& truth,
                          const DensityTarget& target);

/// Off-diagonal entries in fixed row-major dyad order.
Vector flatten_dyads(const MatrixRef& m);
IntVector flatten_dyad_labels(const IntMatrix& m);

}  // namespace netrecon

#endif  // NETRECON_METRICS_HPP_
