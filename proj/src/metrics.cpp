#include "netrecon/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "netrecon/core.hpp"

namespace netrecon {

Vector flatten_dyads(const MatrixRef& m) {
  const Index n = m.rows();
  Vector v(dyad_count(n));
  Index k = 0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j) v(k++) = m(i, j);
  return v;
}

IntVector flatten_dyad_labels(const IntMatrix& m) {
  const Index n = m.rows();
  IntVector v(dyad_count(n));
  Index k = 0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j) v(k++) = m(i, j);
  return v;
}

namespace {

void check_lengths(const Vector& scores, const IntVector& labels) {
  if (scores.size() != labels.size() || scores.size() == 0)
    throw DimensionMismatch("metrics: scores/labels length mismatch");
  for (Index k = 0; k < labels.size(); ++k)
    if (labels(k) != 0 && labels(k) != 1)
      throw InvalidArgument("metrics: labels must be 0 or 1");
}

}  // namespace

double roc_auc(const Vector& scores, const IntVector& labels) {
  check_lengths(scores, labels);
  const Index n = scores.size();
  const long npos = labels.sum();
  const long nneg = n - npos;
  if (npos == 0 || nneg == 0)
    throw DegenerateLabels("roc_auc: need at least one positive and one negative");

  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(),
            [&](Index a, Index b) { return scores(a) < scores(b); });

  // Midranks over tie groups; rank sum of positives gives the statistic.
  double rank_sum_pos = 0.0;
  Index k = 0;
  while (k < n) {
    Index e = k;
    while (e + 1 < n && scores(order[e + 1]) == scores(order[k])) ++e;
    const double midrank = 0.5 * static_cast<double>(k + 1 + e + 1);
    for (Index q = k; q <= e; ++q)
      if (labels(order[q]) == 1) rank_sum_pos += midrank;
    k = e + 1;
  }
  const double np = static_cast<double>(npos);
  return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * static_cast<double>(nneg));
}

double pr_auc(const Vector& scores, const IntVector& labels) {
  check_lengths(scores, labels);
  const Index n = scores.size();
  const long npos = labels.sum();
  if (npos == 0) throw NoPositives("pr_auc: need at least one positive");

  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(),
            [&](Index a, Index b) { return scores(a) > scores(b); });

  double auc = 0.0;
  double tp = 0.0, fp = 0.0, prev_recall = 0.0;
  Index k = 0;
  while (k < n) {
    Index e = k;
    double gtp = 0.0, gfp = 0.0;
    while (e < n && scores(order[e]) == scores(order[k])) {
      if (labels(order[e]) == 1)
        ++gtp;
      else
        ++gfp;
      ++e;
    }
    tp += gtp;
    fp += gfp;
    const double recall = tp / static_cast<double>(npos);
    const double precision = tp / (tp + fp);
    auc += (recall - prev_recall) * precision;
    prev_recall = recall;
    k = e;
  }
  return auc;
}

BrierComponents brier_decomposition(const Vector& probs, const IntVector& labels) {
  check_lengths(probs, labels);
  const Index n = probs.size();
  const double N = static_cast<double>(n);
  const double d = static_cast<double>(labels.sum()) / N;

  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return probs(a) < probs(b); });

  BrierComponents out;
  out.uncertainty = d * (1.0 - d);
  Index k = 0;
  while (k < n) {
    Index e = k;
    long ones = 0;
    while (e < n && probs(order[e]) == probs(order[k])) {
      ones += labels(order[e]);
      ++e;
    }
    const double nk = static_cast<double>(e - k);
    const double pk = probs(order[k]);
    const double zbar = static_cast<double>(ones) / nk;
    out.reliability += (nk / N) * (zbar - pk) * (zbar - pk);
    out.resolution += (nk / N) * (zbar - d) * (zbar - d);
    k = e;
  }
  for (Index q = 0; q < n; ++q) {
    const double diff = probs(q) - static_cast<double>(labels(q));
    out.score += diff * diff / N;
  }
  return out;
}

double degree_rmse(const BinaryStructure& z_hat, const BinaryStructure& z, Direction direction) {
  const Index n = z.size();
  if (z_hat.size() != n) throw DimensionMismatch("degree_rmse: size mismatch");

  const auto histogram = [&](const BinaryStructure& s) {
    std::vector<long> h(static_cast<size_t>(n) + 1, 0);
    const auto [outd, ind] = binary_degrees(s);
    const IntVector& deg = direction == Direction::out ? outd : ind;
    for (Index i = 0; i < n; ++i) ++h[static_cast<size_t>(deg(i))];
    return h;
  };
  const auto h_hat = histogram(z_hat);
  const auto h_true = histogram(z);
  double s = 0.0;
  for (Index j = 1; j <= n; ++j) {
    const double diff = static_cast<double>(h_hat[j] - h_true[j]);
    s += diff * diff;
  }
  return std::sqrt(s / static_cast<double>(n));
}

std::pair<double, double> value_errors(const MatrixRef& mu_hat, const WeightedNetwork& x) {
  const Index n = x.size();
  if (mu_hat.rows() != n || mu_hat.cols() != n)
    throw DimensionMismatch("value_errors: size mismatch");
  double l1 = 0.0, l2 = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double diff = x.value(i, j) - mu_hat(i, j);
      l1 += std::abs(diff);
      l2 += diff * diff;
    }
  return {l1, std::sqrt(l2)};
}

EvaluationReport evaluate(const ReconstructionResult& result, const WeightedNetwork& truth,
                          const DensityTarget& target) {
  const Index n = truth.size();
  if (result.mu.rows() != n || result.mu.cols() != n)
    throw DimensionMismatch("evaluate: size mismatch");

  const Matrix scores = result.probabilities ? result.probabilities->values() : result.mu;
  const BinaryStructure z_true = binarize(truth);
  const Vector flat_scores = flatten_dyads(scores);
  const IntVector flat_labels = flatten_dyad_labels(z_true.adjacency());

  EvaluationReport report;
  report.auc_roc = roc_auc(flat_scores, flat_labels);
  report.auc_pr = pr_auc(flat_scores, flat_labels);
  report.brier = brier_decomposition(flat_scores, flat_labels);

  const BinaryStructure z_hat = threshold_binarize(scores, target);
  report.rmse_outdeg = degree_rmse(z_hat, z_true, Direction::out);
  report.rmse_indeg = degree_rmse(z_hat, z_true, Direction::in);

  std::tie(report.l1, report.l2) = value_errors(result.mu, truth);
  return report;
}

}  // namespace netrecon
