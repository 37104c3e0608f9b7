#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "netrecon/core.hpp"
#include "netrecon/gravity.hpp"
#include "netrecon/metrics.hpp"
#include "netrecon/rng.hpp"
#include "oracles.hpp"

using namespace netrecon;

namespace {

Vector to_vec(const std::vector<double>& v) {
  Vector out(static_cast<Index>(v.size()));
  for (Index i = 0; i < out.size(); ++i) out(i) = v[i];
  return out;
}

IntVector to_ivec(const std::vector<int>& v) {
  IntVector out(static_cast<Index>(v.size()));
  for (Index i = 0; i < out.size(); ++i) out(i) = v[i];
  return out;
}

}  // namespace

TEST_CASE("roc_auc hand cases") {
  CHECK(roc_auc(to_vec({0.9, 0.8, 0.3, 0.1}), to_ivec({1, 1, 0, 0})) == 1.0);
  CHECK(roc_auc(to_vec({0.9, 0.2, 0.8, 0.1}), to_ivec({1, 0, 0, 1})) == 0.5);
  CHECK(roc_auc(to_vec({0.4, 0.4, 0.4, 0.4}), to_ivec({1, 0, 1, 0})) == 0.5);
  CHECK_THROWS_AS(roc_auc(to_vec({0.1, 0.2}), to_ivec({1, 1})), DegenerateLabels);
}

TEST_CASE("roc_auc equals the pairwise oracle exactly on fuzz cases") {
  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(60));
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    bool has0 = false, has1 = false;
    for (int k = 0; k < n; ++k) {
      // Coarse grid forces plenty of ties.
      scores[k] = std::floor(rng.uniform() * 8.0) / 8.0;
      labels[k] = rng.uniform() < 0.4 ? 1 : 0;
      (labels[k] ? has1 : has0) = true;
    }
    if (!has0 || !has1) continue;
    CHECK(roc_auc(to_vec(scores), to_ivec(labels)) == oracles::pairwise_auc(scores, labels));
  }
}

TEST_CASE("roc_auc is invariant under strictly increasing transforms") {
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 5 + static_cast<int>(rng.below(40));
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    bool has0 = false, has1 = false;
    for (int k = 0; k < n; ++k) {
      scores[k] = rng.uniform(-2.0, 2.0);
      labels[k] = rng.uniform() < 0.5 ? 1 : 0;
      (labels[k] ? has1 : has0) = true;
    }
    if (!has0 || !has1) continue;
    std::vector<double> warped(n);
    for (int k = 0; k < n; ++k) warped[k] = std::exp(3.0 * scores[k]) + 7.0;
    CHECK(roc_auc(to_vec(scores), to_ivec(labels)) ==
          doctest::Approx(roc_auc(to_vec(warped), to_ivec(labels))).epsilon(1e-12));
  }
}

TEST_CASE("pr_auc hand cases") {
  CHECK(pr_auc(to_vec({0.9, 0.8, 0.3, 0.1}), to_ivec({1, 1, 0, 0})) == 1.0);
  // Constant scores: precision equals the positive rate at every recall.
  CHECK(pr_auc(to_vec({0.5, 0.5, 0.5, 0.5}), to_ivec({1, 0, 0, 0})) ==
        doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(pr_auc(to_vec({0.1, 0.2}), to_ivec({0, 0})), NoPositives);
}

TEST_CASE("pr_auc matches the sweep oracle") {
  const std::vector<double> scores{0.9, 0.8, 0.7, 0.6, 0.5, 0.4};
  const std::vector<int> labels{1, 0, 1, 1, 0, 0};
  CHECK(pr_auc(to_vec(scores), to_ivec(labels)) ==
        doctest::Approx(oracles::pr_sweep_auc(scores, labels)).epsilon(1e-14));

  Rng rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(40));
    std::vector<double> s(n);
    std::vector<int> z(n);
    bool has1 = false;
    for (int k = 0; k < n; ++k) {
      s[k] = std::floor(rng.uniform() * 6.0) / 6.0;
      z[k] = rng.uniform() < 0.35 ? 1 : 0;
      has1 |= z[k] == 1;
    }
    if (!has1) continue;
    CHECK(pr_auc(to_vec(s), to_ivec(z)) ==
          doctest::Approx(oracles::pr_sweep_auc(s, z)).epsilon(1e-12));
  }
}

TEST_CASE("brier hand cases") {
  const BrierComponents perfect = brier_decomposition(to_vec({1, 1, 0, 0}), to_ivec({1, 1, 0, 0}));
  CHECK(perfect.score == 0.0);
  CHECK(perfect.reliability == 0.0);
  CHECK(perfect.resolution == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(perfect.uncertainty == doctest::Approx(0.25).epsilon(1e-15));

  // Climatology forecast: constant probability at the base rate.
  const BrierComponents clim =
      brier_decomposition(to_vec({0.25, 0.25, 0.25, 0.25}), to_ivec({1, 0, 0, 0}));
  CHECK(clim.reliability == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(clim.resolution == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(clim.score == doctest::Approx(clim.uncertainty).epsilon(1e-12));
}

TEST_CASE("brier matches direct summation and the Murphy identity") {
  const std::vector<double> probs{0.1, 0.1, 0.4, 0.4, 0.4, 0.8, 0.8, 1.0};
  const std::vector<int> labels{0, 1, 0, 0, 1, 1, 1, 1};
  const BrierComponents b = brier_decomposition(to_vec(probs), to_ivec(labels));
  const oracles::BrierParts o = oracles::brier_direct(probs, labels);
  CHECK(b.score == doctest::Approx(o.score).epsilon(1e-15));
  CHECK(b.reliability == doctest::Approx(o.rel).epsilon(1e-15));
  CHECK(b.resolution == doctest::Approx(o.res).epsilon(1e-15));
  CHECK(b.uncertainty == doctest::Approx(o.unc).epsilon(1e-15));
  CHECK(std::abs(b.score - (b.reliability - b.resolution + b.uncertainty)) <= 1e-15);
}

TEST_CASE("brier identity on fuzz cases") {
  Rng rng(8);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(50));
    Vector probs(n);
    IntVector labels(n);
    for (int k = 0; k < n; ++k) {
      probs(k) = std::floor(rng.uniform() * 5.0) / 4.0 / 1.25;  // coarse values in [0,1]
      labels(k) = rng.uniform() < 0.5 ? 1 : 0;
    }
    const BrierComponents b = brier_decomposition(probs, labels);
    CHECK(std::abs(b.score - (b.reliability - b.resolution + b.uncertainty)) <= 1e-12);
    CHECK(b.reliability >= 0.0);
    CHECK(b.resolution >= 0.0);
    CHECK(b.resolution <= b.uncertainty + 1e-12);
  }
}

TEST_CASE("degree_rmse hand histogram") {
  // true degrees (1,1,2) vs predicted (2,2,1)
  IntMatrix zt = IntMatrix::Zero(3, 3);
  zt(0, 1) = 1;
  zt(1, 2) = 1;
  zt(2, 0) = 1;
  zt(2, 1) = 1;
  IntMatrix zp = IntMatrix::Zero(3, 3);
  zp(0, 1) = 1;
  zp(0, 2) = 1;
  zp(1, 0) = 1;
  zp(1, 2) = 1;
  zp(2, 0) = 1;
  const BinaryStructure t(zt), p(zp);
  CHECK(degree_rmse(p, t, Direction::out) ==
        doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-14));
  CHECK(degree_rmse(t, t, Direction::out) == 0.0);
  CHECK(degree_rmse(t, t, Direction::in) == 0.0);

  const BinaryStructure empty(IntMatrix::Zero(3, 3));
  CHECK(degree_rmse(empty, empty, Direction::out) == 0.0);
}

TEST_CASE("degree_rmse is symmetric and matches the oracle on fuzz cases") {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.below(8));
    IntMatrix a = IntMatrix::Zero(n, n), b = IntMatrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        if (i == j) continue;
        a(i, j) = rng.uniform() < 0.4;
        b(i, j) = rng.uniform() < 0.4;
      }
    const BinaryStructure za(a), zb(b);
    const double d1 = degree_rmse(za, zb, Direction::out);
    CHECK(d1 == degree_rmse(zb, za, Direction::out));

    const auto [deg_a, ign_a] = binary_degrees(za);
    const auto [deg_b, ign_b] = binary_degrees(zb);
    std::vector<int> pa(deg_a.data(), deg_a.data() + n), pb(deg_b.data(), deg_b.data() + n);
    CHECK(d1 == doctest::Approx(oracles::degree_hist_rmse(pa, pb)).epsilon(1e-14));
  }
}

TEST_CASE("value_errors") {
  Matrix x2(2, 2);
  x2 << 0, 3, 5, 0;
  const WeightedNetwork truth(x2);
  const auto [l1z, l2z] = value_errors(Matrix::Zero(2, 2), truth);
  CHECK(l1z == 8.0);
  CHECK(l2z == doctest::Approx(std::sqrt(34.0)).epsilon(1e-15));

  const auto [l1e, l2e] = value_errors(x2, truth);
  CHECK(l1e == 0.0);
  CHECK(l2e == 0.0);

  CHECK_THROWS_AS(value_errors(Matrix::Zero(3, 3), truth), DimensionMismatch);
}

TEST_CASE("value error norm inequalities") {
  Rng rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.below(8));
    Matrix x(n, n), mu(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        x(i, j) = i == j ? 0.0 : rng.uniform(0, 5);
        mu(i, j) = i == j ? 0.0 : rng.uniform(0, 5);
      }
    const auto [l1, l2] = value_errors(mu, WeightedNetwork(x));
    const double N = static_cast<double>(dyad_count(n));
    CHECK(l2 <= l1 + 1e-12);
    CHECK(l1 <= std::sqrt(N) * l2 + 1e-12);
  }
}

TEST_CASE("evaluate: self-evaluation is perfect") {
  Matrix x(3, 3);
  x << 0, 2, 1,
       0, 0, 3,
       4, 0, 0;
  const WeightedNetwork truth(x);
  ReconstructionResult self;
  self.mu = x;
  self.probabilities =
      EdgeProbabilityMatrix(binarize(truth).adjacency().cast<double>());
  const DensityTarget target(density(binarize(truth)));
  const EvaluationReport r = evaluate(self, truth, target);
  CHECK(r.auc_roc == 1.0);
  CHECK(r.auc_pr == 1.0);
  CHECK(r.brier.score == 0.0);
  CHECK(r.rmse_outdeg == 0.0);
  CHECK(r.rmse_indeg == 0.0);
  CHECK(r.l1 == 0.0);
  CHECK(r.l2 == 0.0);
}

TEST_CASE("evaluate: all-zero reconstruction") {
  Matrix x(3, 3);
  x << 0, 2, 1,
       0, 0, 3,
       4, 0, 0;
  const WeightedNetwork truth(x);
  ReconstructionResult zero;
  zero.mu = Matrix::Zero(3, 3);
  const EvaluationReport r = evaluate(zero, truth, DensityTarget(density(binarize(truth))));
  CHECK(r.l1 == 10.0);
  // Ranking scores are all equal, so the degree metrics compare the
  // lexicographic threshold structure against the truth.
  CHECK(r.auc_roc == 0.5);
}

TEST_CASE("evaluate: gravity fit on the n=3 instance assembles the component metrics") {
  Matrix x(3, 3);
  x << 0, 2, 1,
       0, 0, 3,
       4, 0, 0;
  const WeightedNetwork truth(x);
  const MarginalVector m = compute_marginals(truth);
  ReconstructionResult rec;
  rec.mu = gravity_fit(m);
  const DensityTarget target(density(binarize(truth)));
  const EvaluationReport r = evaluate(rec, truth, target);

  std::vector<double> scores;
  std::vector<int> labels;
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) {
      if (i == j) continue;
      scores.push_back(rec.mu(i, j));
      labels.push_back(truth.value(i, j) > 0 ? 1 : 0);
    }
  CHECK(r.auc_roc == doctest::Approx(oracles::pairwise_auc(scores, labels)).epsilon(1e-14));
  CHECK(r.auc_pr == doctest::Approx(oracles::pr_sweep_auc(scores, labels)).epsilon(1e-14));
  const auto [l1, l2] = value_errors(rec.mu, truth);
  CHECK(r.l1 == l1);
  CHECK(r.l2 == l2);
}
