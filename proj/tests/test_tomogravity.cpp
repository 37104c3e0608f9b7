#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "netrecon/core.hpp"
#include "netrecon/gravity.hpp"
#include "netrecon/rng.hpp"
#include "netrecon/tomogravity.hpp"

using namespace netrecon;

namespace {

MarginalVector spec_n3_marginals() {
  return MarginalVector(Vector{{3, 3, 4}}, Vector{{4, 2, 4}});
}

Matrix random_feasible_mu(Rng& rng, const MarginalVector& m) {
  const Index n = m.size();
  Matrix mu(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      mu(i, j) = (i == j || !(m.out(i) > 0) || !(m.in(j) > 0)) ? 0.0 : rng.uniform(0.01, 5.0);
  return mu;
}

}  // namespace

TEST_CASE("loss closed forms") {
  const MarginalVector m2(Vector{{3, 5}}, Vector{{5, 3}});
  Matrix exact(2, 2);
  exact << 0, 3, 5, 0;
  TomogravityConfig zero;
  zero.psi = 0.0;
  CHECK(tomogravity_loss(exact, m2, zero) == 0.0);

  // All-zero prediction leaves the squared marginals.
  CHECK(tomogravity_loss(Matrix::Zero(2, 2), m2, zero) ==
        doctest::Approx(9 + 25 + 25 + 9).epsilon(1e-15));
}

TEST_CASE("loss matches direct summation on the n=3 gravity fit") {
  const MarginalVector m = spec_n3_marginals();
  const Matrix mu = gravity_fit(m);
  TomogravityConfig cfg;  // psi = 0.01

  // direct summation, coded flat
  double quad = 0.0;
  for (Index i = 0; i < 3; ++i) {
    double rs = 0, cs = 0;
    for (Index j = 0; j < 3; ++j) {
      rs += mu(i, j);
      cs += mu(j, i);
    }
    quad += (rs - m.out(i)) * (rs - m.out(i)) + (cs - m.in(i)) * (cs - m.in(i));
  }
  double pen = 0.0;
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j)
      if (i != j && mu(i, j) > 0)
        pen += mu(i, j) / 6.0 * std::log(mu(i, j) / (m.out(i) * m.in(j)));
  const double expect = quad + cfg.psi * cfg.psi * pen;
  CHECK(tomogravity_loss(mu, m, cfg) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("loss domain errors") {
  const MarginalVector m(Vector{{0, 5}}, Vector{{5, 0}});
  Matrix mu = Matrix::Zero(2, 2);
  mu(0, 1) = 1.0;  // out_0 = 0 so the product is zero here
  CHECK_THROWS_AS(tomogravity_loss(mu, m, TomogravityConfig{}), DomainError);

  Matrix neg = Matrix::Zero(2, 2);
  neg(1, 0) = -0.5;
  CHECK_THROWS_AS(tomogravity_loss(neg, m, TomogravityConfig{}), DomainError);
}

TEST_CASE("analytic gradient matches central finite differences") {
  Rng rng(101);
  TomogravityConfig cfg;
  int checked = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 3 + static_cast<Index>(rng.below(4));
    Matrix x(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) x(i, j) = i == j ? 0.0 : rng.uniform(0.2, 4.0);
    const MarginalVector m = compute_marginals(WeightedNetwork(x));
    Matrix mu = random_feasible_mu(rng, m);
    const Matrix grad = tomogravity_gradient(mu, m, cfg);
    for (int probe = 0; probe < 10; ++probe) {
      const Index i = static_cast<Index>(rng.below(n));
      Index j = static_cast<Index>(rng.below(n));
      if (i == j) j = (j + 1) % n;
      const double h = 1e-6 * std::max(1.0, mu(i, j));
      Matrix up = mu, dn = mu;
      up(i, j) += h;
      dn(i, j) -= h;
      const double fd = (tomogravity_loss(up, m, cfg) - tomogravity_loss(dn, m, cfg)) / (2 * h);
      CHECK(grad(i, j) == doctest::Approx(fd).epsilon(1e-5));
      ++checked;
    }
  }
  CHECK(checked == 100);
}

TEST_CASE("psi=0 n=2 recovers the unique least-squares point") {
  TomogravityConfig cfg;
  cfg.psi = 0.0;
  const TomogravityFit fit = tomogravity_fit(MarginalVector(Vector{{3, 5}}, Vector{{5, 3}}), cfg);
  CHECK(fit.mu(0, 1) == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(fit.mu(1, 0) == doctest::Approx(5.0).epsilon(1e-10));
}

TEST_CASE("psi=0 reaches the marginals on feasible instances") {
  Rng rng(7);
  TomogravityConfig cfg;
  cfg.psi = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const Index n = 4 + static_cast<Index>(rng.below(8));
    Matrix x(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        x(i, j) = (i == j || rng.uniform() < 0.3) ? 0.0 : rng.uniform(0.5, 10.0);
    const MarginalVector m = compute_marginals(WeightedNetwork(x));
    const TomogravityFit fit = tomogravity_fit(m, cfg);
    const double ynorm =
        std::sqrt(m.out_sums().squaredNorm() + m.in_sums().squaredNorm());
    CHECK(fit.marginal_residual <= 1e-6 * ynorm);
  }
}

// Second, independently coded optimizer: scalar Gauss-Seidel sweeps over
// the stationarity system, one monotone 1-D solve per variable.
namespace {

Matrix gs_reference(const MarginalVector& m, double psi, int max_sweeps) {
  const Index n = m.size();
  const double w = psi * psi / static_cast<double>(n * (n - 1));
  Matrix B(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      B(i, j) = (i == j) ? 0.0 : m.out(i) * m.in(j) * std::exp(-1.0);
  Vector s = Vector::Zero(n), t = Vector::Zero(n);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double change = 0.0;
    for (Index i = 0; i < n; ++i) {
      double r = 0.0;
      for (Index j = 0; j < n; ++j) r += B(i, j) * std::exp(t(j));
      if (r <= 0.0) continue;
      double v = s(i);
      for (int k = 0; k < 100; ++k) {
        const double es = std::exp(v);
        const double step = (es * r + 0.5 * w * v - m.out(i)) / (es * r + 0.5 * w);
        v -= step;
        if (std::abs(step) < 1e-16 * (1.0 + std::abs(v))) break;
      }
      change = std::max(change, std::abs(v - s(i)));
      s(i) = v;
    }
    for (Index j = 0; j < n; ++j) {
      double c = 0.0;
      for (Index i = 0; i < n; ++i) c += B(i, j) * std::exp(s(i));
      if (c <= 0.0) continue;
      double v = t(j);
      for (int k = 0; k < 100; ++k) {
        const double et = std::exp(v);
        const double step = (et * c + 0.5 * w * v - m.in(j)) / (et * c + 0.5 * w);
        v -= step;
        if (std::abs(step) < 1e-16 * (1.0 + std::abs(v))) break;
      }
      change = std::max(change, std::abs(v - t(j)));
      t(j) = v;
    }
    if (change < 1e-15) break;
  }
  Matrix mu(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      mu(i, j) = (i == j) ? 0.0 : B(i, j) * std::exp(s(i) + t(j));
  return mu;
}

}  // namespace

TEST_CASE("psi=0.01 fit agrees with the independent optimizer") {
  const MarginalVector m = spec_n3_marginals();
  TomogravityConfig cfg;
  const TomogravityFit fit = tomogravity_fit(m, cfg);
  const Matrix ref = gs_reference(m, cfg.psi, 20000);
  const double loss_fit = tomogravity_loss(fit.mu, m, cfg);
  const double loss_ref = tomogravity_loss(ref, m, cfg);
  CHECK(loss_fit <= loss_ref + 1e-12);
  CHECK((fit.mu - ref).cwiseAbs().maxCoeff() < 1e-5);
  // Interior stationarity of the returned fit.
  CHECK(fit.grad_norm < 1e-8);
}

TEST_CASE("very large psi drives mu to the marginal products over e") {
  const MarginalVector m = spec_n3_marginals();
  TomogravityConfig cfg;
  cfg.psi = 1e6;
  const TomogravityFit fit = tomogravity_fit(m, cfg);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) {
      if (i == j) continue;
      const double want = m.out(i) * m.in(j) / std::exp(1.0);
      CHECK(fit.mu(i, j) == doctest::Approx(want).epsilon(1e-6));
    }
}

TEST_CASE("line-search objective is non-increasing") {
  Rng rng(55);
  for (int trial = 0; trial < 5; ++trial) {
    const Index n = 4 + static_cast<Index>(rng.below(6));
    Matrix x(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) x(i, j) = i == j ? 0.0 : rng.uniform(0.1, 8.0);
    const MarginalVector m = compute_marginals(WeightedNetwork(x));
    const TomogravityFit fit = tomogravity_fit(m, TomogravityConfig{});
    for (size_t k = 1; k < fit.objective_history.size(); ++k)
      CHECK(fit.objective_history[k] <= fit.objective_history[k - 1]);
  }
}
