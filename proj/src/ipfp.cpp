#include "netrecon/ipfp.hpp"

#include <cmath>
#include <limits>

namespace netrecon {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double max_relative_deviation(const Matrix& mu, const Vector& out, const Vector& in) {
  double dev = 0.0;
  const Vector rs = mu.rowwise().sum();
  const Vector cs = mu.colwise().sum().transpose();
  for (Index i = 0; i < out.size(); ++i) {
    dev = std::max(dev, std::abs(rs(i) - out(i)) / std::max(1.0, out(i)));
    dev = std::max(dev, std::abs(cs(i) - in(i)) / std::max(1.0, in(i)));
  }
  return dev;
}

struct ScalingState {
  Matrix mu;
  Vector row_factor;
  Vector col_factor;
  int iterations = 0;
  std::vector<double> history;
};

// Core scaling loop. `base` must be zero outside the allowed set
// (diagonal, zero-marginal rows/columns, off-support dyads).
ScalingState scale_to_marginals(Matrix base, const Vector& out, const Vector& in,
                                double tol, int max_iter, const std::atomic<bool>* cancel) {
  const Index n = out.size();
  ScalingState s{std::move(base), Vector::Ones(n), Vector::Ones(n), 0, {}};
  for (int it = 0; it < max_iter; ++it) {
    if (cancel && cancel->load(std::memory_order_relaxed)) throw Cancelled("ipfp: cancelled");
    for (Index i = 0; i < n; ++i) {
      const double rs = s.mu.row(i).sum();
      if (out(i) > 0.0 && rs > 0.0) {
        const double f = out(i) / rs;
        s.mu.row(i) *= f;
        s.row_factor(i) *= f;
      }
    }
    for (Index j = 0; j < n; ++j) {
      const double cs = s.mu.col(j).sum();
      if (in(j) > 0.0 && cs > 0.0) {
        const double f = in(j) / cs;
        s.mu.col(j) *= f;
        s.col_factor(j) *= f;
      }
    }
    s.iterations = it + 1;
    const double dev = max_relative_deviation(s.mu, out, in);
    s.history.push_back(dev);
    if (dev < tol) break;
  }
  return s;
}

Matrix allowed_base(const MarginalVector& m, const BinaryStructure* support) {
  const Index n = m.size();
  Matrix base = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    if (m.out(i) <= 0.0) continue;
    for (Index j = 0; j < n; ++j) {
      if (i == j || m.in(j) <= 0.0) continue;
      if (support && support->at(i, j) == 0) continue;
      base(i, j) = 1.0;
    }
  }
  return base;
}

void check_balance(const MarginalVector& m) {
  const double so = m.out_sums().sum();
  const double si = m.in_sums().sum();
  if (std::abs(so - si) > 1e-9 * std::max({1.0, so, si}))
    throw InvalidMarginals("ipfp: sum(out) != sum(in)");
}

Vector log_or_neg_inf(const Vector& factor, const Vector& marginal) {
  Vector e(factor.size());
  for (Index i = 0; i < factor.size(); ++i)
    e(i) = marginal(i) > 0.0 ? std::log(factor(i)) : kNegInf;
  return e;
}

}  // namespace

IpfpResult ipfp_fit(const MarginalVector& m, const BinaryStructure* support,
                    double tol, int max_iter, const std::atomic<bool>* cancel) {
  check_balance(m);
  if (support && support->size() != m.size())
    throw DimensionMismatch("ipfp: support size mismatch");

  ScalingState s = scale_to_marginals(allowed_base(m, support), m.out_sums(), m.in_sums(),
                                      tol, max_iter, cancel);
  const double dev = s.history.empty() ? 0.0 : s.history.back();
  if (!(dev < tol))
    throw NonConvergence("ipfp: marginal deviation did not reach tolerance", dev);

  IpfpResult r;
  r.mu = std::move(s.mu);
  r.row_effects = log_or_neg_inf(s.row_factor, m.out_sums());
  r.col_effects = log_or_neg_inf(s.col_factor, m.in_sums());
  r.iterations = s.iterations;
  r.converged = true;
  r.deviation_history = std::move(s.history);
  return r;
}

EdgeProbabilityMatrix poisson_edge_probabilities(const IpfpResult& r) {
  const Index n = r.mu.rows();
  Matrix p = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j) p(i, j) = -std::expm1(-r.mu(i, j));
  return EdgeProbabilityMatrix(std::move(p));
}

IpfpResult ipfp_covariate_fit(const MarginalVector& m, const CovariateMatrix& c,
                              double tol, int max_iter, const std::atomic<bool>* cancel) {
  check_balance(m);
  const Index n = m.size();
  if (c.size() != n) throw DimensionMismatch("ipfp: covariate size mismatch");

  const Matrix mask = allowed_base(m, nullptr);
  const Index n_allowed = static_cast<Index>(mask.sum());
  if (n_allowed == 0) {
    IpfpResult r = ipfp_fit(m, nullptr, tol, max_iter, cancel);
    r.beta = 0.0;
    return r;
  }

  // Constant covariates are absorbed by the row/column effects, leaving
  // beta unidentifiable.
  double cmin = std::numeric_limits<double>::infinity(), cmax = -cmin;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (mask(i, j) > 0.0) {
        cmin = std::min(cmin, c.at(i, j));
        cmax = std::max(cmax, c.at(i, j));
      }
  if (cmax - cmin <= 1e-12 * std::max(1.0, std::max(std::abs(cmin), std::abs(cmax)))) {
    IpfpResult r = ipfp_fit(m, nullptr, tol, max_iter, cancel);
    r.beta = 0.0;
    r.covariate_degenerate = true;
    return r;
  }

  const double beta_cap = 500.0 / std::max(1.0, std::max(std::abs(cmin), std::abs(cmax)));

  const auto base_for = [&](double beta, double& shift) {
    shift = 0.0;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (mask(i, j) > 0.0) shift = std::max(shift, c.at(i, j) * beta);
    Matrix base = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (mask(i, j) > 0.0) base(i, j) = std::exp(c.at(i, j) * beta - shift);
    return base;
  };

  // Negative Poisson pseudo-likelihood of (intercept, beta) against the
  // current marginal-consistent fit mu.
  const auto neg_pll = [&](const Matrix& mu, double a, double beta) {
    double f = 0.0;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (mask(i, j) > 0.0) {
          const double eta = a + c.at(i, j) * beta;
          f += std::exp(eta) - mu(i, j) * eta;
        }
    return f;
  };

  double beta = 0.0;
  double intercept = std::log(std::max(m.total(), 1e-300) / static_cast<double>(n_allowed));
  const int max_outer = 500;
  const double inner_tol = std::min(tol, 1e-10);

  ScalingState s;
  double shift = 0.0;
  int outer = 0;
  bool converged = false;
  for (; outer < max_outer; ++outer) {
    s = scale_to_marginals(base_for(beta, shift), m.out_sums(), m.in_sums(), inner_tol,
                           max_iter, cancel);
    if (!(s.history.back() < inner_tol))
      throw NonConvergence("ipfp: inner scaling did not converge", s.history.back());

    // Newton on (intercept, beta) with step halving.
    double a = intercept, b = beta;
    for (int k = 0; k < 100; ++k) {
      double sw = 0.0, scw = 0.0, sccw = 0.0, smu = 0.0, scmu = 0.0;
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
          if (mask(i, j) > 0.0) {
            const double cij = c.at(i, j);
            const double w = std::exp(a + cij * b);
            sw += w;
            scw += cij * w;
            sccw += cij * cij * w;
            smu += s.mu(i, j);
            scmu += cij * s.mu(i, j);
          }
      const double g0 = sw - smu, g1 = scw - scmu;
      const double det = sw * sccw - scw * scw;
      if (!(det > 0.0) || !std::isfinite(det)) break;
      double d0 = (sccw * g0 - scw * g1) / det;
      double d1 = (sw * g1 - scw * g0) / det;
      const double f0 = neg_pll(s.mu, a, b);
      double step = 1.0;
      double na = a, nb = b;
      for (int h = 0; h < 60; ++h) {
        na = a - step * d0;
        nb = std::clamp(b - step * d1, -beta_cap, beta_cap);
        if (neg_pll(s.mu, na, nb) <= f0) break;
        step *= 0.5;
      }
      const bool done = std::abs(na - a) < 1e-13 * std::max(1.0, std::abs(a)) &&
                        std::abs(nb - b) < 1e-13 * std::max(1.0, std::abs(b));
      a = na;
      b = nb;
      if (done) break;
    }
    intercept = a;
    const double delta = std::abs(b - beta);
    beta = b;
    if (delta < tol) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NonConvergence("ipfp: covariate loop did not converge", 0.0);

  s = scale_to_marginals(base_for(beta, shift), m.out_sums(), m.in_sums(), inner_tol,
                         max_iter, cancel);

  IpfpResult r;
  r.mu = std::move(s.mu);
  r.row_effects = log_or_neg_inf(s.row_factor, m.out_sums());
  for (Index i = 0; i < n; ++i)
    if (m.out(i) > 0.0) r.row_effects(i) -= shift;
  r.col_effects = log_or_neg_inf(s.col_factor, m.in_sums());
  r.beta = beta;
  r.iterations = outer + 1;
  r.converged = true;
  r.deviation_history = std::move(s.history);
  return r;
}

}  // namespace netrecon
