#include "netrecon/tomogravity.hpp"

#include <cmath>
#include <limits>

#include "netrecon/gravity.hpp"

namespace netrecon {

namespace {

constexpr double kFloor = 1e-12;

Matrix marginal_products(const MarginalVector& m) {
  const Index n = m.size();
  Matrix g = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j) g(i, j) = m.out(i) * m.in(j);
  return g;
}

void check_domain(const MatrixRef& mu, const Matrix& g) {
  const Index n = g.rows();
  if (mu.rows() != n || mu.cols() != n)
    throw DimensionMismatch("tomogravity: mu size mismatch");
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      if (mu(i, j) < 0.0) throw DomainError("tomogravity: mu must be non-negative");
      if (mu(i, j) > 0.0 && g(i, j) <= 0.0)
        throw DomainError("tomogravity: mu must be zero where the marginal product is zero");
    }
}

// Least-squares-only fit (psi = 0) by diagonally scaled projected
// gradient with backtracking; any feasible point is optimal, so the
// rank-deficiency of the quadratic is harmless here.
TomogravityFit fit_least_squares(const MarginalVector& m, const TomogravityConfig& cfg,
                                 const Matrix& g) {
  const Index n = m.size();
  Matrix mu = gravity_fit(m);

  const auto project = [&](Matrix& x) {
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        if (i == j) continue;
        x(i, j) = g(i, j) > 0.0 ? std::max(x(i, j), 0.0) : 0.0;
      }
  };
  project(mu);

  TomogravityFit fit;
  double loss = tomogravity_loss(mu, m, cfg);
  fit.objective_history.push_back(loss);
  double step = 1.0;
  int it = 0;
  int stalled = 0;
  for (; it < cfg.max_iter; ++it) {
    const Matrix grad = tomogravity_gradient(mu, m, cfg);
    double move = 0.0;
    Matrix dir = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        if (i == j || g(i, j) <= 0.0) continue;
        if (mu(i, j) <= 0.0 && grad(i, j) > 0.0) continue;
        dir(i, j) = grad(i, j) / 4.0;  // Hessian diagonal of the two squared terms
        move = std::max(move, std::abs(dir(i, j)) / (1.0 + std::abs(mu(i, j))));
      }
    fit.grad_norm = grad.cwiseAbs().maxCoeff();
    if (move < cfg.tol) break;

    step = std::min(2.0 * step, 1.0);
    Matrix cand;
    double new_loss = loss;
    bool accepted = false;
    for (int h = 0; h < 80; ++h) {
      cand = mu - step * dir;
      project(cand);
      new_loss = tomogravity_loss(cand, m, cfg);
      if (new_loss <= loss) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    if (new_loss >= loss - 1e-16 * std::max(1.0, std::abs(loss)))
      ++stalled;
    else
      stalled = 0;
    mu = std::move(cand);
    loss = new_loss;
    fit.objective_history.push_back(loss);
    if (stalled > 50) break;
  }
  if (it >= cfg.max_iter)
    throw NonConvergence("tomogravity: least-squares descent hit max_iter", fit.grad_norm);
  fit.iterations = it;
  double res = 0.0;
  const Vector rs = mu.rowwise().sum();
  const Vector cs = mu.colwise().sum().transpose();
  for (Index i = 0; i < n; ++i) {
    res += (rs(i) - m.out(i)) * (rs(i) - m.out(i));
    res += (cs(i) - m.in(i)) * (cs(i) - m.in(i));
  }
  fit.marginal_residual = std::sqrt(res);
  fit.mu = std::move(mu);
  return fit;
}

}  // namespace

double tomogravity_loss(const MatrixRef& mu, const MarginalVector& m,
                        const TomogravityConfig& cfg) {
  const Matrix g = marginal_products(m);
  check_domain(mu, g);
  const Index n = m.size();
  const double N = static_cast<double>(dyad_count(n));

  double quad = 0.0;
  for (Index i = 0; i < n; ++i) {
    double rs = 0.0, cs = 0.0;
    for (Index k = 0; k < n; ++k) {
      if (k != i) rs += mu(i, k);
      if (k != i) cs += mu(k, i);
    }
    quad += (rs - m.out(i)) * (rs - m.out(i)) + (cs - m.in(i)) * (cs - m.in(i));
  }

  double penalty = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = mu(i, j);
      if (v > 0.0) penalty += (v / N) * std::log(v / g(i, j));
    }
  return quad + cfg.psi * cfg.psi * penalty;
}

Matrix tomogravity_gradient(const MatrixRef& mu, const MarginalVector& m,
                            const TomogravityConfig& cfg) {
  const Matrix g = marginal_products(m);
  check_domain(mu, g);
  const Index n = m.size();
  const double N = static_cast<double>(dyad_count(n));

  Vector row_res(n), col_res(n);
  for (Index i = 0; i < n; ++i) {
    double rs = 0.0, cs = 0.0;
    for (Index k = 0; k < n; ++k) {
      if (k != i) rs += mu(i, k);
      if (k != i) cs += mu(k, i);
    }
    row_res(i) = rs - m.out(i);
    col_res(i) = cs - m.in(i);
  }

  Matrix grad = Matrix::Zero(n, n);
  const double w = cfg.psi * cfg.psi / N;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (i == j || g(i, j) <= 0.0) continue;
      const double v = std::max(mu(i, j), kFloor);
      grad(i, j) = 2.0 * (row_res(i) + col_res(j)) + w * (std::log(v / g(i, j)) + 1.0);
    }
  return grad;
}

// For psi > 0 the stationarity condition forces the product form
// mu_ij = g_ij * exp(-1 + s_i + t_j) with s, t tied to the marginal
// residuals. The fit minimizes the strictly convex potential
//   Phi(s,t) = sum_ij g_ij e^{-1+s_i+t_j} + (w/4)(|s|^2+|t|^2)
//              - sum_i out_i s_i - sum_j in_j t_j,  w = psi^2/N,
// by damped Newton. First-order descent on the raw loss stalls in the
// null space of the marginal map, where only the psi^2-penalty curves
// the objective, so the fit works in these dual variables instead.
TomogravityFit tomogravity_fit(const MarginalVector& m, const TomogravityConfig& cfg) {
  const Index n = m.size();
  const Matrix g = marginal_products(m);
  if (!(m.total() > 0.0)) throw ZeroTotal("tomogravity: total flow is zero");
  if (!(cfg.psi >= 0.0)) throw InvalidArgument("tomogravity: psi must be >= 0");
  if (cfg.psi == 0.0) return fit_least_squares(m, cfg, g);

  const double w = cfg.psi * cfg.psi / static_cast<double>(dyad_count(n));
  const Matrix B = g * std::exp(-1.0);
  Vector s = Vector::Zero(n), t = Vector::Zero(n);

  const auto mu_of = [&](const Vector& sv, const Vector& tv) {
    Matrix mu = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        if (i == j || B(i, j) <= 0.0) continue;
        const double e = sv(i) + tv(j);
        mu(i, j) = e > 700.0 ? std::numeric_limits<double>::infinity()
                             : B(i, j) * std::exp(e);
      }
    return mu;
  };

  const auto potential = [&](const Vector& sv, const Vector& tv) {
    double phi = 0.25 * w * (sv.squaredNorm() + tv.squaredNorm());
    phi -= m.out_sums().dot(sv) + m.in_sums().dot(tv);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        if (i == j || B(i, j) <= 0.0) continue;
        const double e = sv(i) + tv(j);
        if (e > 700.0) return std::numeric_limits<double>::infinity();
        phi += B(i, j) * std::exp(e);
      }
    return phi;
  };

  TomogravityFit fit;
  double phi = potential(s, t);
  fit.objective_history.push_back(phi);

  Eigen::MatrixXd H(2 * n, 2 * n);
  Eigen::VectorXd grad(2 * n);
  int it = 0;
  int stalled = 0;
  for (; it < cfg.max_iter; ++it) {
    const Matrix mu = mu_of(s, t);
    const Vector rs = mu.rowwise().sum();
    const Vector cs = mu.colwise().sum().transpose();
    for (Index i = 0; i < n; ++i) {
      grad(i) = rs(i) + 0.5 * w * s(i) - m.out(i);
      grad(n + i) = cs(i) + 0.5 * w * t(i) - m.in(i);
    }
    const double scale = std::max(1.0, std::max(m.out_sums().maxCoeff(), m.in_sums().maxCoeff()));
    if (grad.cwiseAbs().maxCoeff() <= cfg.tol * scale) break;

    H.setZero();
    for (Index i = 0; i < n; ++i) {
      H(i, i) = rs(i) + 0.5 * w;
      H(n + i, n + i) = cs(i) + 0.5 * w;
    }
    H.block(0, n, n, n) = mu;
    H.block(n, 0, n, n) = mu.transpose();
    const Eigen::VectorXd d = H.ldlt().solve(grad);

    double step = 1.0;
    bool accepted = false;
    Vector ns = s, nt = t;
    double new_phi = phi;
    for (int h = 0; h < 80; ++h) {
      ns = s - step * d.head(n);
      nt = t - step * d.tail(n);
      new_phi = potential(ns, nt);
      if (new_phi <= phi) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // at numerical stationarity
    // The line search cannot resolve potential differences below machine
    // precision; stop once improvements have flatlined there.
    if (new_phi >= phi - 1e-15 * std::max(1.0, std::abs(phi)))
      ++stalled;
    else
      stalled = 0;
    s = ns;
    t = nt;
    phi = new_phi;
    fit.objective_history.push_back(phi);
    if (stalled > 5) break;
  }
  if (it >= cfg.max_iter)
    throw NonConvergence("tomogravity: Newton iteration hit max_iter",
                         grad.cwiseAbs().maxCoeff());

  Matrix mu = mu_of(s, t);
  fit.iterations = it;
  fit.grad_norm = tomogravity_gradient(mu, m, cfg).cwiseAbs().maxCoeff();

  double res = 0.0;
  const Vector rs = mu.rowwise().sum();
  const Vector cs = mu.colwise().sum().transpose();
  for (Index i = 0; i < n; ++i) {
    res += (rs(i) - m.out(i)) * (rs(i) - m.out(i));
    res += (cs(i) - m.in(i)) * (cs(i) - m.in(i));
  }
  fit.marginal_residual = std::sqrt(res);
  fit.mu = std::move(mu);
  return fit;
}

}  // namespace netrecon
