#include "hbz/linear_solve.hpp"

#include <cmath>
#include <vector>

namespace hbz {

namespace {

void axpy(double a, const CoeffSequence& x, CoeffSequence& y) {
  for (std::size_t i = 1; i <= x.size(); ++i) y(i) += a * x(i);
}

}  // namespace

GmresResult gmres(const LinearMap& op, const LinearMap& precond, const CoeffSequence& rhs,
                  const GmresOptions& options) {
  const std::size_t n = rhs.size();
  const double target = options.rel_tol * l2_norm(rhs);

  GmresResult result;
  result.x = precond(rhs).resized(n);
  CoeffSequence r = rhs - op(result.x);
  double beta = l2_norm(r);
  result.residual_norm = beta;
  if (beta <= target) {
    result.converged = true;
    return result;
  }

  const auto m = static_cast<std::size_t>(options.restart);
  while (result.iterations < options.max_iter) {
    std::vector<CoeffSequence> basis;  // V
    std::vector<CoeffSequence> precond_basis;  // M V
    std::vector<std::vector<double>> h(m + 1, std::vector<double>(m, 0.0));
    std::vector<double> cs(m, 0.0);
    std::vector<double> sn(m, 0.0);
    std::vector<double> g(m + 1, 0.0);
    g[0] = beta;
    basis.push_back((1.0 / beta) * r);

    std::size_t j = 0;
    for (; j < m && result.iterations < options.max_iter; ++j) {
      ++result.iterations;
      precond_basis.push_back(precond(basis[j]).resized(n));
      CoeffSequence v = op(precond_basis[j]);
      for (std::size_t i = 0; i <= j; ++i) {
        h[i][j] = dot(v, basis[i]);
        axpy(-h[i][j], basis[i], v);
      }
      const double hn = l2_norm(v);
      h[j + 1][j] = hn;

      for (std::size_t i = 0; i < j; ++i) {
        const double t = cs[i] * h[i][j] + sn[i] * h[i + 1][j];
        h[i + 1][j] = -sn[i] * h[i][j] + cs[i] * h[i + 1][j];
        h[i][j] = t;
      }
      const double denom = std::hypot(h[j][j], h[j + 1][j]);
      cs[j] = h[j][j] / denom;
      sn[j] = h[j + 1][j] / denom;
      h[j][j] = denom;
      h[j + 1][j] = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];

      // A zero hn means the Krylov space is invariant and the solve is exact.
      if (std::abs(g[j + 1]) <= target || hn == 0.0) {
        ++j;
        break;
      }
      basis.push_back((1.0 / hn) * v);
    }

    // Back substitution for the Krylov coefficients.
    std::vector<double> y(j, 0.0);
    for (std::size_t ii = j; ii-- > 0;) {
      double s = g[ii];
      for (std::size_t k = ii + 1; k < j; ++k) s -= h[ii][k] * y[k];
      y[ii] = s / h[ii][ii];
    }
    for (std::size_t i = 0; i < j; ++i) axpy(y[i], precond_basis[i], result.x);

    r = rhs - op(result.x);
    beta = l2_norm(r);
    result.residual_norm = beta;
    if (beta <= target) {
      result.converged = true;
      return result;
    }
  }
  return result;
}

}  // namespace hbz
