#include "relaxrk/euler/sbp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "relaxrk/errors.hpp"

namespace relaxrk::euler {

double SbpOperator::b(std::size_t i, std::size_t j) const noexcept {
  if (i != j) return 0.0;
  if (i == 0) return -1.0;
  if (i + 1 == nodes.size()) return 1.0;
  return 0.0;
}

double SbpOperator::sbp_defect() const {
  const std::size_t n = size();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double q = weights[i] * d(i, j) + d(j, i) * weights[j] - b(i, j);
      worst = std::max(worst, std::abs(q));
    }
  }
  return worst;
}

SbpOperator lgl_operator(int p) {
  if (p < 1 || p > 8) throw ConfigError("polynomial degree must be in [1, 8], got " + std::to_string(p));
  const std::size_t n = static_cast<std::size_t>(p) + 1;

  // Newton iteration on (1 - x^2) P_p'(x) from the Chebyshev-Gauss-Lobatto points.
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = -std::cos(std::numbers::pi * static_cast<double>(i) / p);
  std::vector<double> P(n * n);
  auto legendre = [&](std::size_t i) {
    P[i * n + 0] = 1.0;
    P[i * n + 1] = x[i];
    for (std::size_t k = 2; k < n; ++k) {
      const double kd = static_cast<double>(k);
      P[i * n + k] = ((2.0 * kd - 1.0) * x[i] * P[i * n + k - 1] - (kd - 1.0) * P[i * n + k - 2]) / kd;
    }
  };
  for (int it = 0; it < 100; ++it) {
    double change = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      legendre(i);
      const double step = (x[i] * P[i * n + p] - P[i * n + p - 1]) / (static_cast<double>(n) * P[i * n + p]);
      x[i] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-16) break;
  }
  x.front() = -1.0;
  x.back() = 1.0;
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double sym = 0.5 * (x[n - 1 - i] - x[i]);
    x[i] = -sym;
    x[n - 1 - i] = sym;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;

  SbpOperator op;
  op.p = p;
  op.nodes = x;
  op.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    legendre(i);
    const double Pp = P[i * n + p];
    op.weights[i] = 2.0 / (static_cast<double>(p) * static_cast<double>(n) * Pp * Pp);
  }
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double sym = 0.5 * (op.weights[i] + op.weights[n - 1 - i]);
    op.weights[i] = sym;
    op.weights[n - 1 - i] = sym;
  }

  // Barycentric collocation derivative; the diagonal is the negative row sum.
  std::vector<double> lambda(n, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k != j) lambda[j] *= x[j] - x[k];
    }
    lambda[j] = 1.0 / lambda[j];
  }
  op.D.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double dij = (lambda[j] / lambda[i]) / (x[i] - x[j]);
      op.D[i * n + j] = dij;
      row += dij;
    }
    op.D[i * n + i] = -row;
  }
  return op;
}

}  // namespace relaxrk::euler
