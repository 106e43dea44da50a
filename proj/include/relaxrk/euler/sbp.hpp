#pragma once

#include <cstddef>
#include <vector>

namespace relaxrk::euler {

/// Diagonal-norm SBP operator on the Legendre-Gauss-Lobatto nodes of [-1, 1].
struct SbpOperator {
  int p = 0;
  std::vector<double> nodes;    // ascending, nodes.front() = -1, nodes.back() = 1
  std::vector<double> weights;  // diagonal of the norm P
  std::vector<double> D;        // row-major (p+1) x (p+1)

  std::size_t size() const noexcept { return nodes.size(); }
  double d(std::size_t i, std::size_t j) const noexcept { return D[i * nodes.size() + j]; }
  // B = diag(-1, 0, ..., 0, 1)
  double b(std::size_t i, std::size_t j) const noexcept;

  /// max |(P D + D^T P - B)_ij|
  double sbp_defect() const;
};

/// LGL operator of degree p, 1 <= p <= 8.
SbpOperator lgl_operator(int p);

}  // namespace relaxrk::euler
