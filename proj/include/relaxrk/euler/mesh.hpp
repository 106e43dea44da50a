#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>

namespace relaxrk::euler {

enum class Boundary { periodic, dirichlet };

Boundary parse_boundary(const std::string& name);
std::string to_string(Boundary bc);

/// Uniform Cartesian mesh of N elements per direction. Elements are numbered
/// e = ex + N * ey.
class Mesh {
 public:
  Mesh(int dim, std::size_t elements_per_dir, std::array<double, 2> lower, std::array<double, 2> upper,
       std::array<Boundary, 2> bc);

  static Mesh line(std::size_t n, double a, double b, Boundary bc);
  static Mesh square(std::size_t n, double a, double b, Boundary bc);

  int dim() const noexcept { return dim_; }
  std::size_t elements_per_dir() const noexcept { return n_; }
  std::size_t num_elements() const noexcept { return dim_ == 1 ? n_ : n_ * n_; }
  double lower(int d) const noexcept { return lower_[d]; }
  double upper(int d) const noexcept { return upper_[d]; }
  Boundary bc(int d) const noexcept { return bc_[d]; }
  bool fully_periodic() const noexcept;

  double width(int d) const noexcept { return (upper_[d] - lower_[d]) / static_cast<double>(n_); }
  /// Half element width in direction d.
  double jacobian(int d) const noexcept { return 0.5 * width(d); }
  /// Element volume scale J_1 (* J_2).
  double volume_jacobian() const noexcept;

  std::array<std::size_t, 2> element_coords(std::size_t e) const noexcept;
  /// Neighbor across the face on `side` (0 = lower, 1 = upper) in direction d,
  /// or nullopt on a Dirichlet boundary.
  std::optional<std::size_t> neighbor(std::size_t e, int d, int side) const noexcept;

  /// Physical coordinate of reference point xi in element e.
  std::array<double, 2> point(std::size_t e, std::array<double, 2> xi) const noexcept;

 private:
  int dim_;
  std::size_t n_;
  std::array<double, 2> lower_;
  std::array<double, 2> upper_;
  std::array<Boundary, 2> bc_;
};

}  // namespace relaxrk::euler
