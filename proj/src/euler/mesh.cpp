#include "relaxrk/euler/mesh.hpp"

#include "relaxrk/errors.hpp"

namespace relaxrk::euler {

Boundary parse_boundary(const std::string& name) {
  if (name == "periodic") return Boundary::periodic;
  if (name == "dirichlet") return Boundary::dirichlet;
  throw ConfigError("unknown boundary condition '" + name + "' (valid: periodic, dirichlet)");
}

std::string to_string(Boundary bc) { return bc == Boundary::periodic ? "periodic" : "dirichlet"; }

Mesh::Mesh(int dim, std::size_t elements_per_dir, std::array<double, 2> lower, std::array<double, 2> upper,
           std::array<Boundary, 2> bc)
    : dim_(dim), n_(elements_per_dir), lower_(lower), upper_(upper), bc_(bc) {
  if (dim != 1 && dim != 2) throw ConfigError("mesh dimension must be 1 or 2");
  if (n_ < 1) throw ConfigError("mesh needs at least one element per direction");
  for (int d = 0; d < dim_; ++d) {
    if (!(upper_[d] > lower_[d])) throw ConfigError("mesh bounds must satisfy lower < upper");
  }
}

Mesh Mesh::line(std::size_t n, double a, double b, Boundary bc) {
  return Mesh(1, n, {a, 0.0}, {b, 1.0}, {bc, bc});
}

Mesh Mesh::square(std::size_t n, double a, double b, Boundary bc) {
  return Mesh(2, n, {a, a}, {b, b}, {bc, bc});
}

bool Mesh::fully_periodic() const noexcept {
  for (int d = 0; d < dim_; ++d) {
    if (bc_[d] != Boundary::periodic) return false;
  }
  return true;
}

double Mesh::volume_jacobian() const noexcept {
  double J = jacobian(0);
  if (dim_ == 2) J *= jacobian(1);
  return J;
}

std::array<std::size_t, 2> Mesh::element_coords(std::size_t e) const noexcept {
  if (dim_ == 1) return {e, 0};
  return {e % n_, e / n_};
}

std::optional<std::size_t> Mesh::neighbor(std::size_t e, int d, int side) const noexcept {
  auto c = element_coords(e);
  std::size_t& i = c[d];
  if (side == 0) {
    if (i == 0) {
      if (bc_[d] != Boundary::periodic) return std::nullopt;
      i = n_ - 1;
    } else {
      --i;
    }
  } else {
    if (i + 1 == n_) {
      if (bc_[d] != Boundary::periodic) return std::nullopt;
      i = 0;
    } else {
      ++i;
    }
  }
  return dim_ == 1 ? c[0] : c[0] + n_ * c[1];
}

std::array<double, 2> Mesh::point(std::size_t e, std::array<double, 2> xi) const noexcept {
  const auto c = element_coords(e);
  std::array<double, 2> x{0.0, 0.0};
  for (int d = 0; d < dim_; ++d) {
    x[d] = lower_[d] + (static_cast<double>(c[d]) + 0.5 * (xi[d] + 1.0)) * width(d);
  }
  return x;
}

}  // namespace relaxrk::euler
