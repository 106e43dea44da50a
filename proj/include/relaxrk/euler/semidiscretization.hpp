#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "relaxrk/euler/mesh.hpp"
#include "relaxrk/euler/physics.hpp"
#include "relaxrk/euler/sbp.hpp"
#include "relaxrk/ode_system.hpp"

namespace relaxrk::euler {

/// Primitive state (rho, u_1[, u_2], P) at a point and time.
using PrimitiveFunction = std::function<std::vector<double>(std::array<double, 2> x, double t)>;

/// Flux-differencing SBP-SAT discretization of the Euler equations with one
/// entropy partition per element.
///
/// The state vector is element-blocked: entry ((e * npe + node) * nvar + var),
/// with node = i + (p + 1) j in 2D (i along x). Exterior states for Dirichlet
/// boundaries come from `exterior`, which must be safe to call concurrently.
class EulerSystemBase : public OdeSystem {
 public:
  EulerSystemBase(GasModel gas, Mesh mesh, int p, InterfaceMode mode, PrimitiveFunction exterior);

  int spatial_dim() const noexcept { return mesh_.dim(); }
  std::size_t num_vars() const noexcept { return static_cast<std::size_t>(mesh_.dim()) + 2; }
  std::size_t nodes_per_element() const noexcept { return npe_; }
  std::size_t num_elements() const noexcept { return mesh_.num_elements(); }
  std::size_t index(std::size_t e, std::size_t node, std::size_t var) const noexcept {
    return (e * npe_ + node) * num_vars() + var;
  }

  const GasModel& gas() const noexcept { return gas_; }
  const Mesh& mesh() const noexcept { return mesh_; }
  const SbpOperator& sbp() const noexcept { return sbp_; }
  InterfaceMode interface_mode() const noexcept { return mode_; }
  const PrimitiveFunction& exterior() const noexcept { return exterior_; }

  std::array<double, 2> node_point(std::size_t e, std::size_t node) const noexcept;
  /// Quadrature weight omega_i (omega_j) J of a node; identical for every element.
  double node_weight(std::size_t node) const noexcept { return node_weight_[node]; }
  double total_volume() const noexcept;

  /// Nodal interpolation of primitive data. With `nudge`, nodes on element
  /// faces sample the data 1e-12 element widths inside their own element, so
  /// discontinuities placed on faces are resolved from the correct side.
  std::vector<double> project(const PrimitiveFunction& f, double t, bool nudge = false) const;
  std::vector<double> primitive(std::span<const double> u, std::size_t e, std::size_t node) const;

  std::size_t dim() const override { return num_elements() * npe_ * num_vars(); }
  std::size_t num_partitions() const override { return num_elements(); }
  std::size_t partition_of(std::size_t index) const override { return index / (npe_ * num_vars()); }
  std::vector<double> linear_invariants(std::span<const double> u) const override;

  /// Face-based single-threaded reference of rhs, used for testing.
  virtual void rhs_reference(double t, std::span<const double> u, std::span<double> du) const = 0;

  std::vector<double> local_entropy(std::span<const double> u) const { return entropies(u); }
  std::vector<double> local_entropy_rate(std::span<const double> u, std::span<const double> du) const;

 protected:
  GasModel gas_;
  Mesh mesh_;
  SbpOperator sbp_;
  InterfaceMode mode_;
  PrimitiveFunction exterior_;
  std::size_t npe_;
  std::vector<double> node_weight_;
};

template <int D>
class EulerSystem final : public EulerSystemBase {
 public:
  using EulerSystemBase::EulerSystemBase;

  void rhs(double t, std::span<const double> u, std::span<double> du) const override;
  void rhs_reference(double t, std::span<const double> u, std::span<double> du) const override;
  void entropy(std::span<const double> u, std::span<double> eta) const override;
  void entropy_rate(double t, std::span<const double> u, std::span<const double> du,
                    std::span<double> rate) const override;
  double partition_entropy(std::size_t k, std::span<const double> u) const override;
  double entropy_increment(std::size_t k, std::span<const double> u, std::span<const double> d,
                           double gamma) const override;

  State<D> load(std::span<const double> u, std::size_t e, std::size_t node) const noexcept {
    State<D> q;
    const std::size_t base = index(e, node, 0);
    for (int v = 0; v < D + 2; ++v) q[v] = u[base + v];
    return q;
  }

  /// Exterior conservative state for the face node `node` of element e.
  State<D> exterior_state(std::size_t e, std::size_t node, double t) const;

 private:
  void element_rhs(double t, std::size_t e, std::span<const double> u, std::span<double> du) const;
  double element_entropy(std::size_t e, std::span<const double> u) const;
};

extern template class EulerSystem<1>;
extern template class EulerSystem<2>;

std::unique_ptr<EulerSystemBase> make_euler_system(const GasModel& gas, const Mesh& mesh, int p, InterfaceMode mode,
                                                   PrimitiveFunction exterior = {});

}  // namespace relaxrk::euler
