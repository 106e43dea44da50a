#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace relaxrk {

/// Autonomous-or-not ODE u' = f(t, u) together with K convex partition
/// entropies eta_k(u) whose sum is the total entropy.
///
/// Implementations must be safe to call concurrently from several threads
/// (all methods are const and must not touch shared mutable state).
class OdeSystem {
 public:
  virtual ~OdeSystem() = default;

  virtual std::size_t dim() const = 0;
  virtual std::size_t num_partitions() const = 0;

  virtual void rhs(double t, std::span<const double> u, std::span<double> du) const = 0;

  /// eta_k(u) for every partition k.
  virtual void entropy(std::span<const double> u, std::span<double> eta) const = 0;

  /// (eta_k' f)(u) for every k, given du = f(t, u).
  virtual void entropy_rate(double t, std::span<const double> u, std::span<const double> du,
                            std::span<double> rate) const = 0;

  /// eta_k(u) for a single partition. The default evaluates all partitions.
  virtual double partition_entropy(std::size_t k, std::span<const double> u) const;

  /// eta_k(u + gamma d) - eta_k(u). Overrides should avoid the cancellation
  /// of the naive difference; +infinity signals an inadmissible state.
  virtual double entropy_increment(std::size_t k, std::span<const double> u, std::span<const double> d,
                                   double gamma) const;

  /// Conserved linear functionals (e.g. total mass, momentum, energy).
  virtual std::vector<double> linear_invariants(std::span<const double> u) const;

  /// Partition owning state entry `index`, used for diagnostics.
  virtual std::size_t partition_of(std::size_t index) const;

  std::vector<double> entropies(std::span<const double> u) const;
  double total_entropy(std::span<const double> u) const;
};

}  // namespace relaxrk
