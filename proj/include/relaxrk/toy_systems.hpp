#pragma once

#include "relaxrk/ode_system.hpp"

namespace relaxrk {

/// Scalar u' = -exp(u) with entropy eta = exp(u); u(t) = -ln(exp(-u0) + t).
class ExpEntropyOde final : public OdeSystem {
 public:
  std::size_t dim() const override { return 1; }
  std::size_t num_partitions() const override { return 1; }
  void rhs(double t, std::span<const double> u, std::span<double> du) const override;
  void entropy(std::span<const double> u, std::span<double> eta) const override;
  void entropy_rate(double t, std::span<const double> u, std::span<const double> du,
                    std::span<double> rate) const override;
  double partition_entropy(std::size_t k, std::span<const double> u) const override;
  double entropy_increment(std::size_t k, std::span<const double> u, std::span<const double> d,
                           double gamma) const override;

  static double exact(double u0, double t);
};

/// Rotation u' = omega (-u2, u1) with the conserved quadratic entropy |u|^2 / 2.
class RotationOde final : public OdeSystem {
 public:
  explicit RotationOde(double omega = 1.0) : omega_(omega) {}
  std::size_t dim() const override { return 2; }
  std::size_t num_partitions() const override { return 1; }
  void rhs(double t, std::span<const double> u, std::span<double> du) const override;
  void entropy(std::span<const double> u, std::span<double> eta) const override;
  void entropy_rate(double t, std::span<const double> u, std::span<const double> du,
                    std::span<double> rate) const override;
  double partition_entropy(std::size_t k, std::span<const double> u) const override;
  double entropy_increment(std::size_t k, std::span<const double> u, std::span<const double> d,
                           double gamma) const override;

  double omega() const noexcept { return omega_; }

 private:
  double omega_;
};

}  // namespace relaxrk
