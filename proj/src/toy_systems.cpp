#include "relaxrk/toy_systems.hpp"

#include <cmath>

namespace relaxrk {

void ExpEntropyOde::rhs(double, std::span<const double> u, std::span<double> du) const { du[0] = -std::exp(u[0]); }

void ExpEntropyOde::entropy(std::span<const double> u, std::span<double> eta) const { eta[0] = std::exp(u[0]); }

void ExpEntropyOde::entropy_rate(double, std::span<const double> u, std::span<const double> du,
                                 std::span<double> rate) const {
  rate[0] = std::exp(u[0]) * du[0];
}

double ExpEntropyOde::partition_entropy(std::size_t, std::span<const double> u) const { return std::exp(u[0]); }

double ExpEntropyOde::entropy_increment(std::size_t, std::span<const double> u, std::span<const double> d,
                                        double gamma) const {
  return std::exp(u[0]) * std::expm1(gamma * d[0]);
}

double ExpEntropyOde::exact(double u0, double t) { return -std::log(std::exp(-u0) + t); }

void RotationOde::rhs(double, std::span<const double> u, std::span<double> du) const {
  du[0] = -omega_ * u[1];
  du[1] = omega_ * u[0];
}

void RotationOde::entropy(std::span<const double> u, std::span<double> eta) const {
  eta[0] = 0.5 * (u[0] * u[0] + u[1] * u[1]);
}

void RotationOde::entropy_rate(double, std::span<const double> u, std::span<const double> du,
                               std::span<double> rate) const {
  rate[0] = u[0] * du[0] + u[1] * du[1];
}

double RotationOde::partition_entropy(std::size_t, std::span<const double> u) const {
  return 0.5 * (u[0] * u[0] + u[1] * u[1]);
}

double RotationOde::entropy_increment(std::size_t, std::span<const double> u, std::span<const double> d,
                                      double gamma) const {
  const double ud = u[0] * d[0] + u[1] * d[1];
  const double dd = d[0] * d[0] + d[1] * d[1];
  return gamma * ud + 0.5 * gamma * gamma * dd;
}

}  // namespace relaxrk
