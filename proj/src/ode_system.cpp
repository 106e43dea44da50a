#include "relaxrk/ode_system.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace relaxrk {

double OdeSystem::partition_entropy(std::size_t k, std::span<const double> u) const {
  std::vector<double> eta(num_partitions());
  entropy(u, eta);
  return eta[k];
}

double OdeSystem::entropy_increment(std::size_t k, std::span<const double> u, std::span<const double> d,
                                    double gamma) const {
  std::vector<double> shifted(u.begin(), u.end());
  for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += gamma * d[i];
  const double value = partition_entropy(k, shifted) - partition_entropy(k, u);
  return std::isnan(value) ? std::numeric_limits<double>::infinity() : value;
}

std::vector<double> OdeSystem::linear_invariants(std::span<const double>) const { return {}; }

std::size_t OdeSystem::partition_of(std::size_t) const { return 0; }

std::vector<double> OdeSystem::entropies(std::span<const double> u) const {
  std::vector<double> eta(num_partitions());
  entropy(u, eta);
  return eta;
}

double OdeSystem::total_entropy(std::span<const double> u) const {
  const auto eta = entropies(u);
  return std::accumulate(eta.begin(), eta.end(), 0.0);
}

}  // namespace relaxrk
