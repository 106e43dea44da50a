#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "relaxrk/errors.hpp"

namespace relaxrk::euler {

/// Calorically perfect gas, P = rho R T.
struct GasModel {
  double gamma = 1.4;
  double R = 1.0;

  void validate() const;
};

/// Conservative variables (rho, rho u_1, ..., rho u_D, rho E).
template <int D>
using State = std::array<double, D + 2>;

/// Primitive variables (rho, u_1, ..., u_D, P) in the same slot order.
template <int D>
using Primitive = std::array<double, D + 2>;

enum class InterfaceMode { ec, es_rusanov };

InterfaceMode parse_interface_mode(const std::string& name);
std::string to_string(InterfaceMode mode);

template <int D>
inline double kinetic_energy(const State<D>& q) {
  double m2 = 0.0;
  for (int m = 0; m < D; ++m) m2 += q[1 + m] * q[1 + m];
  return 0.5 * m2 / q[0];
}

template <int D>
inline double pressure(const GasModel& gas, const State<D>& q) {
  return (gas.gamma - 1.0) * (q[D + 1] - kinetic_energy<D>(q));
}

template <int D>
inline bool admissible(const GasModel& gas, const State<D>& q) {
  return q[0] > 0.0 && pressure<D>(gas, q) > 0.0;
}

template <int D>
inline void require_admissible(const GasModel& gas, const State<D>& q, std::size_t element = 0,
                               std::size_t node = 0) {
  if (!(q[0] > 0.0) || !(pressure<D>(gas, q) > 0.0)) {
    throw StateError("nonpositive density or pressure (rho = " + std::to_string(q[0]) +
                         ", P = " + std::to_string(pressure<D>(gas, q)) + ") at element " +
                         std::to_string(element) + ", node " + std::to_string(node),
                     element, node);
  }
}

template <int D>
inline State<D> to_conservative(const GasModel& gas, const Primitive<D>& w) {
  State<D> q;
  q[0] = w[0];
  double u2 = 0.0;
  for (int m = 0; m < D; ++m) {
    q[1 + m] = w[0] * w[1 + m];
    u2 += w[1 + m] * w[1 + m];
  }
  q[D + 1] = w[D + 1] / (gas.gamma - 1.0) + 0.5 * w[0] * u2;
  return q;
}

template <int D>
inline Primitive<D> to_primitive(const GasModel& gas, const State<D>& q) {
  Primitive<D> w;
  w[0] = q[0];
  for (int m = 0; m < D; ++m) w[1 + m] = q[1 + m] / q[0];
  w[D + 1] = pressure<D>(gas, q);
  return w;
}

template <int D>
inline double sound_speed(const GasModel& gas, const State<D>& q) {
  return std::sqrt(gas.gamma * pressure<D>(gas, q) / q[0]);
}

template <int D>
inline double max_wave_speed(const GasModel& gas, const State<D>& q, int dir) {
  return std::abs(q[1 + dir] / q[0]) + sound_speed<D>(gas, q);
}

namespace detail {

template <int D>
inline State<D> physical_flux_unchecked(const GasModel& gas, const State<D>& q, int dir) {
  const double p = pressure<D>(gas, q);
  const double un = q[1 + dir] / q[0];
  State<D> f;
  f[0] = q[1 + dir];
  for (int m = 0; m < D; ++m) f[1 + m] = q[1 + m] * un;
  f[1 + dir] += p;
  f[D + 1] = un * (q[D + 1] + p);
  return f;
}

inline double log_mean_unchecked(double a, double b) {
  const double zeta = (a - b) / (a + b);
  const double z2 = zeta * zeta;
  if (z2 < 1e-4) {
    const double series = 1.0 + z2 * (1.0 / 3.0 + z2 * (1.0 / 5.0 + z2 * (1.0 / 7.0)));
    return 0.5 * (a + b) / series;
  }
  return (a - b) / (std::log(a) - std::log(b));
}

// Chandrashekar's kinetic-energy-preserving entropy-conservative flux.
template <int D>
inline State<D> ec_flux_unchecked(const GasModel& gas, const State<D>& qL, const State<D>& qR, int dir) {
  const double rhoL = qL[0];
  const double rhoR = qR[0];
  const double pL = pressure<D>(gas, qL);
  const double pR = pressure<D>(gas, qR);
  const double betaL = 0.5 * rhoL / pL;
  const double betaR = 0.5 * rhoR / pR;

  std::array<double, D> u_avg;
  double u2_avg = 0.0;
  for (int m = 0; m < D; ++m) {
    const double uL = qL[1 + m] / rhoL;
    const double uR = qR[1 + m] / rhoR;
    u_avg[m] = 0.5 * (uL + uR);
    u2_avg += 0.5 * (uL * uL + uR * uR);
  }
  const double rho_ln = log_mean_unchecked(rhoL, rhoR);
  const double beta_ln = log_mean_unchecked(betaL, betaR);
  const double p_tilde = 0.5 * (rhoL + rhoR) / (betaL + betaR);

  State<D> f;
  f[0] = rho_ln * u_avg[dir];
  double u_dot_fm = 0.0;
  for (int m = 0; m < D; ++m) {
    f[1 + m] = u_avg[m] * f[0];
    if (m == dir) f[1 + m] += p_tilde;
    u_dot_fm += u_avg[m] * f[1 + m];
  }
  f[D + 1] = (0.5 / ((gas.gamma - 1.0) * beta_ln) - 0.5 * u2_avg) * f[0] + u_dot_fm;
  return f;
}

template <int D>
inline State<D> interface_flux_unchecked(const GasModel& gas, const State<D>& qL, const State<D>& qR, int dir,
                                         InterfaceMode mode) {
  State<D> f = ec_flux_unchecked<D>(gas, qL, qR, dir);
  if (mode == InterfaceMode::es_rusanov) {
    const double lambda = std::max(max_wave_speed<D>(gas, qL, dir), max_wave_speed<D>(gas, qR, dir));
    for (int v = 0; v < D + 2; ++v) f[v] -= 0.5 * lambda * (qR[v] - qL[v]);
  }
  return f;
}

template <int D>
inline double entropy_density_unchecked(const GasModel& gas, const State<D>& q) {
  const double s = std::log(pressure<D>(gas, q)) - gas.gamma * std::log(q[0]);
  return -q[0] * s / (gas.gamma - 1.0);
}

template <int D>
inline State<D> entropy_variables_unchecked(const GasModel& gas, const State<D>& q) {
  const double p = pressure<D>(gas, q);
  const double s = std::log(p) - gas.gamma * std::log(q[0]);
  const double rho_over_p = q[0] / p;
  State<D> w;
  double u2 = 0.0;
  for (int m = 0; m < D; ++m) {
    const double u = q[1 + m] / q[0];
    u2 += u * u;
    w[1 + m] = rho_over_p * u;
  }
  w[0] = (gas.gamma - s) / (gas.gamma - 1.0) - 0.5 * rho_over_p * u2;
  w[D + 1] = -rho_over_p;
  return w;
}

}  // namespace detail

/// Pointwise inviscid flux in direction `dir`.
template <int D>
inline State<D> physical_flux(const GasModel& gas, const State<D>& q, int dir) {
  require_admissible<D>(gas, q);
  return detail::physical_flux_unchecked<D>(gas, q, dir);
}

/// Entropy S = -rho s / (gamma - 1) with s = ln P - gamma ln rho, entropy
/// variables w = dS/dq and flux potentials psi_dir = rho u_dir.
template <int D>
struct EntropyQuantities {
  double S;
  State<D> w;
  std::array<double, D> psi;
};

template <int D>
inline EntropyQuantities<D> entropy_quantities(const GasModel& gas, const State<D>& q) {
  require_admissible<D>(gas, q);
  EntropyQuantities<D> out;
  out.S = detail::entropy_density_unchecked<D>(gas, q);
  out.w = detail::entropy_variables_unchecked<D>(gas, q);
  for (int m = 0; m < D; ++m) out.psi[m] = q[1 + m];
  return out;
}

/// Logarithmic mean (a - b) / (ln a - ln b), with a series branch for a ~ b.
double log_mean(double a, double b);

template <int D>
inline State<D> ec_flux(const GasModel& gas, const State<D>& qL, const State<D>& qR, int dir) {
  require_admissible<D>(gas, qL);
  require_admissible<D>(gas, qR);
  return detail::ec_flux_unchecked<D>(gas, qL, qR, dir);
}

template <int D>
inline State<D> interface_flux(const GasModel& gas, const State<D>& qL, const State<D>& qR, int dir,
                               InterfaceMode mode) {
  require_admissible<D>(gas, qL);
  require_admissible<D>(gas, qR);
  return detail::interface_flux_unchecked<D>(gas, qL, qR, dir, mode);
}

/// S(q + h) - S(q) without cancelling the O(1) part of S; the change of
/// pressure is expanded algebraically and the logarithms go through log1p.
/// Returns +infinity when q + h is not admissible.
template <int D>
inline double entropy_increment(const GasModel& gas, const State<D>& q, const State<D>& h) {
  const double rho = q[0];
  const double rho_new = rho + h[0];
  if (!(rho_new > 0.0)) return std::numeric_limits<double>::infinity();
  double m_dot_h = 0.0;
  double h2 = 0.0;
  double m2 = 0.0;
  for (int m = 0; m < D; ++m) {
    m_dot_h += q[1 + m] * h[1 + m];
    h2 += h[1 + m] * h[1 + m];
    m2 += q[1 + m] * q[1 + m];
  }
  const double d_kinetic = (rho * (2.0 * m_dot_h + h2) - h[0] * m2) / (2.0 * rho * rho_new);
  const double p = (gas.gamma - 1.0) * (q[D + 1] - 0.5 * m2 / rho);
  const double dp = (gas.gamma - 1.0) * (h[D + 1] - d_kinetic);
  if (!(p + dp > 0.0)) return std::numeric_limits<double>::infinity();
  const double s = std::log(p) - gas.gamma * std::log(rho);
  const double ds = std::log1p(dp / p) - gas.gamma * std::log1p(h[0] / rho);
  return -(h[0] * s + rho_new * ds) / (gas.gamma - 1.0);
}

}  // namespace relaxrk::euler
