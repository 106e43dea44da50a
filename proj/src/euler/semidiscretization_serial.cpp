#include "relaxrk/euler/semidiscretization.hpp"

#include <algorithm>

namespace relaxrk::euler {

// Literal transcription of the scheme: the volume term evaluates the two-point
// flux for every ordered node pair (including i = k), and each face flux is
// computed once and scattered to both adjacent elements.
template <int D>
void EulerSystem<D>::rhs_reference(double t, std::span<const double> u, std::span<double> du) const {
  const std::size_t n = sbp_.size();
  const std::size_t p = n - 1;
  const std::size_t ne = num_elements();
  const std::size_t lines = D == 1 ? 1 : n;

  for (std::size_t e = 0; e < ne; ++e) {
    for (std::size_t node = 0; node < npe_; ++node) require_admissible<D>(gas_, load(u, e, node), e, node);
  }
  std::fill(du.begin(), du.end(), 0.0);

  auto add = [&](std::size_t e, std::size_t node, double s, const State<D>& f) {
    const std::size_t base = index(e, node, 0);
    for (int v = 0; v < D + 2; ++v) du[base + v] += s * f[v];
  };

  for (int d = 0; d < D; ++d) {
    const double inv_J = 1.0 / mesh_.jacobian(d);
    for (std::size_t l = 0; l < lines; ++l) {
      auto nid = [&](std::size_t i) { return D == 1 ? i : (d == 0 ? i + n * l : l + n * i); };

      for (std::size_t e = 0; e < ne; ++e) {
        for (std::size_t i = 0; i < n; ++i) {
          State<D> acc{};
          for (std::size_t k = 0; k < n; ++k) {
            const State<D> f = ec_flux<D>(gas_, load(u, e, nid(i)), load(u, e, nid(k)), d);
            for (int v = 0; v < D + 2; ++v) acc[v] += 2.0 * sbp_.d(i, k) * f[v];
          }
          add(e, nid(i), -inv_J, acc);
        }
      }

      for (std::size_t e = 0; e < ne; ++e) {
        const State<D> qR = load(u, e, nid(p));
        const auto right = mesh_.neighbor(e, d, 1);
        if (right) {
          const State<D> q_next = load(u, *right, nid(0));
          const State<D> fstar = interface_flux<D>(gas_, qR, q_next, d, mode_);
          State<D> jump_left = fstar;
          State<D> jump_right = fstar;
          const State<D> fL = physical_flux<D>(gas_, qR, d);
          const State<D> fR = physical_flux<D>(gas_, q_next, d);
          for (int v = 0; v < D + 2; ++v) {
            jump_left[v] -= fL[v];
            jump_right[v] -= fR[v];
          }
          add(e, nid(p), -inv_J / sbp_.weights[p], jump_left);
          add(*right, nid(0), inv_J / sbp_.weights[0], jump_right);
        } else {
          const State<D> fstar = interface_flux<D>(gas_, qR, exterior_state(e, nid(p), t), d, mode_);
          State<D> jump = fstar;
          const State<D> f = physical_flux<D>(gas_, qR, d);
          for (int v = 0; v < D + 2; ++v) jump[v] -= f[v];
          add(e, nid(p), -inv_J / sbp_.weights[p], jump);
        }
        if (!mesh_.neighbor(e, d, 0)) {
          const State<D> qL = load(u, e, nid(0));
          const State<D> fstar = interface_flux<D>(gas_, exterior_state(e, nid(0), t), qL, d, mode_);
          State<D> jump = fstar;
          const State<D> f = physical_flux<D>(gas_, qL, d);
          for (int v = 0; v < D + 2; ++v) jump[v] -= f[v];
          add(e, nid(0), inv_J / sbp_.weights[0], jump);
        }
      }
    }
  }
}

template void EulerSystem<1>::rhs_reference(double, std::span<const double>, std::span<double>) const;
template void EulerSystem<2>::rhs_reference(double, std::span<const double>, std::span<double>) const;

}  // namespace relaxrk::euler
