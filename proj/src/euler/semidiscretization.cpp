#include "relaxrk/euler/semidiscretization.hpp"

#include <cmath>
#include <exception>
#include <limits>

#include "relaxrk/errors.hpp"

namespace relaxrk::euler {

namespace {

constexpr std::size_t max_nodes_per_element = 81;  // (8 + 1)^2

void rethrow_first(const std::vector<std::exception_ptr>& errors) {
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

}  // namespace

EulerSystemBase::EulerSystemBase(GasModel gas, Mesh mesh, int p, InterfaceMode mode, PrimitiveFunction exterior)
    : gas_(gas), mesh_(mesh), sbp_(lgl_operator(p)), mode_(mode), exterior_(std::move(exterior)) {
  gas_.validate();
  const std::size_t n = sbp_.size();
  npe_ = mesh_.dim() == 1 ? n : n * n;
  for (int d = 0; d < mesh_.dim(); ++d) {
    if (mesh_.bc(d) == Boundary::dirichlet && !exterior_) {
      throw ConfigError("Dirichlet boundaries need an exterior state function");
    }
  }
  node_weight_.resize(npe_);
  const double J = mesh_.volume_jacobian();
  for (std::size_t node = 0; node < npe_; ++node) {
    double w = sbp_.weights[node % n];
    if (mesh_.dim() == 2) w *= sbp_.weights[node / n];
    node_weight_[node] = w * J;
  }
}

std::array<double, 2> EulerSystemBase::node_point(std::size_t e, std::size_t node) const noexcept {
  const std::size_t n = sbp_.size();
  std::array<double, 2> xi{sbp_.nodes[node % n], 0.0};
  if (mesh_.dim() == 2) xi[1] = sbp_.nodes[node / n];
  return mesh_.point(e, xi);
}

double EulerSystemBase::total_volume() const noexcept {
  double v = 1.0;
  for (int d = 0; d < mesh_.dim(); ++d) v *= mesh_.upper(d) - mesh_.lower(d);
  return v;
}

std::vector<double> EulerSystemBase::project(const PrimitiveFunction& f, double t, bool nudge) const {
  const std::size_t n = sbp_.size();
  const std::size_t nv = num_vars();
  const int D = mesh_.dim();
  constexpr double shift = 2e-12;  // 1e-12 element widths in reference coordinates
  std::vector<double> u(dim());
  for (std::size_t e = 0; e < num_elements(); ++e) {
    for (std::size_t node = 0; node < npe_; ++node) {
      std::array<std::size_t, 2> ij{node % n, node / n};
      std::array<double, 2> xi{0.0, 0.0};
      for (int d = 0; d < D; ++d) {
        xi[d] = sbp_.nodes[ij[d]];
        if (nudge && ij[d] == 0) xi[d] += shift;
        if (nudge && ij[d] == n - 1) xi[d] -= shift;
      }
      const std::vector<double> w = f(mesh_.point(e, xi), t);
      if (w.size() != nv) throw ConfigError("primitive state function returned the wrong number of variables");
      double u2 = 0.0;
      for (int m = 0; m < D; ++m) u2 += w[1 + m] * w[1 + m];
      u[index(e, node, 0)] = w[0];
      for (int m = 0; m < D; ++m) u[index(e, node, 1 + m)] = w[0] * w[1 + m];
      u[index(e, node, nv - 1)] = w[nv - 1] / (gas_.gamma - 1.0) + 0.5 * w[0] * u2;
    }
  }
  return u;
}

std::vector<double> EulerSystemBase::primitive(std::span<const double> u, std::size_t e, std::size_t node) const {
  const std::size_t nv = num_vars();
  std::vector<double> w(nv);
  const double rho = u[index(e, node, 0)];
  w[0] = rho;
  double m2 = 0.0;
  for (std::size_t m = 1; m + 1 < nv; ++m) {
    const double mom = u[index(e, node, m)];
    w[m] = mom / rho;
    m2 += mom * mom;
  }
  w[nv - 1] = (gas_.gamma - 1.0) * (u[index(e, node, nv - 1)] - 0.5 * m2 / rho);
  return w;
}

std::vector<double> EulerSystemBase::linear_invariants(std::span<const double> u) const {
  const std::size_t nv = num_vars();
  std::vector<double> sums(nv, 0.0);
  for (std::size_t e = 0; e < num_elements(); ++e) {
    for (std::size_t node = 0; node < npe_; ++node) {
      const double w = node_weight_[node];
      for (std::size_t v = 0; v < nv; ++v) sums[v] += w * u[index(e, node, v)];
    }
  }
  return sums;
}

std::vector<double> EulerSystemBase::local_entropy_rate(std::span<const double> u,
                                                        std::span<const double> du) const {
  std::vector<double> rate(num_partitions());
  entropy_rate(0.0, u, du, rate);
  return rate;
}

template <int D>
State<D> EulerSystem<D>::exterior_state(std::size_t e, std::size_t node, double t) const {
  const std::vector<double> w = exterior_(node_point(e, node), t);
  if (w.size() != static_cast<std::size_t>(D + 2)) {
    throw ConfigError("exterior state function returned the wrong number of variables");
  }
  Primitive<D> prim;
  for (int v = 0; v < D + 2; ++v) prim[v] = w[v];
  const State<D> q = to_conservative<D>(gas_, prim);
  require_admissible<D>(gas_, q, e, node);
  return q;
}

template <int D>
void EulerSystem<D>::element_rhs(double t, std::size_t e, std::span<const double> u, std::span<double> du) const {
  const std::size_t n = sbp_.size();
  const std::size_t p = n - 1;
  std::array<State<D>, max_nodes_per_element> q;
  std::array<State<D>, max_nodes_per_element> tend;
  for (std::size_t node = 0; node < npe_; ++node) {
    q[node] = load(u, e, node);
    require_admissible<D>(gas_, q[node], e, node);
    tend[node].fill(0.0);
  }

  std::array<State<D>, 9> acc;
  const std::size_t lines = D == 1 ? 1 : n;
  for (int d = 0; d < D; ++d) {
    const double inv_J = 1.0 / mesh_.jacobian(d);
    for (std::size_t l = 0; l < lines; ++l) {
      auto nid = [&](std::size_t i) { return D == 1 ? i : (d == 0 ? i + n * l : l + n * i); };

      for (std::size_t i = 0; i < n; ++i) {
        const State<D> f = detail::physical_flux_unchecked<D>(gas_, q[nid(i)], d);
        const double dii = 2.0 * sbp_.d(i, i);
        for (int v = 0; v < D + 2; ++v) acc[i][v] = dii * f[v];
      }
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) {
          const State<D> f = detail::ec_flux_unchecked<D>(gas_, q[nid(i)], q[nid(k)], d);
          const double dik = 2.0 * sbp_.d(i, k);
          const double dki = 2.0 * sbp_.d(k, i);
          for (int v = 0; v < D + 2; ++v) {
            acc[i][v] += dik * f[v];
            acc[k][v] += dki * f[v];
          }
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        for (int v = 0; v < D + 2; ++v) tend[nid(i)][v] -= inv_J * acc[i][v];
      }

      const std::size_t first = nid(0);
      const std::size_t last = nid(p);
      {
        const auto nb = mesh_.neighbor(e, d, 0);
        const State<D> q_ext = nb ? load(u, *nb, last) : exterior_state(e, first, t);
        const State<D> fstar = detail::interface_flux_unchecked<D>(gas_, q_ext, q[first], d, mode_);
        const State<D> f = detail::physical_flux_unchecked<D>(gas_, q[first], d);
        const double s = inv_J / sbp_.weights[0];
        for (int v = 0; v < D + 2; ++v) tend[first][v] += s * (fstar[v] - f[v]);
      }
      {
        const auto nb = mesh_.neighbor(e, d, 1);
        const State<D> q_ext = nb ? load(u, *nb, first) : exterior_state(e, last, t);
        const State<D> fstar = detail::interface_flux_unchecked<D>(gas_, q[last], q_ext, d, mode_);
        const State<D> f = detail::physical_flux_unchecked<D>(gas_, q[last], d);
        const double s = inv_J / sbp_.weights[p];
        for (int v = 0; v < D + 2; ++v) tend[last][v] -= s * (fstar[v] - f[v]);
      }
    }
  }

  for (std::size_t node = 0; node < npe_; ++node) {
    const std::size_t base = index(e, node, 0);
    for (int v = 0; v < D + 2; ++v) du[base + v] = tend[node][v];
  }
}

template <int D>
void EulerSystem<D>::rhs(double t, std::span<const double> u, std::span<double> du) const {
  const std::ptrdiff_t ne = static_cast<std::ptrdiff_t>(num_elements());
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(ne));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t e = 0; e < ne; ++e) {
    try {
      element_rhs(t, static_cast<std::size_t>(e), u, du);
    } catch (...) {
      errors[static_cast<std::size_t>(e)] = std::current_exception();
    }
  }
  rethrow_first(errors);
}

template <int D>
double EulerSystem<D>::element_entropy(std::size_t e, std::span<const double> u) const {
  double eta = 0.0;
  for (std::size_t node = 0; node < npe_; ++node) {
    const State<D> q = load(u, e, node);
    require_admissible<D>(gas_, q, e, node);
    eta += node_weight_[node] * detail::entropy_density_unchecked<D>(gas_, q);
  }
  return eta;
}

template <int D>
void EulerSystem<D>::entropy(std::span<const double> u, std::span<double> eta) const {
  const std::ptrdiff_t ne = static_cast<std::ptrdiff_t>(num_elements());
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(ne));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t e = 0; e < ne; ++e) {
    try {
      eta[static_cast<std::size_t>(e)] = element_entropy(static_cast<std::size_t>(e), u);
    } catch (...) {
      errors[static_cast<std::size_t>(e)] = std::current_exception();
    }
  }
  rethrow_first(errors);
}

template <int D>
void EulerSystem<D>::entropy_rate(double, std::span<const double> u, std::span<const double> du,
                                  std::span<double> rate) const {
  const std::ptrdiff_t ne = static_cast<std::ptrdiff_t>(num_elements());
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(ne));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ei = 0; ei < ne; ++ei) {
    const std::size_t e = static_cast<std::size_t>(ei);
    try {
      double acc = 0.0;
      for (std::size_t node = 0; node < npe_; ++node) {
        const State<D> q = load(u, e, node);
        require_admissible<D>(gas_, q, e, node);
        const State<D> w = detail::entropy_variables_unchecked<D>(gas_, q);
        const std::size_t base = index(e, node, 0);
        double dot = 0.0;
        for (int v = 0; v < D + 2; ++v) dot += w[v] * du[base + v];
        acc += node_weight_[node] * dot;
      }
      rate[e] = acc;
    } catch (...) {
      errors[e] = std::current_exception();
    }
  }
  rethrow_first(errors);
}

template <int D>
double EulerSystem<D>::partition_entropy(std::size_t k, std::span<const double> u) const {
  return element_entropy(k, u);
}

template <int D>
double EulerSystem<D>::entropy_increment(std::size_t k, std::span<const double> u, std::span<const double> d,
                                         double gamma) const {
  double acc = 0.0;
  for (std::size_t node = 0; node < npe_; ++node) {
    const State<D> q = load(u, k, node);
    State<D> h = load(d, k, node);
    for (auto& x : h) x *= gamma;
    const double inc = euler::entropy_increment<D>(gas_, q, h);
    if (!std::isfinite(inc)) return std::numeric_limits<double>::infinity();
    acc += node_weight_[node] * inc;
  }
  return acc;
}

template class EulerSystem<1>;
template class EulerSystem<2>;

std::unique_ptr<EulerSystemBase> make_euler_system(const GasModel& gas, const Mesh& mesh, int p, InterfaceMode mode,
                                                   PrimitiveFunction exterior) {
  if (mesh.dim() == 1) return std::make_unique<EulerSystem<1>>(gas, mesh, p, mode, std::move(exterior));
  return std::make_unique<EulerSystem<2>>(gas, mesh, p, mode, std::move(exterior));
}

}  // namespace relaxrk::euler
