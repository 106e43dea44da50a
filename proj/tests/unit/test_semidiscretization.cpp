#include <cmath>
#include <numeric>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "doctest.h"
#include "relaxrk/errors.hpp"
#include "relaxrk/euler/semidiscretization.hpp"

using namespace relaxrk;
using namespace relaxrk::euler;

namespace {

const GasModel gas{1.4, 1.0};

// Smooth periodic primitive field on [0, 2]^d with a moderate amplitude.
PrimitiveFunction wavy(int dim) {
  return [dim](std::array<double, 2> x, double) {
    const double a = std::sin(M_PI * x[0]) + (dim == 2 ? 0.5 * std::cos(M_PI * x[1]) : 0.0);
    const double b = std::cos(M_PI * x[0] + 0.3) * (dim == 2 ? std::sin(M_PI * x[1]) : 1.0);
    if (dim == 1) return std::vector<double>{1.0 + 0.3 * a, 0.4 * b, 1.0 + 0.2 * b};
    return std::vector<double>{1.0 + 0.3 * a, 0.4 * b, -0.3 * a, 1.0 + 0.2 * b};
  };
}

// Random admissible nodal state: a smooth background plus per-node noise.
std::vector<double> noisy_state(const EulerSystemBase& sys, std::uint64_t seed, double noise) {
  std::vector<double> u = sys.project(wavy(sys.spatial_dim()), 0.0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> r(-noise, noise);
  const std::size_t nv = sys.num_vars();
  for (std::size_t e = 0; e < sys.num_elements(); ++e) {
    for (std::size_t n = 0; n < sys.nodes_per_element(); ++n) {
      std::vector<double> w = sys.primitive(u, e, n);
      for (auto& x : w) x *= 1.0 + r(rng);
      const double rho = w[0];
      double ke = 0.0;
      for (std::size_t m = 1; m + 1 < nv; ++m) {
        u[sys.index(e, n, m)] = rho * w[m];
        ke += 0.5 * rho * w[m] * w[m];
      }
      u[sys.index(e, n, 0)] = rho;
      u[sys.index(e, n, nv - 1)] = w[nv - 1] / (gas.gamma - 1.0) + ke;
    }
  }
  return u;
}

std::unique_ptr<EulerSystemBase> periodic_system(int dim, std::size_t N, int p, InterfaceMode mode) {
  const Mesh mesh = dim == 1 ? Mesh::line(N, 0.0, 2.0, Boundary::periodic)
                             : Mesh::square(N, 0.0, 2.0, Boundary::periodic);
  return make_euler_system(gas, mesh, p, mode);
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::vector<double> rhs_of(const EulerSystemBase& sys, const std::vector<double>& u, bool reference = false) {
  std::vector<double> du(sys.dim());
  if (reference)
    sys.rhs_reference(0.0, u, du);
  else
    sys.rhs(0.0, u, du);
  return du;
}

// sum_k W_node du per conserved variable.
std::vector<double> invariant_rates(const EulerSystemBase& sys, const std::vector<double>& du) {
  return sys.linear_invariants(du);
}

}  // namespace

TEST_SUITE("semidiscretization") {
  TEST_CASE("free-stream preservation") {
    for (int dim : {1, 2}) {
      for (InterfaceMode mode : {InterfaceMode::ec, InterfaceMode::es_rusanov}) {
        for (Boundary bc : {Boundary::periodic, Boundary::dirichlet}) {
          const std::vector<double> w = dim == 1 ? std::vector<double>{1.3, 0.7, 2.1}
                                                 : std::vector<double>{1.3, 0.7, -0.4, 2.1};
          const PrimitiveFunction constant = [w](std::array<double, 2>, double) { return w; };
          const Mesh mesh = dim == 1 ? Mesh::line(7, -1.0, 2.0, bc) : Mesh::square(5, -1.0, 2.0, bc);
          const auto sys = make_euler_system(gas, mesh, 3, mode, bc == Boundary::dirichlet ? constant : nullptr);
          const auto u = sys->project(constant, 0.0);
          INFO("dim " << dim << " mode " << to_string(mode) << " bc " << to_string(bc));
          CHECK(max_abs(rhs_of(*sys, u)) < 1e-13);
          CHECK(max_abs(rhs_of(*sys, u, true)) < 1e-13);
        }
      }
    }
  }

  TEST_CASE("periodic conservation of mass, momentum and energy") {
    for (int dim : {1, 2}) {
      for (InterfaceMode mode : {InterfaceMode::ec, InterfaceMode::es_rusanov}) {
        const auto sys = periodic_system(dim, dim == 1 ? 9 : 4, 3, mode);
        const auto u = noisy_state(*sys, 3, 0.05);
        const auto du = rhs_of(*sys, u);
        const double scale = std::max(1.0, max_abs(du));
        for (double r : invariant_rates(*sys, du)) CHECK(std::abs(r) / scale < 1e-12);
      }
    }
  }

  TEST_CASE("entropy rate: zero for EC interfaces, nonpositive for Rusanov") {
    for (int dim : {1, 2}) {
      for (int p : {1, 2, 4}) {
        const auto ec = periodic_system(dim, dim == 1 ? 8 : 3, p, InterfaceMode::ec);
        const auto es = periodic_system(dim, dim == 1 ? 8 : 3, p, InterfaceMode::es_rusanov);
        const auto u = noisy_state(*ec, 5 + p, 0.1);
        for (const auto* sys : {ec.get(), es.get()}) {
          const auto du = rhs_of(*sys, u);
          const auto rates = sys->local_entropy_rate(u, du);
          double total = 0.0, scale = 1.0;
          for (double r : rates) {
            total += r;
            scale = std::max(scale, std::abs(r));
          }
          INFO("dim " << dim << " p " << p << " mode " << to_string(sys->interface_mode()));
          if (sys->interface_mode() == InterfaceMode::ec)
            CHECK(std::abs(total) / scale < 1e-11);
          else
            CHECK(total / scale <= 1e-11);
          if (sys == es.get()) CHECK(total < -1e-6);  // the random state has jumps to dissipate
        }
      }
    }
  }

  TEST_CASE("OpenMP kernel matches the serial reference") {
    SUBCASE("periodic 1D and 2D") {
      for (int dim : {1, 2}) {
        for (InterfaceMode mode : {InterfaceMode::ec, InterfaceMode::es_rusanov}) {
          const auto sys = periodic_system(dim, dim == 1 ? 11 : 5, 3, mode);
          const auto u = noisy_state(*sys, 9, 0.05);
          const auto a = rhs_of(*sys, u), b = rhs_of(*sys, u, true);
          const double scale = std::max(1.0, max_abs(b));
          for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12 * scale);
        }
      }
    }
    SUBCASE("Dirichlet boundaries") {
      const PrimitiveFunction ext = [](std::array<double, 2> x, double t) {
        return std::vector<double>{1.0 + 0.1 * x[0], 0.2, -0.1 + t, 1.5};
      };
      const auto sys = make_euler_system(gas, Mesh::square(4, 0.0, 2.0, Boundary::dirichlet), 2,
                                         InterfaceMode::es_rusanov, ext);
      const auto u = noisy_state(*sys, 21, 0.05);
      const auto a = rhs_of(*sys, u), b = rhs_of(*sys, u, true);
      const double scale = std::max(1.0, max_abs(b));
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12 * scale);
    }
  }

  TEST_CASE("result is independent of the thread count") {
#ifdef _OPENMP
    const auto sys = periodic_system(2, 6, 3, InterfaceMode::es_rusanov);
    const auto u = noisy_state(*sys, 4, 0.05);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto one = rhs_of(*sys, u);
    omp_set_num_threads(4);
    const auto four = rhs_of(*sys, u);
    omp_set_num_threads(saved);
    CHECK(one == four);
#else
    MESSAGE("built without OpenMP");
#endif
  }

  TEST_CASE("entropy of constant states scales with volume") {
    const PrimitiveFunction c = [](std::array<double, 2>, double) { return std::vector<double>{1.0, 0.5, 1.0}; };
    const auto small = make_euler_system(gas, Mesh::line(4, 0.0, 1.0, Boundary::periodic), 2, InterfaceMode::ec);
    const auto big = make_euler_system(gas, Mesh::line(4, 0.0, 2.0, Boundary::periodic), 2, InterfaceMode::ec);
    // rho = P = 1 gives s = 0, so eta vanishes.
    CHECK(std::abs(small->total_entropy(small->project(c, 0.0))) < 1e-15);
    const PrimitiveFunction d = [](std::array<double, 2>, double) { return std::vector<double>{2.0, 0.5, 1.0}; };
    const double e1 = small->total_entropy(small->project(d, 0.0));
    const double e2 = big->total_entropy(big->project(d, 0.0));
    const double S = -2.0 * (std::log(1.0) - 1.4 * std::log(2.0)) / 0.4;
    CHECK(e1 == doctest::Approx(S).epsilon(1e-14));
    CHECK(e2 == doctest::Approx(2.0 * e1).epsilon(1e-14));
    CHECK(small->total_volume() == doctest::Approx(1.0).epsilon(1e-15));
  }

  TEST_CASE("entropy rate matches a finite difference in time") {
    const auto sys = periodic_system(2, 3, 3, InterfaceMode::es_rusanov);
    const auto u = noisy_state(*sys, 8, 0.05);
    const auto du = rhs_of(*sys, u);
    std::vector<double> rate(sys->num_partitions());
    sys->entropy_rate(0.0, u, du, rate);
    const double h = 1e-6;
    for (std::size_t k = 0; k < sys->num_partitions(); ++k) {
      std::vector<double> dp(du.size(), 0.0);
      for (std::size_t i = 0; i < du.size(); ++i) dp[i] = du[i];
      const double fd = (sys->entropy_increment(k, u, dp, h) - sys->entropy_increment(k, u, dp, -h)) / (2 * h);
      CHECK(std::abs(fd - rate[k]) <= 1e-6 * std::max(1.0, std::abs(rate[k])));
    }
  }

  TEST_CASE("partition entropy and increment are consistent") {
    const auto sys = periodic_system(1, 6, 3, InterfaceMode::ec);
    const auto u = noisy_state(*sys, 12, 0.05);
    const auto du = rhs_of(*sys, u);
    const auto eta = sys->entropies(u);
    std::vector<double> moved(u.size());
    const double g = 0.01;
    for (std::size_t i = 0; i < u.size(); ++i) moved[i] = u[i] + g * du[i];
    for (std::size_t k = 0; k < sys->num_partitions(); ++k) {
      CHECK(sys->partition_entropy(k, u) == doctest::Approx(eta[k]).epsilon(1e-15));
      const double naive = sys->partition_entropy(k, moved) - eta[k];
      CHECK(std::abs(sys->entropy_increment(k, u, du, g) - naive) <= 1e-12 * std::max(1.0, std::abs(eta[k])));
    }
    CHECK(sys->total_entropy(u) == doctest::Approx(std::accumulate(eta.begin(), eta.end(), 0.0)).epsilon(1e-15));
    // An increment that empties a node is reported as +inf.
    std::vector<double> kill(u.size(), 0.0);
    kill[sys->index(2, 1, 0)] = -2.0 * u[sys->index(2, 1, 0)];
    CHECK(std::isinf(sys->entropy_increment(2, u, kill, 1.0)));
    CHECK(sys->entropy_increment(3, u, kill, 1.0) == 0.0);
    CHECK(sys->partition_of(sys->index(4, 2, 1)) == 4);
  }

  TEST_CASE("state errors name the offending element and node") {
    const auto sys = periodic_system(1, 5, 2, InterfaceMode::es_rusanov);
    auto u = noisy_state(*sys, 2, 0.0);
    u[sys->index(3, 1, 2)] = -1.0;
    std::vector<double> du(u.size());
    for (bool reference : {false, true}) {
      bool thrown = false;
      try {
        if (reference)
          sys->rhs_reference(0.0, u, du);
        else
          sys->rhs(0.0, u, du);
      } catch (const StateError& e) {
        thrown = true;
        CHECK(e.element() == 3);
        CHECK(e.node() == 1);
      }
      CHECK(thrown);
    }
  }

  TEST_CASE("local entropy is convex along random segments") {
    const auto sys = periodic_system(2, 2, 2, InterfaceMode::ec);
    const auto a = noisy_state(*sys, 30, 0.2);
    const auto b = noisy_state(*sys, 31, 0.2);
    for (std::size_t k = 0; k < sys->num_partitions(); ++k) {
      const double ea = sys->partition_entropy(k, a), eb = sys->partition_entropy(k, b);
      for (double th : {0.25, 0.5, 0.75}) {
        std::vector<double> m(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) m[i] = (1 - th) * a[i] + th * b[i];
        CHECK(sys->partition_entropy(k, m) <= (1 - th) * ea + th * eb + 1e-13);
      }
    }
  }

  TEST_CASE("Dirichlet problems need an exterior state") {
    CHECK_THROWS_AS(make_euler_system(gas, Mesh::line(4, 0.0, 1.0, Boundary::dirichlet), 2, InterfaceMode::ec),
                    ConfigError);
    CHECK_THROWS_AS(make_euler_system(gas, Mesh::line(4, 0.0, 1.0, Boundary::periodic), 0, InterfaceMode::ec),
                    ConfigError);
  }
}
