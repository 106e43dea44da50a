#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "relaxrk/errors.hpp"
#include "relaxrk/integrator.hpp"
#include "relaxrk/toy_systems.hpp"

using namespace relaxrk;

namespace {

// u' = lambda u with eta = u^2 / 2.
class LinearOde final : public OdeSystem {
 public:
  explicit LinearOde(double lambda) : lambda_(lambda) {}
  std::size_t dim() const override { return 1; }
  std::size_t num_partitions() const override { return 1; }
  void rhs(double, std::span<const double> u, std::span<double> du) const override { du[0] = lambda_ * u[0]; }
  void entropy(std::span<const double> u, std::span<double> eta) const override { eta[0] = 0.5 * u[0] * u[0]; }
  void entropy_rate(double, std::span<const double> u, std::span<const double> du,
                    std::span<double> rate) const override {
    rate[0] = u[0] * du[0];
  }

 private:
  double lambda_;
};

// u' = u^2, blows up at t = 1 / u0.
class RiccatiOde final : public OdeSystem {
 public:
  std::size_t dim() const override { return 1; }
  std::size_t num_partitions() const override { return 1; }
  void rhs(double, std::span<const double> u, std::span<double> du) const override { du[0] = u[0] * u[0]; }
  void entropy(std::span<const double> u, std::span<double> eta) const override { eta[0] = 0.5 * u[0] * u[0]; }
  void entropy_rate(double, std::span<const double> u, std::span<const double> du,
                    std::span<double> rate) const override {
    rate[0] = u[0] * du[0];
  }
};

double exp_ode_error(const ButcherTableau& tab, RelaxationMode mode, double dt) {
  ExpEntropyOde sys;
  RelaxationConfig cfg;
  cfg.mode = mode;
  AdvanceOptions opts;
  opts.t_end = 2.0;
  opts.dt0 = dt;
  const std::vector<double> u0{0.5};
  const auto s = advance(sys, tab, cfg, u0, opts);
  return std::abs(s.u_final[0] - ExpEntropyOde::exact(0.5, s.t_final));
}

}  // namespace

TEST_SUITE("integrator") {
  TEST_CASE("RK44 single step on u' = u") {
    LinearOde sys(1.0);
    const std::vector<double> u{1.0};
    const auto step = rk_step(sys, builtin_tableau("RK44"), 0.0, u, 0.1);
    CHECK(step.u_new[0] == doctest::Approx(1.1051708333333333333).epsilon(1e-15));
    CHECK(step.t_new == 0.1);
    CHECK(step.stage_rhs_evals == 4);
    CHECK_FALSE(step.err_embedded.has_value());
  }

  TEST_CASE("t_new is t + dt exactly and embedded estimates exist when available") {
    LinearOde sys(-1.0);
    const std::vector<double> u{1.0};
    const auto step = rk_step(sys, builtin_tableau("BSRK43"), 0.3, u, 0.07);
    CHECK(step.t_new == 0.3 + 0.07);
    REQUIRE(step.err_embedded.has_value());
    CHECK(*step.err_embedded > 0.0);
  }

  TEST_CASE("entropy estimate matches its definition") {
    LinearOde sys(-0.7);
    const auto& tab = builtin_tableau("RK44");
    const std::vector<double> u{1.3};
    const double dt = 0.2;
    const auto step = rk_step(sys, tab, 0.0, u, dt);
    // Recompute the stages by hand.
    std::vector<double> y(4), k(4);
    for (int i = 0; i < 4; ++i) {
      y[i] = u[0];
      for (int j = 0; j < i; ++j) y[i] += dt * tab.a(i, j) * k[j];
      k[i] = -0.7 * y[i];
    }
    double e = 0.5 * u[0] * u[0];
    for (int i = 0; i < 4; ++i) e += dt * tab.b()[i] * y[i] * k[i];
    CHECK(step.estimate[0] == doctest::Approx(e).epsilon(1e-15));
    CHECK(step.eta_old[0] == doctest::Approx(0.5 * 1.3 * 1.3).epsilon(1e-15));
  }

  TEST_CASE("quadratic conserved ODE: estimate equals the old entropy") {
    RotationOde sys;
    const std::vector<double> u{1.0, 0.5};
    for (const auto& name : builtin_tableau_names()) {
      const auto step = rk_step(sys, builtin_tableau(name), 0.0, u, 0.3);
      CHECK(step.estimate[0] == step.eta_old[0]);
    }
  }

  TEST_CASE("observed orders with and without relaxation") {
    for (const auto& name : builtin_tableau_names()) {
      const auto& tab = builtin_tableau(name);
      for (auto mode : {RelaxationMode::none, RelaxationMode::local, RelaxationMode::global}) {
        // Least-squares slope over four halvings; single pairs of the
        // high-order methods sit near sign changes of the error constant.
        const double dt = tab.order() >= 5 ? 0.4 : 0.1;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (int k = 0; k < 4; ++k) {
          const double x = std::log2(dt) - k;
          const double y = std::log2(exp_ode_error(tab, mode, dt / std::pow(2.0, k)));
          sx += x, sy += y, sxx += x * x, sxy += x * y;
        }
        const double rate = (4 * sxy - sx * sy) / (4 * sxx - sx * sx);
        INFO(name << " mode " << to_string(mode) << " rate " << rate);
        CHECK(rate > tab.order() - 0.4);
      }
    }
  }

  TEST_CASE("final time is hit and relaxed times advance by gamma dt") {
    ExpEntropyOde sys;
    RelaxationConfig cfg;
    AdvanceOptions opts;
    opts.t_end = 1.0;
    opts.dt0 = 0.3;
    std::vector<double> gammas, times, dts;
    StepObserver obs = [&](const StepObservation& o) {
      gammas.push_back(o.gamma);
      times.push_back(o.t);
      dts.push_back(o.dt);
    };
    const std::vector<double> u0{0.0};
    const auto s = advance(sys, builtin_tableau("RK44"), cfg, u0, opts, std::span<const StepObserver>(&obs, 1));
    CHECK(std::abs(s.t_final - 1.0) <= 1e-12);
    double t = 0.0;
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
      t += gammas[i] * dts[i];
      CHECK(times[i] == doctest::Approx(t).epsilon(1e-14));
    }
    CHECK(s.min_gamma < 1.0);
  }

  TEST_CASE("adaptive stepping reaches t_end with embedded control") {
    ExpEntropyOde sys;
    RelaxationConfig cfg;
    AdvanceOptions opts;
    opts.t_end = 3.0;
    opts.dt0 = 1.0;
    opts.mode = StepMode::adaptive;
    opts.tol = 1e-8;
    const std::vector<double> u0{0.5};
    const auto s = advance(sys, builtin_tableau("BSRK85"), cfg, u0, opts);
    CHECK(std::abs(s.t_final - 3.0) <= 1e-12 * 3.0);
    CHECK(s.rejected_steps >= 1);
    CHECK(std::abs(s.u_final[0] - ExpEntropyOde::exact(0.5, s.t_final)) < 1e-6);
    CHECK(s.all_inequalities_verified);
  }

  TEST_CASE("adaptive stepping needs embedded weights") {
    ExpEntropyOde sys;
    AdvanceOptions opts;
    opts.mode = StepMode::adaptive;
    opts.tol = 1e-6;
    const std::vector<double> u0{0.5};
    CHECK_THROWS_AS(advance(sys, builtin_tableau("RK44"), RelaxationConfig{}, u0, opts), ConfigError);
  }

  TEST_CASE("relaxation rejects negative weights") {
    ButcherTableau neg("neg", 1, {{0.0, 0.0}, {1.0, 0.0}}, {2.0, -1.0}, {0.0, 1.0});
    ExpEntropyOde sys;
    const std::vector<double> u0{0.5};
    CHECK_THROWS_AS(advance(sys, neg, RelaxationConfig{}, u0, AdvanceOptions{}), ConfigError);
    RelaxationConfig none;
    none.mode = RelaxationMode::none;
    CHECK_NOTHROW(advance(sys, neg, none, u0, AdvanceOptions{}));
  }

  TEST_CASE("blowup is reported") {
    RiccatiOde sys;
    RelaxationConfig none;
    none.mode = RelaxationMode::none;
    AdvanceOptions opts;
    opts.t_end = 100.0;
    opts.dt0 = 0.9;
    const std::vector<double> u0{1.0};
    CHECK_THROWS_AS(advance(sys, builtin_tableau("RK44"), none, u0, opts), BlowupError);
  }

  TEST_CASE("step limit") {
    ExpEntropyOde sys;
    AdvanceOptions opts;
    opts.dt0 = 1e-3;
    opts.max_steps = 10;
    const std::vector<double> u0{0.5};
    CHECK_THROWS_AS(advance(sys, builtin_tableau("RK44"), RelaxationConfig{}, u0, opts), StepLimitError);
  }

  TEST_CASE("entropy rate equals the finite-difference directional derivative") {
    ExpEntropyOde sys;
    const std::vector<double> u{0.3};
    std::vector<double> du(1), rate(1);
    sys.rhs(0.0, u, du);
    sys.entropy_rate(0.0, u, du, rate);
    const double eps = 1e-5;
    const double fd = (std::exp(u[0] + eps * du[0]) - std::exp(u[0] - eps * du[0])) / (2 * eps);
    CHECK(std::abs(fd - rate[0]) <= 1e-6 * std::abs(rate[0]));
  }

  TEST_CASE("error norm and controller") {
    const std::vector<double> u{1.0, -2.0}, un{1.0, -2.0}, uh{1.0, -2.0};
    CHECK(embedded_error_norm(u, un, uh) == 0.0);
    const std::vector<double> uh2{1.0 + 2e-3, -2.0};
    CHECK(embedded_error_norm(u, un, uh2) == doctest::Approx(std::sqrt(0.5) * 1e-3).epsilon(1e-12));
    CHECK(adapt_dt(1e-6, 1e-6, 3, 1.0) == doctest::Approx(0.9));
    CHECK(adapt_dt(1.0, 1e-12, 3, 1.0) == doctest::Approx(0.2));
    CHECK(adapt_dt(0.0, 1e-6, 3, 1.0) == doctest::Approx(5.0));
  }
}
