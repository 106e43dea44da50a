#include "relaxrk/problems.hpp"

#include <cmath>
#include <numbers>

#include "relaxrk/errors.hpp"
#include "relaxrk/toy_systems.hpp"

namespace relaxrk {

namespace {

using euler::Boundary;
using euler::InterfaceMode;
using std::numbers::pi;

// Merges overrides into defaults; unknown keys are rejected.
ParamMap merge_params(const std::string& problem, ParamMap defaults, const ParamMap& overrides) {
  for (const auto& [key, value] : overrides) {
    auto it = defaults.find(key);
    if (it == defaults.end()) {
      std::string valid;
      for (const auto& kv : defaults) valid += (valid.empty() ? "" : ", ") + kv.first;
      throw ConfigError("unknown parameter '" + key + "' for problem " + problem + " (valid: " + valid + ")");
    }
    if (!std::isfinite(value)) throw ConfigError("parameter '" + key + "' must be finite");
    it->second = value;
  }
  return defaults;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

void require_gas(const ParamMap& q) { require(q.at("gamma") > 1.0, "gamma must exceed 1"); }

ProblemSpec isentropic_vortex(const ParamMap& overrides) {
  ProblemSpec spec;
  spec.name = "isentropic_vortex";
  spec.params = merge_params(spec.name,
                             {{"epsilon", 5.0},
                              {"mach", 0.5},
                              {"gamma", 1.4},
                              {"alpha", pi / 4.0},
                              {"x0", 0.0},
                              {"y0", 0.0},
                              {"half_width", 5.0}},
                             overrides);
  const ParamMap& q = spec.params;
  require_gas(q);
  require(q.at("mach") > 0.0, "mach must be positive");
  require(q.at("half_width") > 0.0, "half_width must be positive");
  const double eps = q.at("epsilon");
  const double mach = q.at("mach");
  const double gamma = q.at("gamma");
  const double alpha = q.at("alpha");
  const double x0 = q.at("x0");
  const double y0 = q.at("y0");
  const double L = 2.0 * q.at("half_width");
  const double amp = eps * eps * mach * mach * (gamma - 1.0) / (8.0 * pi * pi);
  require(amp * std::exp(1.0) < 1.0, "vortex strength makes the core temperature nonpositive");

  spec.dim = 2;
  // Free-stream speed 1 and temperature 1: P = rho R T with R = 1 / (gamma M^2).
  spec.gas = {gamma, 1.0 / (gamma * mach * mach)};
  spec.lower = {-0.5 * L, -0.5 * L};
  spec.upper = {0.5 * L, 0.5 * L};
  spec.bc = Boundary::periodic;
  spec.u_ref = 1.0;
  spec.defaults = {2, 10, 0.05, 5.0, "BSRK43", InterfaceMode::es_rusanov};

  const double R = spec.gas.R;
  auto exact = [=](std::array<double, 2> x, double t) {
    double dx = x[0] - x0 - std::cos(alpha) * t;
    double dy = x[1] - y0 - std::sin(alpha) * t;
    dx -= L * std::round(dx / L);
    dy -= L * std::round(dy / L);
    const double G = 1.0 - (dx * dx + dy * dy);
    const double T = 1.0 - amp * std::exp(G);
    const double rho = std::pow(T, 1.0 / (gamma - 1.0));
    const double swirl = eps / (2.0 * pi) * std::exp(0.5 * G);
    return std::vector<double>{rho, std::cos(alpha) - swirl * dy, std::sin(alpha) + swirl * dx, rho * R * T};
  };
  spec.exact = exact;
  spec.initial = [exact](std::array<double, 2> x, double) { return exact(x, 0.0); };
  return spec;
}

ProblemSpec sod(const ParamMap& overrides) {
  ProblemSpec spec;
  spec.name = "sod";
  spec.params = merge_params(spec.name,
                             {{"gamma", 1.4},
                              {"x_interface", 0.5},
                              {"rho_left", 1.0},
                              {"u_left", 0.0},
                              {"p_left", 1.0},
                              {"rho_right", 0.125},
                              {"u_right", 0.0},
                              {"p_right", 0.1}},
                             overrides);
  const ParamMap& q = spec.params;
  require_gas(q);
  require(q.at("rho_left") > 0.0 && q.at("rho_right") > 0.0, "sod densities must be positive");
  require(q.at("p_left") > 0.0 && q.at("p_right") > 0.0, "sod pressures must be positive");
  require(q.at("x_interface") > 0.0 && q.at("x_interface") < 1.0, "x_interface must lie inside [0, 1]");
  spec.dim = 1;
  spec.gas = {q.at("gamma"), 1.0};
  spec.lower = {0.0, 0.0};
  spec.upper = {1.0, 1.0};
  spec.bc = Boundary::dirichlet;
  spec.discontinuous = true;
  spec.u_ref = 1.0;
  spec.defaults = {3, 128, 5e-5, 0.2, "RK44", InterfaceMode::es_rusanov};
  const std::vector<double> left{q.at("rho_left"), q.at("u_left"), q.at("p_left")};
  const std::vector<double> right{q.at("rho_right"), q.at("u_right"), q.at("p_right")};
  const double xs = q.at("x_interface");
  spec.initial = [=](std::array<double, 2> x, double) { return x[0] < xs ? left : right; };
  spec.exterior = spec.initial;
  return spec;
}

ProblemSpec sine_shock(const ParamMap& overrides) {
  ProblemSpec spec;
  spec.name = "sine_shock";
  spec.params = merge_params(spec.name,
                             {{"gamma", 1.4},
                              {"x_shock", -4.5},
                              {"rho_left", 1.515695},
                              {"u_left", 0.523346},
                              {"p_left", 1.805},
                              {"amplitude", 0.1},
                              {"wavenumber", 20.0}},
                             overrides);
  const ParamMap& q = spec.params;
  require_gas(q);
  require(q.at("rho_left") > 0.0 && q.at("p_left") > 0.0, "left state must be positive");
  require(std::abs(q.at("amplitude")) < 1.0, "|amplitude| must be below 1");
  require(q.at("x_shock") > -5.0 && q.at("x_shock") < 5.0, "x_shock must lie inside [-5, 5]");
  spec.dim = 1;
  spec.gas = {q.at("gamma"), 1.0};
  spec.lower = {-5.0, 0.0};
  spec.upper = {5.0, 1.0};
  spec.bc = Boundary::dirichlet;
  spec.discontinuous = true;
  spec.u_ref = 1.0;
  spec.defaults = {3, 256, 2e-4, 5.0, "RK44", InterfaceMode::es_rusanov};
  const std::vector<double> left{q.at("rho_left"), q.at("u_left"), q.at("p_left")};
  const double xs = q.at("x_shock");
  const double amp = q.at("amplitude");
  const double k = q.at("wavenumber");
  spec.initial = [=](std::array<double, 2> x, double) {
    if (x[0] < xs) return left;
    return std::vector<double>{1.0 + amp * std::sin(k * pi * x[0]), 0.0, 1.0};
  };
  spec.exterior = spec.initial;
  return spec;
}

ProblemSpec gamma_demo(const ParamMap& overrides) {
  ProblemSpec spec;
  spec.name = "gamma_demo";
  spec.params = merge_params(spec.name, {{"gamma", 1.4}, {"velocity", 0.5}}, overrides);
  const ParamMap& q = spec.params;
  require_gas(q);
  spec.dim = 1;
  spec.gas = {q.at("gamma"), 1.0};
  spec.lower = {-2.0, 0.0};
  spec.upper = {2.0, 1.0};
  spec.bc = Boundary::dirichlet;
  spec.discontinuous = true;
  spec.u_ref = 1.0;
  spec.defaults = {3, 200, 1e-4, 0.1, "RK44", InterfaceMode::es_rusanov};
  const double v = q.at("velocity");
  // Each half is a contact wave; away from x = 0 the data is advected with v.
  auto advected = [v](std::array<double, 2> x, double t) {
    const double xi = x[0] - v * t;
    if (x[0] < 0.0) return std::vector<double>{1.0 + 0.5 * std::cos(2.0 * pi * xi), v, 1.0};
    return std::vector<double>{0.5 + 0.25 * std::cos(2.0 * pi * xi), v, 0.8};
  };
  spec.initial = [advected](std::array<double, 2> x, double) { return advected(x, 0.0); };
  spec.exterior = advected;
  return spec;
}

ProblemSpec density_wave(const ParamMap& overrides) {
  ProblemSpec spec;
  spec.name = "density_wave";
  spec.params =
      merge_params(spec.name, {{"gamma", 1.4}, {"velocity", 0.1}, {"amplitude", 0.5}, {"pressure", 1.0}}, overrides);
  const ParamMap& q = spec.params;
  require_gas(q);
  require(std::abs(q.at("amplitude")) < 1.0, "|amplitude| must be below 1");
  require(q.at("pressure") > 0.0, "pressure must be positive");
  spec.dim = 1;
  spec.gas = {q.at("gamma"), 1.0};
  spec.lower = {0.0, 0.0};
  spec.upper = {2.0, 1.0};
  spec.bc = Boundary::periodic;
  spec.u_ref = 1.0;
  spec.defaults = {3, 16, 0.05 * 2.0 / 16.0, 1.0, "RK44", InterfaceMode::es_rusanov};
  const double v = q.at("velocity");
  const double amp = q.at("amplitude");
  const double P = q.at("pressure");
  auto exact = [=](std::array<double, 2> x, double t) {
    return std::vector<double>{1.0 + amp * std::sin(pi * (x[0] - v * t)), v, P};
  };
  spec.exact = exact;
  spec.initial = [exact](std::array<double, 2> x, double) { return exact(x, 0.0); };
  return spec;
}

ProblemSpec exp_entropy_ode(const ParamMap& overrides) {
  ProblemSpec spec;
  spec.name = "exp_entropy_ode";
  spec.kind = ProblemKind::ode;
  spec.params = merge_params(spec.name, {{"u0", 0.5}}, overrides);
  const double u0 = spec.params.at("u0");
  spec.dim = 0;
  spec.defaults = {0, 1, 0.1, 5.0, "RK44", InterfaceMode::ec};
  spec.ode_initial = {u0};
  spec.ode_exact = [u0](double t) { return std::vector<double>{ExpEntropyOde::exact(u0, t)}; };
  return spec;
}

ProblemSpec quadratic_conserved_ode(const ParamMap& overrides) {
  ProblemSpec spec;
  spec.name = "quadratic_conserved_ode";
  spec.kind = ProblemKind::ode;
  spec.params = merge_params(spec.name, {{"omega", 1.0}, {"u0_1", 1.0}, {"u0_2", 0.5}}, overrides);
  const double w = spec.params.at("omega");
  const double a = spec.params.at("u0_1");
  const double b = spec.params.at("u0_2");
  spec.dim = 0;
  spec.defaults = {0, 1, 0.1, 10.0, "RK44", InterfaceMode::ec};
  spec.ode_initial = {a, b};
  spec.ode_exact = [=](double t) {
    const double c = std::cos(w * t);
    const double s = std::sin(w * t);
    return std::vector<double>{c * a - s * b, s * a + c * b};
  };
  return spec;
}

}  // namespace

std::vector<std::string> problem_names() {
  return {"isentropic_vortex", "sod", "sine_shock", "gamma_demo", "density_wave", "exp_entropy_ode",
          "quadratic_conserved_ode"};
}

ProblemSpec make_problem(const std::string& name, const ParamMap& overrides) {
  if (name == "isentropic_vortex") return isentropic_vortex(overrides);
  if (name == "sod") return sod(overrides);
  if (name == "sine_shock") return sine_shock(overrides);
  if (name == "gamma_demo") return gamma_demo(overrides);
  if (name == "density_wave") return density_wave(overrides);
  if (name == "exp_entropy_ode") return exp_entropy_ode(overrides);
  if (name == "quadratic_conserved_ode") return quadratic_conserved_ode(overrides);
  std::string valid;
  for (const auto& n : problem_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw ConfigError("unknown problem '" + name + "' (valid: " + valid + ")");
}

std::vector<double> evaluate_exact(const ProblemSpec& spec, std::array<double, 2> x, double t) {
  if (spec.kind == ProblemKind::ode) {
    if (!spec.ode_exact) throw ConfigError("problem " + spec.name + " has no exact solution");
    return spec.ode_exact(t);
  }
  if (!spec.exact) throw ConfigError("problem " + spec.name + " has no exact solution");
  return (*spec.exact)(x, t);
}

euler::Mesh make_mesh(const ProblemSpec& spec, std::size_t N) {
  if (spec.kind != ProblemKind::euler) throw ConfigError("problem " + spec.name + " has no mesh");
  return euler::Mesh(spec.dim, N, spec.lower, spec.upper, {spec.bc, spec.bc});
}

std::unique_ptr<euler::EulerSystemBase> make_euler_system(const ProblemSpec& spec, int p, std::size_t N,
                                                          euler::InterfaceMode mode) {
  return euler::make_euler_system(spec.gas, make_mesh(spec, N), p, mode, spec.exterior);
}

std::unique_ptr<OdeSystem> make_ode_system(const ProblemSpec& spec) {
  if (spec.name == "exp_entropy_ode") return std::make_unique<ExpEntropyOde>();
  if (spec.name == "quadratic_conserved_ode") return std::make_unique<RotationOde>(spec.params.at("omega"));
  throw ConfigError("problem " + spec.name + " is not an ODE problem");
}

std::vector<double> initial_state(const ProblemSpec& spec, const euler::EulerSystemBase& sys) {
  return sys.project(spec.initial, 0.0, spec.discontinuous);
}

}  // namespace relaxrk
