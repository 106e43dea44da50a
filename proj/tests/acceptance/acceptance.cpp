// One PASS/FAIL line per acceptance criterion; nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "relaxrk/cli/drivers.hpp"
#include "relaxrk/cli/run_config.hpp"
#include "relaxrk/errors.hpp"
#include "relaxrk/euler/physics.hpp"
#include "relaxrk/euler/sbp.hpp"
#include "relaxrk/problems.hpp"

using namespace relaxrk;
using namespace relaxrk::cli;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

char buf[1024];

template <class... A>
std::string fmt(const char* f, A... a) {
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

ResolvedRun resolved(const std::vector<std::string>& overrides) {
  return resolve(load_run_config(std::nullopt, overrides));
}

// L2 density rates of a refinement study, one per consecutive pair.
std::vector<double> l2_rates(const ResolvedRun& base, const std::vector<std::size_t>& Ns, std::string& table) {
  const auto rows = convergence_study(base, Ns);
  std::vector<double> rates;
  for (const auto& r : rows) {
    table += fmt(" N=%zu L2=%.3e", r.N, r.errors[0].L2);
    if (r.rates[0][1]) rates.push_back(*r.rates[0][1]);
  }
  return rates;
}

Verdict vortex_rate() {
  const ResolvedRun base = resolved({"problem=\"isentropic_vortex\"", "relaxation.mode=\"local\""});
  std::string table;
  const auto rates = l2_rates(base, {10, 20}, table);
  const double r = rates.back();
  return {r >= 2.5 && r <= 3.6, fmt("p=2 BSRK43 local:%s rate %.3f (want [2.5, 3.6])", table.c_str(), r)};
}

Verdict density_wave_rate() {
  std::string t_local, t_none;
  const auto local = l2_rates(resolved({"problem=\"density_wave\"", "relaxation.mode=\"local\""}), {16, 32, 64},
                              t_local);
  const auto none = l2_rates(resolved({"problem=\"density_wave\"", "relaxation.mode=\"none\""}), {16, 32, 64},
                             t_none);
  const double rl = local.back(), rn = none.back();
  const bool ok = rl >= 3.5 && std::abs(rl - rn) < 0.3;
  return {ok, fmt("local rates %.3f %.3f, none rates %.3f %.3f (want >= 3.5, |diff| < 0.3)", local[0], rl, none[0],
                  rn)};
}

std::pair<std::size_t, std::size_t> verified_steps(const RunResult& res) {
  std::size_t ok = 0;
  for (const auto& h : res.history) ok += h.inequality_verified ? 1 : 0;
  return {ok, res.history.size()};
}

Verdict shock_inequalities() {
  std::size_t ok_s = 0, n_s = 0, ok_w = 0, n_w = 0;
  std::string note;
  try {
    const RunResult sod = execute(resolved({"problem=\"sod\"", "N=64", "dt=1e-4", "relaxation.mode=\"local\""}));
    std::tie(ok_s, n_s) = verified_steps(sod);
  } catch (const Error& e) {
    note += std::string(" sod failed: ") + e.what();
  }
  try {
    const RunResult ss = execute(
        resolved({"problem=\"sine_shock\"", "N=128", "dt=4e-4", "t_end=5", "relaxation.mode=\"local\""}));
    std::tie(ok_w, n_w) = verified_steps(ss);
  } catch (const Error& e) {
    note += std::string(" sine_shock failed: ") + e.what();
  }
  const bool ok = n_s > 0 && n_w > 0 && ok_s == n_s && ok_w == n_w;
  return {ok, fmt("sod %zu/%zu steps verified, sine_shock %zu/%zu steps verified%s", ok_s, n_s, ok_w, n_w,
                  note.c_str())};
}

Verdict ec_global_conservation() {
  const RunResult res = execute(resolved({"problem=\"isentropic_vortex\"", "interface=\"ec\"",
                                          "relaxation.mode=\"global\"", "dt=0.05", "t_end=50.5"}));
  const double eta0 = std::accumulate(res.summary.eta_initial.begin(), res.summary.eta_initial.end(), 0.0);
  double worst = 0.0;
  for (const auto& h : res.history) worst = std::max(worst, std::abs(h.eta_total - eta0));
  const double bound = 1e-9 * std::abs(eta0) + 1e-9;
  const bool ok = res.summary.accepted_steps >= 1000 && worst <= bound;
  return {ok, fmt("%zu steps, max |eta - eta0| = %.3e, bound %.3e", res.summary.accepted_steps, worst, bound)};
}

Verdict gamma_slope() {
  std::vector<double> dts, devs;
  std::string table;
  // Coarse mesh at Courant 0.1: on finer meshes the stable dt keeps the
  // O(dt^5) residual of the smallest steps at the double-precision floor.
  const ResolvedRun base =
      resolved({"problem=\"density_wave\"", "N=8", "courant=0.1", "relaxation.mode=\"local\""});
  for (int k = 0; k < 4; ++k) {
    ResolvedRun run = base;
    run.dt = base.dt / std::pow(2.0, k);
    run.t_end = run.dt;
    run.max_steps = 1;
    RunResult res;
    try {
      res = execute(run);
    } catch (const StepLimitError&) {
    }
    if (res.history.empty()) return {false, "no first step recorded"};
    dts.push_back(run.dt);
    devs.push_back(std::abs(res.history.front().gamma - 1.0));
    table += fmt(" dt=%.3e |gamma-1|=%.3e", run.dt, devs.back());
  }
  // Least-squares slope of log|gamma - 1| against log dt.
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < dts.size(); ++i) {
    mx += std::log(dts[i]) / dts.size();
    my += std::log(devs[i]) / dts.size();
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < dts.size(); ++i) {
    sxy += (std::log(dts[i]) - mx) * (std::log(devs[i]) - my);
    sxx += (std::log(dts[i]) - mx) * (std::log(dts[i]) - mx);
  }
  const double slope = sxy / sxx;
  return {std::abs(slope - 3.0) <= 0.5, fmt("p=3 RK44 N=8 local min gamma:%s slope %.3f (want 3 +- 0.5)", table.c_str(), slope)};
}

Verdict gamma_magnitudes() {
  const RunResult sod = execute(resolved({"problem=\"sod\"", "relaxation.mode=\"local\""}));
  std::vector<double> dev;
  for (const auto& h : sod.history) dev.push_back(std::abs(h.gamma - 1.0));
  const double median = quantiles(dev)[2];

  const RunResult demo = execute(resolved({"problem=\"gamma_demo\"", "relaxation.mode=\"local\""}));
  double worst = 0.0;
  std::size_t above = 0, below = 0, equal = 0;
  for (double g : demo.final_gamma_local) {
    worst = std::max(worst, std::abs(g - 1.0));
    (g > 1.0 ? above : g < 1.0 ? below : equal) += 1;
  }
  const bool ok = median >= 1e-3 && median <= 1e-1 && worst < 1e-3 && !demo.final_gamma_local.empty();
  return {ok, fmt("sod median |gamma-1| = %.3e (want [1e-3, 1e-1]); gamma_demo max |gamma_k-1| = %.3e (want < 1e-3), "
                  "%zu elements above 1, %zu below, %zu equal",
                  median, worst, above, below, equal)};
}

Verdict structure_preservation() {
  std::vector<std::string> failures;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };
  for (int p = 1; p <= 8; ++p) check(euler::lgl_operator(p).sbp_defect() < 1e-13, fmt("SBP defect p=%d", p));

  const euler::GasModel gas{1.4, 1.0};
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> pos(0.1, 10.0), vel(-3.0, 3.0);
  double tadmor = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto qL = euler::to_conservative<2>(gas, {pos(rng), vel(rng), vel(rng), pos(rng)});
    const auto qR = euler::to_conservative<2>(gas, {pos(rng), vel(rng), vel(rng), pos(rng)});
    const auto eL = euler::entropy_quantities<2>(gas, qL), eR = euler::entropy_quantities<2>(gas, qR);
    for (int d = 0; d < 2; ++d) {
      const auto f = euler::ec_flux<2>(gas, qL, qR, d);
      double lhs = 0.0, scale = std::max({1.0, std::abs(eL.psi[d]), std::abs(eR.psi[d])});
      for (int v = 0; v < 4; ++v) {
        lhs += (eR.w[v] - eL.w[v]) * f[v];
        scale = std::max(scale, std::abs((eR.w[v] - eL.w[v]) * f[v]));
      }
      tadmor = std::max(tadmor, std::abs(lhs - (eR.psi[d] - eL.psi[d])) / scale);
    }
  }
  check(tadmor < 1e-12, fmt("Tadmor residual %.2e", tadmor));

  for (const std::string name : {"isentropic_vortex", "density_wave"}) {
    const ProblemSpec spec = make_problem(name);
    for (auto mode : {euler::InterfaceMode::ec, euler::InterfaceMode::es_rusanov}) {
      const auto sys = make_euler_system(spec, 3, 4, mode);
      const auto u = initial_state(spec, *sys);
      std::vector<double> du(sys->dim());
      sys->rhs(0.0, u, du);
      double dscale = 1.0;
      for (double x : du) dscale = std::max(dscale, std::abs(x));
      for (double r : sys->linear_invariants(du)) check(std::abs(r) / dscale < 1e-12, name + " conservation");
      const auto rates = sys->local_entropy_rate(u, du);
      double total = 0.0, rscale = 1.0;
      for (double r : rates) {
        total += r;
        rscale = std::max(rscale, std::abs(r));
      }
      if (mode == euler::InterfaceMode::ec)
        check(std::abs(total) / rscale < 1e-11, name + " EC entropy rate");
      else
        check(total / rscale <= 1e-11, name + " ES entropy rate");

      // Free stream.
      const std::vector<double> w = spec.dim == 1 ? std::vector<double>{1.2, 0.3, 0.9}
                                                  : std::vector<double>{1.2, 0.3, -0.5, 0.9};
      const auto uc = sys->project([w](std::array<double, 2>, double) { return w; }, 0.0);
      sys->rhs(0.0, uc, du);
      double fs = 0.0;
      for (double x : du) fs = std::max(fs, std::abs(x));
      check(fs < 1e-13, name + " free stream");

      std::vector<double> ref(sys->dim());
      sys->rhs_reference(0.0, u, ref);
      sys->rhs(0.0, u, du);
      double diff = 0.0;
      for (std::size_t i = 0; i < du.size(); ++i) diff = std::max(diff, std::abs(du[i] - ref[i]));
      check(diff <= 1e-12 * dscale, name + " OpenMP vs reference");
    }
  }
  std::string detail = fmt("SBP p=1..8, Tadmor max %.2e, conservation, entropy rates, free stream, kernel agreement",
                           tadmor);
  for (const auto& f : failures) detail += "; FAILED " + f;
  return {failures.empty(), detail};
}

Verdict linear_invariants() {
  double worst = 0.0;
  std::string detail;
  for (const std::string problem : {"density_wave", "isentropic_vortex"}) {
    for (const std::string mode : {"none", "global", "local"}) {
      std::vector<std::string> ov{"problem=\"" + problem + "\"", "relaxation.mode=\"" + mode + "\""};
      if (problem == "isentropic_vortex") ov.push_back("t_end=1");
      const RunResult res = execute(resolved(ov));
      const auto& a = res.summary.invariants_initial;
      const auto& b = res.summary.invariants_final;
      // Mass and momentum components; the last entry is energy.
      double w = 0.0;
      for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        w = std::max(w, std::abs(b[i] - a[i]) / std::max(1.0, std::abs(a[i])));
      }
      worst = std::max(worst, w);
      detail += fmt(" %s/%s %.1e", problem.c_str(), mode.c_str(), w);
    }
  }
  return {worst <= 1e-11, "relative drift:" + detail + " (want <= 1e-11)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"1 vortex convergence rate", vortex_rate},
      {"2 density wave convergence rate", density_wave_rate},
      {"3 local inequalities on shock problems", shock_inequalities},
      {"4 entropy conservation, EC global", ec_global_conservation},
      {"5 gamma - 1 scaling", gamma_slope},
      {"6 gamma magnitudes", gamma_magnitudes},
      {"7 structure preservation", structure_preservation},
      {"8 mass and momentum conservation", linear_invariants},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %s: %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str(), secs);
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
