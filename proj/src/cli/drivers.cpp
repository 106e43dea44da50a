#include "relaxrk/cli/drivers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "relaxrk/errors.hpp"

namespace relaxrk::cli {

namespace {

void set_threads(const std::optional<int>& threads) {
#ifdef _OPENMP
  if (threads) omp_set_num_threads(*threads);
#else
  (void)threads;
#endif
}

std::vector<std::string> invariant_names(const ProblemSpec& spec) {
  if (spec.kind != ProblemKind::euler) return {};
  if (spec.dim == 1) return {"mass", "momentum", "energy"};
  return {"mass", "momentum_x", "momentum_y", "energy"};
}

std::vector<std::string> primitive_names(int dim) {
  if (dim == 1) return {"rho", "u", "P"};
  return {"rho", "u", "v", "P"};
}

std::vector<std::string> coordinate_names(int dim) {
  if (dim == 1) return {"x"};
  return {"x", "y"};
}

double element_mean_density(const euler::EulerSystemBase& sys, std::span<const double> u, std::size_t e) {
  double mass = 0.0;
  double volume = 0.0;
  for (std::size_t node = 0; node < sys.nodes_per_element(); ++node) {
    mass += sys.node_weight(node) * u[sys.index(e, node, 0)];
    volume += sys.node_weight(node);
  }
  return mass / volume;
}

const euler::EulerSystemBase& require_euler(const RunResult& result) {
  if (!result.euler) throw ConfigError("problem " + result.run.spec.name + " is not an Euler problem");
  return *result.euler;
}

std::string describe(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

ErrorNorms error_norms(const euler::EulerSystemBase& sys, std::span<const double> u, const ProblemSpec& spec,
                       double t, std::size_t var) {
  if (!spec.has_exact()) throw ConfigError("problem " + spec.name + " has no exact solution");
  if (var >= sys.num_vars()) throw ConfigError("variable index out of range");
  ErrorNorms out;
  double volume = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
  for (std::size_t e = 0; e < sys.num_elements(); ++e) {
    for (std::size_t node = 0; node < sys.nodes_per_element(); ++node) {
      const std::vector<double> exact = evaluate_exact(spec, sys.node_point(e, node), t);
      const std::vector<double> num = sys.primitive(u, e, node);
      const double err = std::abs(num[var] - exact[var]);
      const double w = sys.node_weight(node);
      volume += w;
      l1 += w * err;
      l2 += w * err * err;
      out.Linf = std::max(out.Linf, err);
    }
  }
  out.L1 = l1 / volume;
  out.L2 = std::sqrt(l2 / volume);
  return out;
}

std::optional<double> convergence_rate(double e_prev, double e, std::size_t N_prev, std::size_t N) {
  if (!(e_prev > 0.0) || !(e > 0.0) || N_prev == N) return std::nullopt;
  return std::log(e_prev / e) / std::log(static_cast<double>(N) / static_cast<double>(N_prev));
}

std::array<double, 5> quantiles(std::vector<double> values) {
  if (values.empty()) throw ConfigError("quantiles of an empty set");
  std::sort(values.begin(), values.end());
  std::array<double, 5> q{};
  const double last = static_cast<double>(values.size() - 1);
  for (int i = 0; i < 5; ++i) {
    const double pos = 0.25 * i * last;
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    q[i] = values[lo] + frac * (values[hi] - values[lo]);
  }
  return q;
}

RunResult execute(const ResolvedRun& run, std::span<const StepObserver> extra_observers) {
  RunResult res;
  res.run = run;
  const ButcherTableau& tab = builtin_tableau(run.tableau);
  if (run.spec.kind == ProblemKind::euler) {
    res.euler = make_euler_system(run.spec, run.p, run.N, run.interface);
    res.u0 = initial_state(run.spec, *res.euler);
  } else {
    res.ode = make_ode_system(run.spec);
    res.u0 = run.spec.ode_initial;
  }
  const OdeSystem& sys = res.system();
  const bool local = run.relaxation.mode == RelaxationMode::local;

  if (run.t_end == 0.0) {
    res.summary.u_final = res.u0;
    res.summary.eta_initial = res.summary.eta_final = sys.entropies(res.u0);
    res.summary.invariants_initial = res.summary.invariants_final = sys.linear_invariants(res.u0);
    res.final_eta_local = res.summary.eta_final;
    return res;
  }

  std::size_t last_step = 0;
  double last_t = 0.0;
  std::vector<StepObserver> observers;
  observers.emplace_back([&](const StepObservation& obs) {
    last_step = obs.step;
    last_t = obs.t;
    HistoryRow row;
    row.step = obs.step;
    row.t = obs.t;
    row.dt = obs.dt;
    row.gamma = obs.gamma;
    row.eta_total = 0.0;
    for (double e : obs.eta) row.eta_total += e;
    row.invariants.assign(obs.invariants.begin(), obs.invariants.end());
    if (obs.report) {
      row.inequality_verified = obs.report->inequality_verified;
      row.max_scaled_excess = obs.report->max_scaled_excess;
      row.gamma_global_equivalent = obs.report->gamma_global_equivalent;
      if (run.relaxation.mode == RelaxationMode::global) row.gamma_global_equivalent = obs.gamma;
    }
    if (local && obs.report) {
      const auto& g = obs.report->gamma_local;
      const auto it = std::min_element(g.begin(), g.end());
      row.min_gamma_local = *it;
      row.argmin_k = static_cast<std::size_t>(it - g.begin());
      row.gamma_local_quantiles = quantiles(g);
      res.final_gamma_local = g;
    }
    res.history.push_back(std::move(row));
  });
  for (const auto& o : extra_observers) observers.push_back(o);

  AdvanceOptions opts;
  opts.t0 = 0.0;
  opts.t_end = run.t_end;
  opts.dt0 = run.dt;
  opts.mode = run.step_mode;
  opts.tol = run.tol;
  opts.max_steps = run.max_steps;
  try {
    res.summary = advance(sys, tab, run.relaxation, res.u0, opts, observers);
  } catch (const NumericalError& e) {
    throw NumericalError("step " + std::to_string(last_step + 1) + " from t = " + describe(last_t) + ": " + e.what());
  }
  res.final_eta_local = res.summary.eta_final;
  return res;
}

CsvTable solution_table(const RunResult& result) {
  CsvTable table;
  const std::vector<double>& u = result.summary.u_final;
  if (!result.euler) {
    table.header = {"index", "u"};
    for (std::size_t i = 0; i < u.size(); ++i) table.rows.push_back((CsvRow() << i << u[i]).cells);
    return table;
  }
  const auto& sys = *result.euler;
  const int dim = sys.spatial_dim();
  table.header = {"element", "node"};
  for (const auto& n : coordinate_names(dim)) table.header.push_back(n);
  for (const auto& n : primitive_names(dim)) table.header.push_back(n);
  for (std::size_t e = 0; e < sys.num_elements(); ++e) {
    for (std::size_t node = 0; node < sys.nodes_per_element(); ++node) {
      CsvRow row;
      row << e << node;
      const auto x = sys.node_point(e, node);
      for (int d = 0; d < dim; ++d) row << x[d];
      for (double w : sys.primitive(u, e, node)) row << w;
      table.rows.push_back(std::move(row.cells));
    }
  }
  return table;
}

CsvTable history_table(const RunResult& result) {
  CsvTable table;
  table.header = {"step", "t", "dt", "gamma", "min_gamma_local", "argmin_k", "eta_total"};
  for (const auto& n : invariant_names(result.run.spec)) table.header.push_back(n);
  table.header.push_back("inequality_verified");
  for (const auto& h : result.history) {
    CsvRow row;
    row << h.step << h.t << h.dt << h.gamma << h.min_gamma_local;
    if (h.argmin_k) {
      row << *h.argmin_k;
    } else {
      row << std::string();
    }
    row << h.eta_total;
    for (double v : h.invariants) row << v;
    row << (h.inequality_verified ? 1 : 0);
    table.rows.push_back(std::move(row.cells));
  }
  return table;
}

CsvTable elements_table(const RunResult& result) {
  const auto& sys = require_euler(result);
  const int dim = sys.spatial_dim();
  CsvTable table;
  table.header = {"element"};
  for (const auto& n : coordinate_names(dim)) table.header.push_back(n);
  table.header.insert(table.header.end(), {"eta", "gamma_local", "rho_mean"});
  const bool have_gamma = result.final_gamma_local.size() == sys.num_elements();
  for (std::size_t e = 0; e < sys.num_elements(); ++e) {
    CsvRow row;
    row << e;
    const auto x = sys.mesh().point(e, {0.0, 0.0});
    for (int d = 0; d < dim; ++d) row << x[d];
    row << result.final_eta_local.at(e);
    row << (have_gamma ? std::optional<double>(result.final_gamma_local[e]) : std::nullopt);
    row << element_mean_density(sys, result.summary.u_final, e);
    table.rows.push_back(std::move(row.cells));
  }
  return table;
}

CsvTable gamma_history_table(const RunResult& result) {
  CsvTable table;
  table.header = {"step",      "t",         "dt",        "gamma",     "gamma_global_equivalent", "min_gamma_local",
                  "argmin_k",  "gamma_q0",  "gamma_q25", "gamma_q50", "gamma_q75",               "gamma_q100"};
  for (const auto& h : result.history) {
    CsvRow row;
    row << h.step << h.t << h.dt << h.gamma << h.gamma_global_equivalent << h.min_gamma_local;
    if (h.argmin_k) {
      row << *h.argmin_k;
    } else {
      row << std::string();
    }
    for (int i = 0; i < 5; ++i) {
      row << (h.gamma_local_quantiles ? std::optional<double>((*h.gamma_local_quantiles)[i]) : std::nullopt);
    }
    table.rows.push_back(std::move(row.cells));
  }
  return table;
}

CsvTable gamma_profile_table(const RunResult& result) {
  const auto& sys = require_euler(result);
  if (result.final_gamma_local.size() != sys.num_elements()) {
    throw ConfigError("no local relaxation parameters recorded");
  }
  const int dim = sys.spatial_dim();
  CsvTable table;
  table.header = {"element"};
  for (const auto& n : coordinate_names(dim)) table.header.push_back(n);
  table.header.insert(table.header.end(), {"gamma_local", "rho_mean"});
  for (std::size_t e = 0; e < sys.num_elements(); ++e) {
    CsvRow row;
    row << e;
    const auto x = sys.mesh().point(e, {0.0, 0.0});
    for (int d = 0; d < dim; ++d) row << x[d];
    row << result.final_gamma_local[e] << element_mean_density(sys, result.summary.u_final, e);
    table.rows.push_back(std::move(row.cells));
  }
  return table;
}

std::vector<ConvergenceRow> convergence_study(const ResolvedRun& base, const std::vector<std::size_t>& N_list) {
  if (base.spec.kind != ProblemKind::euler) throw ConfigError("convergence studies need an Euler problem");
  if (!base.spec.has_exact()) throw ConfigError("problem " + base.spec.name + " has no exact solution");
  if (N_list.size() < 2) throw ConfigError("a convergence study needs at least two mesh sizes in N_list");
  std::vector<ConvergenceRow> rows;
  for (std::size_t N : N_list) {
    const ResolvedRun run = base.refined(N);
    const RunResult res = execute(run);
    ConvergenceRow row;
    row.N = N;
    row.dt = run.dt;
    const std::size_t nvars = base.all_variables ? res.euler->num_vars() : 1;
    for (std::size_t v = 0; v < nvars; ++v) {
      row.errors.push_back(error_norms(*res.euler, res.summary.u_final, base.spec, res.summary.t_final, v));
    }
    row.rates.resize(nvars);
    if (!rows.empty()) {
      const ConvergenceRow& prev = rows.back();
      for (std::size_t v = 0; v < nvars; ++v) {
        row.rates[v] = {convergence_rate(prev.errors[v].L1, row.errors[v].L1, prev.N, N),
                        convergence_rate(prev.errors[v].L2, row.errors[v].L2, prev.N, N),
                        convergence_rate(prev.errors[v].Linf, row.errors[v].Linf, prev.N, N)};
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

CsvTable convergence_table(const std::vector<ConvergenceRow>& rows, const ProblemSpec& spec, bool all_variables) {
  CsvTable table;
  table.header = {"N", "dt"};
  std::vector<std::string> names = primitive_names(spec.dim);
  if (!all_variables) names.resize(1);
  for (const auto& n : names) {
    for (const char* suffix : {"_L1", "_L2", "_Linf", "_rate_L1", "_rate_L2", "_rate_Linf"}) {
      table.header.push_back(n + suffix);
    }
  }
  for (const auto& r : rows) {
    CsvRow row;
    row << r.N << r.dt;
    for (std::size_t v = 0; v < names.size(); ++v) {
      row << r.errors.at(v).L1 << r.errors.at(v).L2 << r.errors.at(v).Linf;
      for (const auto& rate : r.rates.at(v)) row << rate;
    }
    table.rows.push_back(std::move(row.cells));
  }
  return table;
}

int cmd_run(const RunConfig& cfg, std::ostream& log) {
  const ResolvedRun run = resolve(cfg);
  set_threads(cfg.threads);
  const RunResult res = execute(run);
  const std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);
  write_csv(dir / "solution.csv", solution_table(res));
  write_csv(dir / "history.csv", history_table(res));
  if (res.euler) write_csv(dir / "elements.csv", elements_table(res));
  log << "problem " << run.spec.name << ": " << res.summary.accepted_steps << " steps ("
      << res.summary.rejected_steps << " rejected), t_final = " << describe(res.summary.t_final)
      << ", gamma in [" << describe(res.summary.min_gamma) << ", " << describe(res.summary.max_gamma) << "]\n";
  log << "wrote " << (dir / "solution.csv").string() << ", " << (dir / "history.csv").string();
  if (res.euler) log << ", " << (dir / "elements.csv").string();
  log << "\n";
  return 0;
}

int cmd_convergence(const RunConfig& cfg, std::ostream& out) {
  const ResolvedRun base = resolve(cfg);
  set_threads(cfg.threads);
  std::vector<std::size_t> N_list = cfg.N_list;
  if (N_list.empty()) throw ConfigError("convergence needs N_list (at least two mesh sizes)");
  const auto rows = convergence_study(base, N_list);
  const std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);
  write_csv(dir / "convergence.csv", convergence_table(rows, base.spec, base.all_variables));

  auto rate = [](const std::optional<double>& r) { return r ? describe(std::round(*r * 100.0) / 100.0) : std::string("---"); };
  const auto names = primitive_names(base.spec.dim);
  char line[256];
  std::snprintf(line, sizeof line, "%-6s %-4s %6s %11s %7s %11s %7s %11s %7s\n", "var", "p", "N", "L1", "rate",
                "L2", "rate", "Linf", "rate");
  out << line;
  for (std::size_t v = 0; v < rows.front().errors.size(); ++v) {
    for (const auto& r : rows) {
      std::snprintf(line, sizeof line, "%-6s %-4d %6zu %11.3e %7s %11.3e %7s %11.3e %7s\n", names[v].c_str(), base.p,
                    r.N, r.errors[v].L1, rate(r.rates[v][0]).c_str(), r.errors[v].L2, rate(r.rates[v][1]).c_str(),
                    r.errors[v].Linf, rate(r.rates[v][2]).c_str());
      out << line;
    }
  }
  return 0;
}

int cmd_gamma_history(const RunConfig& cfg, std::ostream& log) {
  if (cfg.relaxation.mode == RelaxationMode::none) {
    throw ConfigError("gamma-history needs relaxation.mode = global or local");
  }
  RunConfig patched = cfg;
  if (patched.relaxation.mode == RelaxationMode::local) patched.relaxation.diagnose_global = true;
  const ResolvedRun run = resolve(patched);
  set_threads(cfg.threads);
  const RunResult res = execute(run);
  const std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);
  write_csv(dir / "gamma_history.csv", gamma_history_table(res));
  log << "wrote " << (dir / "gamma_history.csv").string();
  if (run.relaxation.mode == RelaxationMode::local && res.euler) {
    write_csv(dir / "gamma_profile.csv", gamma_profile_table(res));
    log << ", " << (dir / "gamma_profile.csv").string();
  }
  log << " (" << res.summary.accepted_steps << " steps)\n";
  return 0;
}

}  // namespace relaxrk::cli
