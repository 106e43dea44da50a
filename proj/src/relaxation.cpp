#include "relaxrk/relaxation.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

#include "relaxrk/errors.hpp"
#include "relaxrk/root_finding.hpp"

namespace relaxrk {

RelaxationMode parse_relaxation_mode(const std::string& name) {
  if (name == "none") return RelaxationMode::none;
  if (name == "global") return RelaxationMode::global;
  if (name == "local") return RelaxationMode::local;
  throw ConfigError("unknown relaxation mode '" + name + "'; valid: none, global, local");
}

std::string to_string(RelaxationMode mode) {
  switch (mode) {
    case RelaxationMode::none: return "none";
    case RelaxationMode::global: return "global";
    case RelaxationMode::local: return "local";
  }
  return "?";
}

RootSolver parse_root_solver(const std::string& name) {
  if (name == "brent") return RootSolver::brent;
  if (name == "bisection") return RootSolver::bisection;
  throw ConfigError("unknown root solver '" + name + "'; valid: brent, bisection");
}

std::string to_string(RootSolver solver) { return solver == RootSolver::brent ? "brent" : "bisection"; }

void RelaxationConfig::validate() const {
  if (!(root_tol > 0.0)) throw ConfigError("relaxation.root_tol must be positive");
  if (!(residual_tol > 0.0)) throw ConfigError("relaxation.residual_tol must be positive");
  if (!(bracket_halfwidth > 0.0)) throw ConfigError("relaxation.bracket_halfwidth must be positive");
  if (max_expansions < 0) throw ConfigError("relaxation.max_expansions must be non-negative");
  if (!(gamma_floor > 0.0 && gamma_floor < 1.0)) throw ConfigError("relaxation.gamma_floor must lie in (0, 1)");
  if (!(curvature_tol >= 0.0)) throw ConfigError("relaxation.curvature_tol must be non-negative");
}

namespace {

// Relaxation residual along the secant, built from an entropy-increment
// callable inc(gamma) = eta(u_old + gamma d) - eta(u_old) that may return
// +infinity outside the admissible set.
template <class Increment>
GammaSolve solve_with(Increment&& inc, double eta_old, double predicted, const RelaxationConfig& cfg,
                      std::size_t k) {
  const double scale = entropy_scale(eta_old);
  auto r = [&](double g) { return inc(g) - g * predicted; };

  const double change_at_one = inc(1.0);
  if (std::abs(change_at_one) < cfg.curvature_tol * scale && std::abs(predicted) < cfg.curvature_tol * scale) {
    return {1.0, 0, true, change_at_one - predicted};
  }

  int evaluations = 1;
  auto eval_hi = [&](double& hi) {
    double value = r(hi);
    ++evaluations;
    // Pull the upper end back towards 1 until the state is admissible again.
    for (int i = 0; i < 64 && !std::isfinite(value); ++i) {
      hi = 0.5 * (1.0 + hi);
      value = r(hi);
      ++evaluations;
    }
    return value;
  };

  double delta = cfg.bracket_halfwidth;
  double lo = std::max(1.0 - delta, cfg.gamma_floor);
  double hi = 1.0 + delta;
  double r_lo = r(lo);
  double r_hi = eval_hi(hi);
  ++evaluations;
  for (int expansion = 0;; ++expansion) {
    if (std::isnan(r_lo) || std::isnan(r_hi) || std::isinf(r_lo)) {
      std::ostringstream msg;
      msg << "non-finite relaxation residual in partition " << k;
      throw BracketError(msg.str(), k, r_lo, r_hi);
    }
    const bool bracketed = r_lo <= 0.0 && r_hi >= 0.0 && (r_lo < 0.0 || r_hi > 0.0);
    if (bracketed) break;
    // Residual flat at roundoff level (e.g. a tiny final step): gamma = 1
    // already satisfies the inequality within the a-posteriori tolerance.
    const double flat_cap = cfg.residual_tol * scale;
    if (std::abs(r_lo) <= flat_cap && std::abs(r_hi) <= flat_cap) {
      const double r_one = change_at_one - predicted;
      if (std::abs(r_one) <= flat_cap) return {1.0, evaluations, true, r_one};
    }
    if (r_lo > 0.0 && r_hi > 0.0 && lo <= cfg.gamma_floor) {
      std::ostringstream msg;
      msg << "relaxation root in partition " << k << " lies at or below gamma_floor = " << cfg.gamma_floor
          << " (r(" << lo << ") = " << r_lo << ")";
      throw DegenerateRootError(msg.str(), k);
    }
    if (expansion >= cfg.max_expansions || (r_lo > 0.0 && r_hi < 0.0)) {
      std::ostringstream msg;
      msg << "no sign change of the relaxation residual in partition " << k << " on [" << lo << ", " << hi
          << "]: r = (" << r_lo << ", " << r_hi << ")";
      throw BracketError(msg.str(), k, r_lo, r_hi);
    }
    delta *= 2.0;
    lo = std::max(1.0 - delta, cfg.gamma_floor);
    hi = 1.0 + delta;
    r_lo = r(lo);
    r_hi = eval_hi(hi);
    ++evaluations;
  }

  RootBracket root = cfg.solver == RootSolver::brent
                         ? brent(r, lo, hi, r_lo, r_hi, cfg.root_tol)
                         : bisection(r, lo, hi, r_lo, r_hi, cfg.root_tol);
  evaluations += root.iterations;

  const double residual_cap = cfg.residual_tol * scale;
  double gamma = root.nonpositive_side();
  double residual = root.value_at_nonpositive_side();
  if (std::abs(residual) > residual_cap) {
    // Steep residual: polish on the final bracket.
    double a = root.x, fa = root.fx, b = root.x_other, fb = root.fx_other;
    if (a > b) {
      std::swap(a, b);
      std::swap(fa, fb);
    }
    const RootBracket polished = bisection(r, a, b, fa, fb, 0.0, 200);
    evaluations += polished.iterations;
    gamma = polished.nonpositive_side();
    residual = polished.value_at_nonpositive_side();
    if (std::abs(residual) > residual_cap) {
      std::ostringstream msg;
      msg << "relaxation residual " << residual << " in partition " << k << " exceeds " << residual_cap;
      throw NumericalError(msg.str());
    }
  }
  if (gamma <= cfg.gamma_floor) {
    throw DegenerateRootError("relaxation root at or below gamma_floor in partition " + std::to_string(k), k);
  }
  return {gamma, evaluations, false, residual};
}

}  // namespace

double gamma_residual(const OdeSystem& sys, std::size_t k, std::span<const double> u_old,
                      std::span<const double> d, double eta_old_k, double e_k, double gamma) {
  const double inc = sys.entropy_increment(k, u_old, d, gamma);
  if (!std::isfinite(inc)) {
    throw NumericalError("non-finite entropy in partition " + std::to_string(k) + " at gamma = " +
                         std::to_string(gamma));
  }
  return inc - gamma * (e_k - eta_old_k);
}

GammaSolve solve_gamma(const OdeSystem& sys, std::size_t k, std::span<const double> u_old,
                       std::span<const double> d, double eta_old_k, double e_k, const RelaxationConfig& cfg) {
  return solve_with([&](double g) { return sys.entropy_increment(k, u_old, d, g); }, eta_old_k, e_k - eta_old_k,
                    cfg, k);
}

GammaSolve solve_gamma_global(const OdeSystem& sys, std::span<const double> u_old, std::span<const double> d,
                              double eta_old, double e, const RelaxationConfig& cfg) {
  const std::size_t K = sys.num_partitions();
  auto total_increment = [&](double g) {
    double acc = 0.0;
    for (std::size_t k = 0; k < K; ++k) acc += sys.entropy_increment(k, u_old, d, g);
    return acc;
  };
  return solve_with(total_increment, eta_old, e - eta_old, cfg, 0);
}

std::pair<std::vector<double>, double> relax_update(std::span<const double> u_old,
                                                    std::span<const double> u_new, double t_old, double t_new,
                                                    double gamma) {
  std::vector<double> u(u_old.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = u_old[i] + gamma * (u_new[i] - u_old[i]);
  return {std::move(u), t_old + gamma * (t_new - t_old)};
}

RelaxedStep local_relax_step(const OdeSystem& sys, std::span<const double> u_old, const StepResult& step,
                             const RelaxationConfig& cfg) {
  const std::size_t K = sys.num_partitions();
  RelaxedStep out;
  RelaxationReport& rep = out.report;

  if (cfg.mode == RelaxationMode::none) {
    out.u = step.u_new;
    out.t = step.t_new;
    rep.gamma_local.assign(1, 1.0);
    rep.residual_at_root.assign(1, 0.0);
    rep.iterations.assign(1, 0);
    rep.fallback.assign(1, false);
    return out;
  }
  if (step.eta_old.size() != K || step.estimate.size() != K) {
    throw ConfigError("relaxation needs a step computed with entropy estimates");
  }

  std::vector<double> d(u_old.size());
  if (step.increment.size() == d.size()) {
    d = step.increment;
  } else {
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = step.u_new[i] - u_old[i];
  }

  // e_k - eta_old_k, taken from the step when it carries it unrounded.
  std::vector<double> change(K);
  const bool exact_change = step.entropy_change.size() == K;
  double eta_old_total = 0.0;
  double estimate_total = 0.0;
  double change_total = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    change[k] = exact_change ? step.entropy_change[k] : step.estimate[k] - step.eta_old[k];
    eta_old_total += step.eta_old[k];
    estimate_total += step.estimate[k];
    change_total += change[k];
  }
  auto local_increment = [&](std::size_t k) {
    return [&sys, k, u_old, &d](double g) { return sys.entropy_increment(k, u_old, d, g); };
  };
  auto global_solve = [&] {
    auto total_increment = [&](double g) {
      double acc = 0.0;
      for (std::size_t k = 0; k < K; ++k) acc += sys.entropy_increment(k, u_old, d, g);
      return acc;
    };
    return solve_with(total_increment, eta_old_total, change_total, cfg, 0);
  };

  if (cfg.mode == RelaxationMode::local) {
    rep.gamma_local.assign(K, 1.0);
    rep.residual_at_root.assign(K, 0.0);
    rep.iterations.assign(K, 0);
    std::vector<char> fallback(K, 0);
    std::vector<std::exception_ptr> failures(K);
    const auto n_partitions = static_cast<long long>(K);
#pragma omp parallel for schedule(dynamic, 16)
    for (long long kk = 0; kk < n_partitions; ++kk) {
      const auto k = static_cast<std::size_t>(kk);
      try {
        const GammaSolve sol = solve_with(local_increment(k), step.eta_old[k], change[k], cfg, k);
        rep.gamma_local[k] = sol.gamma;
        rep.residual_at_root[k] = sol.residual;
        rep.iterations[k] = sol.iterations;
        fallback[k] = sol.fallback ? 1 : 0;
      } catch (...) {
        failures[k] = std::current_exception();
      }
    }
    for (const auto& failure : failures) {
      if (failure) std::rethrow_exception(failure);
    }
    rep.fallback.assign(fallback.begin(), fallback.end());
    rep.gamma = 1.0;
    bool first = true;
    for (std::size_t k = 0; k < K; ++k) {
      const double g = rep.fallback[k] ? 1.0 : rep.gamma_local[k];
      if (first || g < rep.gamma) rep.gamma = g;
      first = false;
    }
    rep.eta_old = step.eta_old;
    rep.estimate = step.estimate;
    if (cfg.diagnose_global) {
      rep.gamma_global_equivalent = global_solve().gamma;
    }
  } else {
    const GammaSolve sol = global_solve();
    rep.gamma = sol.gamma;
    rep.gamma_local.assign(1, sol.gamma);
    rep.residual_at_root.assign(1, sol.residual);
    rep.iterations.assign(1, sol.iterations);
    rep.fallback.assign(1, sol.fallback);
    rep.eta_old.assign(1, eta_old_total);
    rep.estimate.assign(1, estimate_total);
    rep.gamma_global_equivalent = sol.gamma;
  }

  std::vector<double> u_gamma(u_old.size());
  for (std::size_t i = 0; i < u_gamma.size(); ++i) u_gamma[i] = u_old[i] + rep.gamma * d[i];
  const double t_gamma = step.t_old + rep.gamma * (step.t_new - step.t_old);

  // A-posteriori check of eta_k(u_gamma) <= eta_old + gamma (e - eta_old).
  const std::size_t n_checks = rep.eta_old.size();
  rep.eta_relaxed.assign(n_checks, 0.0);
  if (cfg.mode == RelaxationMode::local) {
    const auto n_partitions = static_cast<long long>(K);
#pragma omp parallel for schedule(static)
    for (long long kk = 0; kk < n_partitions; ++kk) {
      rep.eta_relaxed[kk] = sys.partition_entropy(static_cast<std::size_t>(kk), u_gamma);
    }
  } else {
    rep.eta_relaxed[0] = sys.total_entropy(u_gamma);
  }
  rep.inequality_verified = true;
  rep.max_scaled_excess = -std::numeric_limits<double>::infinity();
  std::size_t worst = 0;
  for (std::size_t k = 0; k < n_checks; ++k) {
    const double scale = entropy_scale(rep.eta_old[k]);
    const double predicted = cfg.mode == RelaxationMode::local ? change[k] : change_total;
    const double bound = rep.eta_old[k] + rep.gamma * predicted;
    const double scaled_excess = (rep.eta_relaxed[k] - bound) / scale;
    if (scaled_excess > rep.max_scaled_excess) {
      rep.max_scaled_excess = scaled_excess;
      worst = k;
    }
    if (!(scaled_excess <= cfg.residual_tol)) rep.inequality_verified = false;
  }
  if (!rep.inequality_verified) {
    std::ostringstream msg;
    msg << "local entropy inequality violated in partition " << worst << " by " << rep.max_scaled_excess
        << " (scaled) at t = " << t_gamma;
    throw EntropyViolationError(msg.str(), worst, rep.max_scaled_excess);
  }

  out.u = std::move(u_gamma);
  out.t = t_gamma;
  return out;
}

}  // namespace relaxrk
