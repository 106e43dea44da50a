#include "relaxrk/cli/run_config.hpp"

#include <fstream>
#include <set>

#include "relaxrk/errors.hpp"

namespace relaxrk::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.count(key)) {
      std::string valid;
      for (const auto& k : known) valid += (valid.empty() ? "" : ", ") + k;
      throw ConfigError("unknown config key '" + where + key + "' (valid: " + valid + ")");
    }
  }
}

template <class T>
T get(const json& obj, const std::string& key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config key '" + where + key + "' has the wrong type: " + e.what());
  }
}

template <class T>
void read_optional(const json& obj, const std::string& key, std::optional<T>& out, const std::string& where = "") {
  if (obj.contains(key) && !obj.at(key).is_null()) out = get<T>(obj, key, where);
}

template <class T>
void read_value(const json& obj, const std::string& key, T& out, const std::string& where = "") {
  if (obj.contains(key) && !obj.at(key).is_null()) out = get<T>(obj, key, where);
}

}  // namespace

RunConfig run_config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("run configuration must be a JSON object");
  reject_unknown(doc,
                 {"problem", "params", "p", "N", "tableau", "relaxation", "dt", "courant", "tol", "t_end", "interface",
                  "output_dir", "threads", "max_steps", "N_list", "all_variables"},
                 "");
  RunConfig cfg;
  read_value(doc, "problem", cfg.problem);
  if (doc.contains("params")) {
    const json& params = doc.at("params");
    if (!params.is_object()) throw ConfigError("config key 'params' must be an object");
    for (const auto& [key, value] : params.items()) {
      if (!value.is_number()) throw ConfigError("parameter 'params." + key + "' must be a number");
      cfg.params[key] = value.get<double>();
    }
  }
  read_optional(doc, "p", cfg.p);
  if (doc.contains("N")) {
    const int n = get<int>(doc, "N", "");
    if (n < 1) throw ConfigError("N must be at least 1");
    cfg.N = static_cast<std::size_t>(n);
  }
  read_optional(doc, "tableau", cfg.tableau);
  if (doc.contains("relaxation")) {
    const json& r = doc.at("relaxation");
    if (!r.is_object()) throw ConfigError("config key 'relaxation' must be an object");
    reject_unknown(r,
                   {"mode", "root_tol", "residual_tol", "bracket_halfwidth", "max_expansions", "gamma_floor",
                    "curvature_tol", "solver", "diagnose_global"},
                   "relaxation.");
    const std::string where = "relaxation.";
    if (r.contains("mode")) cfg.relaxation.mode = parse_relaxation_mode(get<std::string>(r, "mode", where));
    if (r.contains("solver")) cfg.relaxation.solver = parse_root_solver(get<std::string>(r, "solver", where));
    read_value(r, "root_tol", cfg.relaxation.root_tol, where);
    read_value(r, "residual_tol", cfg.relaxation.residual_tol, where);
    read_value(r, "bracket_halfwidth", cfg.relaxation.bracket_halfwidth, where);
    read_value(r, "max_expansions", cfg.relaxation.max_expansions, where);
    read_value(r, "gamma_floor", cfg.relaxation.gamma_floor, where);
    read_value(r, "curvature_tol", cfg.relaxation.curvature_tol, where);
    read_value(r, "diagnose_global", cfg.relaxation.diagnose_global, where);
  }
  read_optional(doc, "dt", cfg.dt);
  read_optional(doc, "courant", cfg.courant);
  read_optional(doc, "tol", cfg.tol);
  read_optional(doc, "t_end", cfg.t_end);
  read_optional(doc, "interface", cfg.interface);
  read_value(doc, "output_dir", cfg.output_dir);
  read_optional(doc, "threads", cfg.threads);
  if (doc.contains("max_steps")) {
    const long long m = get<long long>(doc, "max_steps", "");
    if (m < 1) throw ConfigError("max_steps must be at least 1");
    cfg.max_steps = static_cast<std::size_t>(m);
  }
  if (doc.contains("N_list")) {
    const auto list = get<std::vector<int>>(doc, "N_list", "");
    for (int n : list) {
      if (n < 1) throw ConfigError("N_list entries must be at least 1");
      cfg.N_list.push_back(static_cast<std::size_t>(n));
    }
  }
  read_value(doc, "all_variables", cfg.all_variables);
  return cfg;
}

json run_config_to_json(const RunConfig& cfg) {
  json doc;
  doc["problem"] = cfg.problem;
  doc["params"] = json::object();
  for (const auto& [k, v] : cfg.params) doc["params"][k] = v;
  if (cfg.p) doc["p"] = *cfg.p;
  if (cfg.N) doc["N"] = *cfg.N;
  if (cfg.tableau) doc["tableau"] = *cfg.tableau;
  const RelaxationConfig& r = cfg.relaxation;
  doc["relaxation"] = {{"mode", to_string(r.mode)},
                       {"root_tol", r.root_tol},
                       {"residual_tol", r.residual_tol},
                       {"bracket_halfwidth", r.bracket_halfwidth},
                       {"max_expansions", r.max_expansions},
                       {"gamma_floor", r.gamma_floor},
                       {"curvature_tol", r.curvature_tol},
                       {"solver", to_string(r.solver)},
                       {"diagnose_global", r.diagnose_global}};
  if (cfg.dt) doc["dt"] = *cfg.dt;
  if (cfg.courant) doc["courant"] = *cfg.courant;
  if (cfg.tol) doc["tol"] = *cfg.tol;
  if (cfg.t_end) doc["t_end"] = *cfg.t_end;
  if (cfg.interface) doc["interface"] = *cfg.interface;
  doc["output_dir"] = cfg.output_dir;
  if (cfg.threads) doc["threads"] = *cfg.threads;
  doc["max_steps"] = cfg.max_steps;
  if (!cfg.N_list.empty()) doc["N_list"] = cfg.N_list;
  doc["all_variables"] = cfg.all_variables;
  return doc;
}

void apply_override(json& doc, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);

  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("override key '" + key + "' has an empty component");
    if (!node->is_object()) {
      if (!node->is_null()) throw ConfigError("override key '" + key + "' descends into a non-object");
      *node = json::object();
    }
    if (dot == std::string::npos) {
      (*node)[part] = value;
      break;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

RunConfig load_run_config(const std::optional<std::filesystem::path>& path, const std::vector<std::string>& overrides) {
  json doc = json::object();
  if (path) {
    std::ifstream in(*path);
    if (!in) throw ConfigError("cannot open config file " + path->string());
    doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw ConfigError("config file " + path->string() + " is not valid JSON");
  }
  for (const auto& o : overrides) apply_override(doc, o);
  return run_config_from_json(doc);
}

double ResolvedRun::courant() const {
  if (spec.kind != ProblemKind::euler) throw ConfigError("Courant number is defined for Euler problems only");
  const double dx = (spec.upper[0] - spec.lower[0]) / static_cast<double>(N);
  return spec.u_ref * dt / dx;
}

ResolvedRun ResolvedRun::refined(std::size_t N_new) const {
  if (N_new < 1) throw ConfigError("N must be at least 1");
  ResolvedRun out = *this;
  out.dt = dt * static_cast<double>(N) / static_cast<double>(N_new);
  out.N = N_new;
  return out;
}

ResolvedRun resolve(const RunConfig& cfg) {
  ResolvedRun run;
  run.spec = make_problem(cfg.problem, cfg.params);
  const ProblemDefaults& def = run.spec.defaults;
  const bool euler_problem = run.spec.kind == ProblemKind::euler;

  run.p = cfg.p.value_or(def.p);
  run.N = cfg.N.value_or(def.N);
  if (euler_problem && (run.p < 1 || run.p > 8)) {
    throw ConfigError("polynomial degree p must be in [1, 8], got " + std::to_string(run.p));
  }
  run.tableau = cfg.tableau.value_or(def.tableau);
  builtin_tableau(run.tableau);
  run.relaxation = cfg.relaxation;
  run.relaxation.validate();
  run.interface = cfg.interface ? euler::parse_interface_mode(*cfg.interface) : def.interface;
  run.t_end = cfg.t_end.value_or(def.t_end);
  if (!(run.t_end >= 0.0)) throw ConfigError("t_end must be non-negative");
  run.max_steps = cfg.max_steps;
  run.all_variables = cfg.all_variables;
  if (cfg.threads && *cfg.threads < 1) throw ConfigError("threads must be at least 1");

  const int given = (cfg.dt ? 1 : 0) + (cfg.courant ? 1 : 0) + (cfg.tol ? 1 : 0);
  if (given > 1) throw ConfigError("give at most one of dt, courant and tol");
  const double default_dt = def.dt * static_cast<double>(def.N) / static_cast<double>(euler_problem ? run.N : def.N);
  if (cfg.dt) {
    if (!(*cfg.dt > 0.0)) throw ConfigError("dt must be positive");
    run.dt = *cfg.dt;
  } else if (cfg.courant) {
    if (!euler_problem) throw ConfigError("courant applies to Euler problems only");
    if (!(*cfg.courant > 0.0)) throw ConfigError("courant must be positive");
    const double dx = (run.spec.upper[0] - run.spec.lower[0]) / static_cast<double>(run.N);
    run.dt = *cfg.courant * dx / run.spec.u_ref;
  } else {
    run.dt = default_dt;
  }
  if (cfg.tol) {
    if (!(*cfg.tol > 0.0)) throw ConfigError("tol must be positive");
    if (!builtin_tableau(run.tableau).has_embedded()) {
      throw ConfigError("adaptive stepping needs a tableau with embedded weights; " + run.tableau + " has none");
    }
    run.step_mode = StepMode::adaptive;
    run.tol = cfg.tol;
  }
  return run;
}

}  // namespace relaxrk::cli
