#include "randopt/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace randopt {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v) {
  const std::string t = trim(v);
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) throw ConfigError("expected a number, got '" + t + "'");
  return out;
}

std::uint64_t to_uint(const std::string& v) {
  const std::string t = trim(v);
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ConfigError("expected a nonnegative integer, got '" + t + "'");
  return out;
}

std::vector<double> to_list(const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(item));
  if (out.empty()) throw ConfigError("expected a comma-separated list");
  return out;
}

using Setter = std::function<void(ExperimentSpec&, const std::string&)>;

struct KeyInfo {
  std::string doc;
  Setter set;
};

const std::map<std::string, KeyInfo>& table() {
  static const std::map<std::string, KeyInfo> t = {
      {"problem.name", {"quadratic | pseudo_huber | rosenbrock | finite_sum", [](auto& s, auto& v) { s.problem.name = v; }}},
      {"problem.dim", {"dimension (rosenbrock: even)", [](auto& s, auto& v) { s.problem.dim = static_cast<Eigen::Index>(to_uint(v)); }}},
      {"problem.condition", {"quadratic condition number", [](auto& s, auto& v) { s.problem.condition = to_double(v); }}},
      {"problem.seed", {"seed of the problem construction", [](auto& s, auto& v) { s.problem.seed = to_uint(v); }}},
      {"problem.box_lo", {"rosenbrock domain lower bound (every coordinate)", [](auto& s, auto& v) { s.problem.box_lo = to_double(v); }}},
      {"problem.box_hi", {"rosenbrock domain upper bound (every coordinate)", [](auto& s, auto& v) { s.problem.box_hi = to_double(v); }}},
      {"problem.x0", {"start point, comma separated", [](auto& s, auto& v) { s.problem.x0 = to_list(v); }}},
      {"problem.terms", {"finite_sum: number of terms", [](auto& s, auto& v) { s.problem.terms = to_uint(v); }}},
      {"problem.heterogeneity", {"finite_sum: spread of the term minimizers", [](auto& s, auto& v) { s.problem.heterogeneity = to_double(v); }}},
      {"algo.name", {"ls_steepest | ls_general | ls_fully_linear | arc | arc_fully_quadratic",
                     [](auto& s, auto& v) { s.algorithm = algorithm_from_string(v); }}},
      {"algo.gamma", {"step-size factor in (0, 1)", [](auto& s, auto& v) { s.ls.gamma = s.arc.gamma = to_double(v); }}},
      {"algo.theta", {"sufficient decrease constant in (0, 1)", [](auto& s, auto& v) { s.ls.theta = s.arc.theta = to_double(v); }}},
      {"algo.alpha_max", {"line search: largest step size", [](auto& s, auto& v) { s.ls.alpha_max = to_double(v); }}},
      {"algo.alpha0", {"line search: initial step size", [](auto& s, auto& v) { s.ls.alpha0 = to_double(v); }}},
      {"algo.max_iters", {"iteration cap", [](auto& s, auto& v) { s.ls.max_iters = s.arc.max_iters = to_uint(v); }}},
      {"algo.sigma_min", {"ARC: smallest regularization weight", [](auto& s, auto& v) { s.arc.sigma_min = to_double(v); }}},
      {"algo.sigma0", {"ARC: initial regularization weight", [](auto& s, auto& v) { s.arc.sigma0 = to_double(v); }}},
      {"algo.kappa_theta", {"ARC: subproblem termination constant in (0, 1)", [](auto& s, auto& v) { s.arc.kappa_theta = to_double(v); }}},
      {"algo.kappa_delta", {"gated variants: radius shrink factor > 1", [](auto& s, auto& v) { s.ls.kappa_delta = s.arc.kappa_delta = to_double(v); }}},
      {"algo.xi0", {"gated variants: initial radius parameter", [](auto& s, auto& v) { s.ls.xi0 = s.arc.xi0 = to_double(v); }}},
      {"algo.transform", {"ls_general: diagonal of the SPD transform", [](auto& s, auto& v) { s.transform_diagonal = to_list(v); }}},
      {"algo.regime", {"line search: nonconvex | convex | strongly_convex (default: problem class)",
                       [](auto& s, auto& v) {
                         if (v == "nonconvex") s.regime = ConvexityClass::nonconvex;
                         else if (v == "convex") s.regime = ConvexityClass::convex;
                         else if (v == "strongly_convex") s.regime = ConvexityClass::strongly_convex;
                         else throw ConfigError("unknown regime '" + v + "'");
                       }}},
      {"oracle.p", {"accuracy probability when grid.p is absent", [](auto& s, auto& v) { s.oracle.p = to_double(v); }}},
      {"oracle.corruption", {"zero_vector | negated_gradient | random_huge | scaled_noise",
                             [](auto& s, auto& v) {
                               try {
                                 s.oracle.corruption = corruption_mode_from_string(v);
                               } catch (const InvalidArgument& e) {
                                 throw ConfigError(e.what());
                               }
                             }}},
      {"oracle.kappa", {"line-search accuracy constant", [](auto& s, auto& v) { s.oracle.kappa = to_double(v); }}},
      {"oracle.kappa_g", {"ARC / fully-linear gradient accuracy constant", [](auto& s, auto& v) { s.oracle.kappa_g = to_double(v); }}},
      {"oracle.kappa_h", {"ARC / fully-quadratic Hessian accuracy constant", [](auto& s, auto& v) { s.oracle.kappa_h = to_double(v); }}},
      {"oracle.eta", {"fraction of the admissible error radius used on accurate draws", [](auto& s, auto& v) { s.oracle.eta = to_double(v); }}},
      {"oracle.seed", {"mixed into mc.master_seed", [](auto& s, auto& v) { s.oracle.seed = to_uint(v); }}},
      {"oracle.kind", {"synthetic | subsampled | exact | finite_difference",
                       [](auto& s, auto& v) { s.oracle_kind = oracle_kind_from_string(v); }}},
      {"grid.p", {"accuracy probabilities, each in (1/2, 1]", [](auto& s, auto& v) { s.p_grid = to_list(v); }}},
      {"grid.eps", {"tolerances", [](auto& s, auto& v) { s.eps_grid = to_list(v); }}},
      {"mc.replications", {"replications per cell (default 200)", [](auto& s, auto& v) { s.replications = to_uint(v); }}},
      {"mc.master_seed", {"master seed", [](auto& s, auto& v) { s.master_seed = to_uint(v); }}},
      {"mc.threads", {"worker threads (0: all cores)", [](auto& s, auto& v) { s.threads = static_cast<unsigned>(to_uint(v)); }}},
      {"run.replication", {"replication index used by `run`", [](auto& s, auto& v) { s.replication = to_uint(v); }}},
  };
  return t;
}

}  // namespace

const std::vector<std::pair<std::string, std::string>>& config_keys() {
  static const auto keys = [] {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [k, info] : table()) out.emplace_back(k, info.doc);
    return out;
  }();
  return keys;
}

ExperimentSpec parse_config(std::istream& in) {
  ExperimentSpec spec;
  std::set<std::string> seen;
  bool has_grid_p = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto where = [&] { return "line " + std::to_string(lineno) + ": "; };
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where() + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = table().find(key);
    if (it == table().end()) throw ConfigError(where() + "unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(where() + "repeated key '" + key + "'");
    if (value.empty()) throw ConfigError(where() + "empty value for '" + key + "'");
    try {
      it->second.set(spec, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where() + key + ": " + e.what());
    }
    if (key == "grid.p") has_grid_p = true;
  }
  if (!has_grid_p) spec.p_grid = {spec.oracle.p};
  spec.oracle.p = spec.p_grid.front();
  spec.validate();
  return spec;
}

ExperimentSpec parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ExperimentSpec load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace randopt
