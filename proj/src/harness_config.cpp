#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "genmod/harness.hpp"
#include "genmod/multiindex.hpp"

namespace genmod {

using nlohmann::json;

std::string method_name(Method m) {
  switch (m) {
    case Method::kGenMod: return "genmod";
    case Method::kGenModNoSparse: return "genmod-nosparse";
    case Method::kOmp: return "omp";
    case Method::kIrwLasso: return "irw-lasso";
  }
  throw std::logic_error("method_name: unhandled method");
}

Method method_from_name(const std::string& name) {
  if (name == "genmod") return Method::kGenMod;
  if (name == "genmod-nosparse") return Method::kGenModNoSparse;
  if (name == "omp") return Method::kOmp;
  if (name == "irw-lasso") return Method::kIrwLasso;
  throw ConfigError("unknown method '" + name +
                    "' (expected genmod, genmod-nosparse, omp, or irw-lasso)");
}

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key()))
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

template <typename T>
void read_if(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

SolverOptions parse_solver(const json& obj) {
  check_keys(obj,
             {"adam_rate", "max_adam_iterations", "adam_delta_tol", "max_outer_iterations",
              "weight_eps", "cv_folds", "lambda_count", "lambda_ratio", "lasso_tol",
              "lasso_max_sweeps", "omp_max_atoms", "irw_tau0", "irw_tau_max",
              "irw_max_iter", "irw_conv_tol"},
             "solver");
  SolverOptions s;
  read_if(obj, "adam_rate", s.adam_rate);
  read_if(obj, "max_adam_iterations", s.max_adam_iterations);
  read_if(obj, "adam_delta_tol", s.adam_delta_tol);
  read_if(obj, "max_outer_iterations", s.max_outer_iterations);
  read_if(obj, "weight_eps", s.weight_eps);
  read_if(obj, "cv_folds", s.cv_folds);
  read_if(obj, "lambda_count", s.lambda_count);
  read_if(obj, "lambda_ratio", s.lambda_ratio);
  read_if(obj, "lasso_tol", s.lasso_tol);
  read_if(obj, "lasso_max_sweeps", s.lasso_max_sweeps);
  read_if(obj, "omp_max_atoms", s.omp_max_atoms);
  read_if(obj, "irw_tau0", s.irw_tau0);
  read_if(obj, "irw_tau_max", s.irw_tau_max);
  read_if(obj, "irw_max_iter", s.irw_max_iter);
  read_if(obj, "irw_conv_tol", s.irw_conv_tol);
  return s;
}

void validate(const ExperimentConfig& c) {
  if (c.d < 1) throw ConfigError("d must be >= 1");
  if (c.p < 0) throw ConfigError("p must be >= 0");
  if (c.sample_sizes.empty()) throw ConfigError("N must list at least one sample size");
  for (int n : c.sample_sizes)
    if (n < 5) throw ConfigError("every N must be >= 5 (got " + std::to_string(n) + ")");
  if (!(c.va_fraction > 0.0 && c.va_fraction < 1.0))
    throw ConfigError("va_fraction must lie strictly between 0 and 1");
  if (c.n_test < 1) throw ConfigError("N_te must be >= 1");
  if (c.replication_count < 1) throw ConfigError("replication_count must be >= 1");
  if (c.methods.empty()) throw ConfigError("methods must not be empty");
  if (c.generator != "elliptic1d" && c.generator != "synthetic")
    throw ConfigError("generator.type must be 'elliptic1d' or 'synthetic'");
  const std::int64_t P = basis_cardinality(c.d, c.p);
  if (c.n_reference != 0 && c.generator == "elliptic1d" && c.n_reference < P)
    throw ConfigError("N_ls must be 0 or at least P = " + std::to_string(P));
  if (!c.synthetic.z_star.empty() &&
      static_cast<int>(c.synthetic.z_star.size()) != 2 * c.d + 1)
    throw ConfigError("generator.z_star must have length 2d+1 = " +
                      std::to_string(2 * c.d + 1));
  if (c.synthetic.spike_count < 0 || c.synthetic.spike_count > P)
    throw ConfigError("generator.spike_count must lie in [0, P]");
  if (c.generator == "elliptic1d") {
    if (c.elliptic.element_count < 2 || c.elliptic.element_count % 2 != 0)
      throw ConfigError("generator.element_count must be even and >= 2");
    if (!(c.elliptic.correlation_length > 0.0))
      throw ConfigError("generator.L must be positive");
    if (c.elliptic.kl_quadrature < 4 * c.d)
      throw ConfigError("generator.kl_quadrature must be >= 4*d");
  }
  if (c.solver.cv_folds < 2) throw ConfigError("solver.cv_folds must be >= 2");
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(root,
             {"generator", "d", "p", "N", "va_fraction", "N_te", "N_ls", "methods",
              "replication_count", "master_seed", "solver"},
             "config");
  ExperimentConfig c;
  try {
    if (root.contains("generator")) {
      const json& g = root.at("generator");
      c.generator = g.value("type", std::string("elliptic1d"));
      if (c.generator == "elliptic1d") {
        check_keys(g, {"type", "L", "a_bar", "sigma", "element_count", "kl_quadrature"},
                   "generator");
        read_if(g, "L", c.elliptic.correlation_length);
        read_if(g, "a_bar", c.elliptic.a_bar);
        read_if(g, "sigma", c.elliptic.sigma);
        read_if(g, "element_count", c.elliptic.element_count);
        read_if(g, "kl_quadrature", c.elliptic.kl_quadrature);
      } else {
        check_keys(g, {"type", "z_star", "spike_count", "spike_min", "spike_max",
                       "noise_level"},
                   "generator");
        read_if(g, "z_star", c.synthetic.z_star);
        read_if(g, "spike_count", c.synthetic.spike_count);
        read_if(g, "spike_min", c.synthetic.spike_min);
        read_if(g, "spike_max", c.synthetic.spike_max);
        read_if(g, "noise_level", c.synthetic.noise_level);
      }
    }
    read_if(root, "d", c.d);
    read_if(root, "p", c.p);
    if (root.contains("N")) {
      const json& n = root.at("N");
      c.sample_sizes.clear();
      if (n.is_array())
        for (const auto& v : n) c.sample_sizes.push_back(v.get<int>());
      else
        c.sample_sizes.push_back(n.get<int>());
    }
    read_if(root, "va_fraction", c.va_fraction);
    read_if(root, "N_te", c.n_test);
    read_if(root, "N_ls", c.n_reference);
    if (root.contains("methods")) {
      c.methods.clear();
      for (const auto& m : root.at("methods"))
        c.methods.push_back(method_from_name(m.get<std::string>()));
    }
    read_if(root, "master_seed", c.master_seed);
    read_if(root, "replication_count", c.replication_count);
    if (root.contains("solver")) c.solver = parse_solver(root.at("solver"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config value: ") + e.what());
  }
  validate(c);
  return c;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string config_to_json(const ExperimentConfig& c) {
  json g;
  g["type"] = c.generator;
  if (c.generator == "elliptic1d") {
    g["L"] = c.elliptic.correlation_length;
    g["a_bar"] = c.elliptic.a_bar;
    g["sigma"] = c.elliptic.sigma;
    g["element_count"] = c.elliptic.element_count;
    g["kl_quadrature"] = c.elliptic.kl_quadrature;
  } else {
    if (!c.synthetic.z_star.empty()) g["z_star"] = c.synthetic.z_star;
    g["spike_count"] = c.synthetic.spike_count;
    g["spike_min"] = c.synthetic.spike_min;
    g["spike_max"] = c.synthetic.spike_max;
    g["noise_level"] = c.synthetic.noise_level;
  }
  json s;
  s["adam_rate"] = c.solver.adam_rate;
  s["max_adam_iterations"] = c.solver.max_adam_iterations;
  s["adam_delta_tol"] = c.solver.adam_delta_tol;
  s["max_outer_iterations"] = c.solver.max_outer_iterations;
  s["weight_eps"] = c.solver.weight_eps;
  s["cv_folds"] = c.solver.cv_folds;
  s["lambda_count"] = c.solver.lambda_count;
  s["lambda_ratio"] = c.solver.lambda_ratio;
  s["lasso_tol"] = c.solver.lasso_tol;
  s["lasso_max_sweeps"] = c.solver.lasso_max_sweeps;
  s["omp_max_atoms"] = c.solver.omp_max_atoms;
  s["irw_tau0"] = c.solver.irw_tau0;
  s["irw_tau_max"] = c.solver.irw_tau_max;
  s["irw_max_iter"] = c.solver.irw_max_iter;
  s["irw_conv_tol"] = c.solver.irw_conv_tol;

  json root;
  root["generator"] = g;
  root["d"] = c.d;
  root["p"] = c.p;
  root["N"] = c.sample_sizes;
  root["va_fraction"] = c.va_fraction;
  root["N_te"] = c.n_test;
  root["N_ls"] = c.n_reference;
  json methods = json::array();
  for (Method m : c.methods) methods.push_back(method_name(m));
  root["methods"] = methods;
  root["replication_count"] = c.replication_count;
  root["master_seed"] = c.master_seed;
  root["solver"] = s;
  return root.dump(2);
}

}  // namespace genmod
