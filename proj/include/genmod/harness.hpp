#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "genmod/dataset.hpp"
#include "genmod/multiindex.hpp"
#include "genmod/types.hpp"

namespace genmod {

enum class Method { kGenMod, kGenModNoSparse, kOmp, kIrwLasso };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct Elliptic1dParams {
  double correlation_length = 0.2;
  double a_bar = 0.1;
  double sigma = 0.03;
  int element_count = 64;
  int kl_quadrature = 200;
};

struct SyntheticParams {
  std::vector<double> z_star;  // empty: drawn per replication
  int spike_count = 5;
  double spike_min = 0.2;
  double spike_max = 0.6;
  double noise_level = 0.0;
};

struct SolverOptions {
  double adam_rate = 1e-2;
  int max_adam_iterations = 5000;
  double adam_delta_tol = 1e-6;
  int max_outer_iterations = 20;
  double weight_eps = 1e-4;
  int cv_folds = 5;
  int lambda_count = 100;
  double lambda_ratio = 1e-3;
  double lasso_tol = 1e-9;
  int lasso_max_sweeps = 100000;
  int omp_max_atoms = 0;  // 0 = automatic cap
  double irw_tau0 = 1e-4;
  double irw_tau_max = 1e-1;
  int irw_max_iter = 10;
  double irw_conv_tol = 1e-6;
};

/// One benchmark description; mirrors the JSON config document field for
/// field. parse_config rejects unknown keys at every level.
struct ExperimentConfig {
  std::string generator = "elliptic1d";  // "elliptic1d" or "synthetic"
  Elliptic1dParams elliptic;
  SyntheticParams synthetic;
  int d = 14;
  int p = 3;
  std::vector<int> sample_sizes = {40};  // the "N" field; scalar or list
  double va_fraction = 0.2;
  int n_test = 1000;       // N_te
  int n_reference = 5000;  // N_ls; 0 disables the least-squares reference
  std::vector<Method> methods = {Method::kGenMod, Method::kOmp, Method::kIrwLasso};
  int replication_count = 10;
  std::uint64_t master_seed = 0;
  SolverOptions solver;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig parse_config_file(const std::string& path);
std::string config_to_json(const ExperimentConfig& config);

/// Seeded random partition into optimization and validation index sets.
/// N_va = floor(N * va_fraction) and must be at least 1; N >= 5.
std::pair<std::vector<int>, std::vector<int>> split_indices(int n, double va_fraction,
                                                            std::uint64_t seed);
std::pair<Dataset, Dataset> split_dataset(const Dataset& ds, double va_fraction,
                                          std::uint64_t seed);

/// ||c_hat - c_ref|| / ||c_ref||. Throws std::invalid_argument on length
/// mismatch or a zero reference.
double coefficient_error(const Vector& c_hat, const Vector& c_ref);

/// ||Psi_te c_hat - u_te|| / ||u_te||. Throws std::invalid_argument when the
/// test observations are identically zero.
double reconstruction_error(const Vector& c_hat, const Matrix& Psi_te, const Vector& u_te);

/// (err_method - err_genmod) / err_method * 100.
double improvement_percent(double err_method, double err_genmod);

struct PlantedDataset {
  Dataset data;
  Vector true_coefficients;
};

/// Draws a dataset whose QoI comes from a known coefficient vector
/// c* = D_zeta* G(z*) + nu*, with nu* supported on spike_count uniformly
/// chosen indices and magnitudes in [spike_min, spike_max] with random signs.
PlantedDataset synthetic_planted_dataset(const MultiIndexBasis& basis, const Vector& z_star,
                                         const Vector& zeta_star, int spike_count,
                                         double spike_min, double spike_max, int N,
                                         double noise_level, std::uint64_t seed);

struct MethodOutcome {
  Method method = Method::kGenMod;
  double eps_c = std::numeric_limits<double>::quiet_NaN();
  double eps_u = std::numeric_limits<double>::quiet_NaN();
  double wall_ms = 0.0;
  int outer_iterations = -1;  // GenMod variants only
  int sign_flips = -1;        // GenMod variants only
  std::string status = "ok";
  Vector coefficients;  // kept so the errors are recomputable
};

struct ReplicationRecord {
  int replication = 0;
  int n_train = 0;
  std::vector<MethodOutcome> outcomes;
};

/// Runs every configured method on one replication's shared training data.
/// Method failures are recorded in the outcome status, not thrown.
ReplicationRecord run_replication(const ExperimentConfig& config, int n_train,
                                  int replication_index);
/// Convenience overload using the first configured sample size.
ReplicationRecord run_replication(const ExperimentConfig& config, int replication_index);

struct BenchmarkResult {
  std::vector<ReplicationRecord> records;  // sorted by (N, replication)
};

/// Full sweep over sample sizes and replications. Replications may execute
/// on `threads` workers; results are deterministic regardless of the degree
/// of parallelism because every replication derives its own seeds.
BenchmarkResult run_benchmark(const ExperimentConfig& config, int threads = 1);

/// CSV with the fixed column set
/// replication,method,N,eps_c,eps_u,wall_ms,outer_iters,sign_flips,status.
std::string benchmark_csv(const BenchmarkResult& result);

/// Per-(N, method) min/median/max summary as JSON.
std::string benchmark_summary_json(const BenchmarkResult& result,
                                   const ExperimentConfig& config);

/// Hand-written scatter + range SVG of eps_u over N per method.
std::string benchmark_svg(const BenchmarkResult& result);

bool benchmark_has_failures(const BenchmarkResult& result);

struct JlRow {
  int n = 0;
  int trials = 0;
  double mean_norm2 = 0.0;    // mean of ||Phi x||^2 over unit x
  double stderr_norm2 = 0.0;  // standard error of that mean
  std::vector<double> deviations;  // | ||Phi x||^2 - 1 | per trial

  double exceedance(double eps) const;
};

struct JlResult {
  static constexpr std::array<double, 4> kEpsilons = {0.1, 0.25, 0.5, 1.0};
  int d = 0;
  int p = 0;
  std::vector<JlRow> rows;
};

/// Empirical concentration experiment for Phi = (1/sqrt(N)) Psi D_xi: draws
/// fresh samples, a Rademacher sign vector and a random unit x per trial and
/// tabulates how often | ||Phi x||^2 - ||x||^2 | exceeds each threshold.
JlResult jl_concentration_experiment(int d, int p, const std::vector<int>& n_list,
                                     int trial_count, std::uint64_t seed);

std::string jl_csv(const JlResult& result);

}  // namespace genmod
