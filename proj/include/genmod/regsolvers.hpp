#pragma once

#include <cstdint>
#include <vector>

#include "genmod/types.hpp"

namespace genmod {

/// Thrown on numerical degeneracy (rank-deficient systems and the like).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Optional instrumentation for a single lasso solve.
struct LassoDiagnostics {
  int sweeps = 0;
  double kkt_violation = 0.0;
  std::vector<double> objective_trace;  // objective after each full sweep
};

/// Lasso by cyclic coordinate descent with soft thresholding:
///
///   min_w  1/(2N) ||Phi w - u||_2^2 + lambda ||w||_1
///
/// Runs sweeps until the KKT stationarity conditions hold within `tol`
/// (|phi_j^T r| / N <= lambda + tol on the zero set, phi_j^T r / N =
/// lambda sign(w_j) +- tol elsewhere). After the first converged pass the
/// solver iterates on the active set only, re-checking the full KKT system
/// before accepting. Throws ConvergenceError with the worst violation if
/// `max_sweeps` full sweeps do not reach the tolerance.
Vector lasso(const Matrix& Phi, const Vector& u, double lambda, double tol = 1e-9,
             int max_sweeps = 100000, const Vector* warm_start = nullptr,
             LassoDiagnostics* diag = nullptr);

/// Geometric grid of `count` values from lambda_max = ||Phi^T u||_inf / N
/// down to ratio * lambda_max. Throws std::invalid_argument when
/// lambda_max == 0 (degenerate input: u is zero or orthogonal to every
/// column).
Vector lambda_grid(const Matrix& Phi, const Vector& u, int count = 100,
                   double ratio = 1e-3);

/// Deterministic shuffled k-fold partition of 0..n-1. Fold sizes differ by
/// at most one. Throws ConfigError when a fold would be empty (k > n or
/// k < 2... k < 1).
std::vector<std::vector<int>> make_folds(int n, int k, std::uint64_t fold_seed);

struct LassoPathResult {
  Vector lambda_grid;       // descending
  Vector cv_mean_error;     // mean held-out squared reconstruction error
  Vector cv_stderr;         // (1/sqrt(N)) * population std of fold errors
  double chosen_lambda = 0.0;
  int chosen_index = 0;
  int min_index = 0;        // index of the error-minimizing lambda
  Vector solution;          // final fit on all data at chosen_lambda
};

/// k-fold cross-validated lasso with the one-standard-error rule:
/// for each lambda, fits on all-but-one fold and records the held-out
/// squared error; at the minimizing index L, s_L = (1/sqrt(N)) * std of the
/// k fold errors, and the chosen lambda is the largest one whose mean error
/// is strictly below e_L + s_L (falling back to lambda_L itself when the
/// band is empty, which happens only when s_L == 0). The final solution is
/// refit on the full data at the chosen lambda.
LassoPathResult lasso_cv_stderr(const Matrix& Phi, const Vector& u, const Vector& grid,
                                int folds = 5, std::uint64_t fold_seed = 0,
                                double tol = 1e-9, int max_sweeps = 100000);

struct IrwLassoOptions {
  double tau0 = 1e-4;
  double tau_max = 1e-1;
  int max_iter = 10;       // inner iterations before escalating tau
  double conv_tol = 1e-6;
  int folds = 5;
  std::uint64_t fold_seed = 0;
  int lambda_count = 100;
  double lambda_ratio = 1e-3;
  double lasso_tol = 1e-9;
  int lasso_max_sweeps = 100000;
};

struct IrwLassoResult {
  Vector coefficients;
  Vector first_iterate;    // the unweighted cross-validated solution
  bool converged = false;
  double tau_final = 0.0;
  int iterations = 0;      // reweighted solves performed
};

/// Iteratively reweighted Lasso. Weights W_ii = 1/(|c_i| + tau) from the
/// previous iterate; each subproblem solves the weighted Lasso through
/// lasso_cv_stderr on Psi W^{-1} (with its own data-driven lambda grid) and
/// unscales. Stops when consecutive iterates move less than conv_tol; after
/// max_iter stagnant iterations tau is multiplied by 10 and the inner loop
/// restarts, up to tau_max, beyond which the last iterate is returned
/// flagged as non-converged.
IrwLassoResult irw_lasso(const Matrix& Psi, const Vector& u,
                         const IrwLassoOptions& opts = {});

struct OmpResult {
  std::vector<int> support;  // in selection order
  Vector coefficients;       // zero off-support
  double residual_norm = 0.0;
};

/// Orthogonal matching pursuit: greedily selects the column with the largest
/// absolute residual correlation and refits by least squares on the support.
/// Stops early once the residual is (numerically) zero. Throws NumericalError
/// if the support matrix becomes rank deficient.
OmpResult omp(const Matrix& Psi, const Vector& u, int n_atoms);

struct OmpCvResult {
  OmpResult fit;           // refit on all data at the chosen atom count
  int chosen_atoms = 0;
  Vector cv_mean_error;    // mean held-out squared error per atom count
};

/// Cross-validated OMP: sweeps atom counts 1..max_atoms, picks the count with
/// the smallest mean held-out squared error, then refits on all data.
/// max_atoms <= 0 selects the default min(smallest training-fold size, P,
/// floor(10 sqrt(N))).
OmpCvResult omp_cv(const Matrix& Psi, const Vector& u, int folds = 5,
                   std::uint64_t fold_seed = 0, int max_atoms = 0);

/// Dense least squares via column-pivoted QR. Requires N >= P; throws
/// NumericalError naming the offending pivot column on rank deficiency.
Vector least_squares(const Matrix& Psi, const Vector& u);

}  // namespace genmod
