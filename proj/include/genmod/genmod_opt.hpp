#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "genmod/genmodel.hpp"
#include "genmod/measurement.hpp"
#include "genmod/types.hpp"

namespace genmod {

/// Adam optimizer state. `t` is the number of steps already taken; the next
/// step uses t+1 for bias correction.
struct AdamState {
  Vector m;
  Vector v;
  long t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_adam = 1e-8;
  double alpha_lr = 1e-2;

  static AdamState zero(int dim, double lr = 1e-2) {
    AdamState s;
    s.m = Vector::Zero(dim);
    s.v = Vector::Zero(dim);
    s.alpha_lr = lr;
    return s;
  }
};

/// One Adam update. Element-wise moment updates with bias correction:
///   m <- b1 m + (1-b1) g,  v <- b2 v + (1-b2) g^2,
///   z <- z - lr * m_hat / (sqrt(v_hat) + eps).
/// Throws ConvergenceError when the gradient has non-finite entries.
std::pair<Vector, AdamState> adam_step(const Vector& z, const Vector& grad,
                                       const AdamState& state);

struct AdamOptions {
  double learning_rate = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  int max_iterations = 5000;
  double delta_tol = 1e-6;  // |relative loss change| break threshold
};

/// Adam descent on z at fixed (nu, zeta). After every step the g block
/// (latent indices 1..d) is clipped at zero so the magnitude profile keeps
/// its exponential decay. Breaks when the relative loss change drops below
/// delta_tol in magnitude, or when the loss reaches exactly zero. Returns
/// every iterate, starting with z_init.
std::vector<Vector> run_adam(const GenModel& model, const Vector& z_init,
                             const Vector& nu, const Vector& zeta, const Matrix& Psi_op,
                             const Vector& u_op, const AdamOptions& opts = {});

/// Initial coefficient-sign prediction: cross-validated OMP, with zero
/// entries filled from the sign of the residual correlation (exact-zero
/// correlations resolve to +1).
Vector predict_signs(const Matrix& Psi, const Vector& u, int folds = 5,
                     std::uint64_t fold_seed = 0);

struct GenModFitConfig {
  int max_outer_iterations = 20;
  AdamOptions adam;
  double weight_eps = 1e-4;
  WeightForm weight_form = WeightForm::kScaledEps;
  bool sparse_deviations = true;  // false reproduces the no-sparse variant
  int cv_folds = 5;
  std::uint64_t fold_seed = 0;
  int lambda_count = 100;
  double lambda_ratio = 1e-3;
  double lasso_tol = 1e-9;
  int lasso_max_sweeps = 100000;
};

struct GenModFitReport {
  GenModelState state;
  int outer_iterations = 0;
  std::vector<double> validation_loss_trace;  // initial value, then one per outer iteration
  int sign_flip_count = 0;
  std::vector<double> chosen_lambdas;  // one per sparse update performed
};

/// The full alternating fit.
///
/// Starts from z = (log|mean u|, 1, ..., 1) and nu = 0 with signs from
/// predict_signs on the combined data. Each outer iteration runs Adam on the
/// optimization split, picks the iterate with the smallest validation loss,
/// then updates nu by solving the weighted Lasso on the combined data with
/// design Psi W^{-1} and target u - Psi D_zeta G(z), unscaling the solution.
/// Stops as soon as an iteration fails to improve the validation loss and
/// returns the previous (best) state.
///
/// When mean(u) is exactly zero, logC falls back to log(RMS(u)); an
/// all-zero u is rejected as degenerate (std::invalid_argument).
GenModFitReport genmod_fit(const MeasurementMatrix& Psi_op, const Vector& u_op,
                           const MeasurementMatrix& Psi_va, const Vector& u_va,
                           const GenModFitConfig& config = {});

/// c_i = zeta_i G_i(z) + nu_i.
Vector assemble_coefficients(const GenModelState& state, const MultiIndexBasis& basis);

/// Count of entries where the sparse deviation flipped the predicted sign:
/// |{i : nu_i != 0 and sign(zeta_i G_i + nu_i) != zeta_i}|.
int count_sign_flips(const GenModelState& state, const MultiIndexBasis& basis);

}  // namespace genmod
