#include "genmod/genmod_opt.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "genmod/regsolvers.hpp"
#include "genmod/rng.hpp"

namespace genmod {

std::pair<Vector, AdamState> adam_step(const Vector& z, const Vector& grad,
                                       const AdamState& state) {
  if (grad.size() != z.size() || state.m.size() != z.size() || state.v.size() != z.size())
    throw std::invalid_argument("adam_step: dimension mismatch");
  if (!grad.allFinite())
    throw ConvergenceError("adam_step: non-finite gradient at step " +
                           std::to_string(state.t + 1) + "; optimization diverged");
  AdamState next = state;
  next.t = state.t + 1;
  next.m = state.beta1 * state.m + (1.0 - state.beta1) * grad;
  next.v = state.beta2 * state.v + (1.0 - state.beta2) * grad.cwiseProduct(grad);
  const double m_corr = 1.0 - std::pow(state.beta1, static_cast<double>(next.t));
  const double v_corr = 1.0 - std::pow(state.beta2, static_cast<double>(next.t));
  const Vector m_hat = next.m / m_corr;
  const Vector v_hat = next.v / v_corr;
  const Vector z_next =
      z - state.alpha_lr * (m_hat.array() / (v_hat.array().sqrt() + state.eps_adam)).matrix();
  return {z_next, next};
}

std::vector<Vector> run_adam(const GenModel& model, const Vector& z_init,
                             const Vector& nu, const Vector& zeta, const Matrix& Psi_op,
                             const Vector& u_op, const AdamOptions& opts) {
  const int d = model.basis().dim();
  std::vector<Vector> iterates;
  iterates.reserve(static_cast<size_t>(opts.max_iterations) + 1);
  iterates.push_back(z_init);

  double prev_loss = model.loss(z_init, nu, zeta, Psi_op, u_op);
  if (!std::isfinite(prev_loss))
    throw ConvergenceError("run_adam: loss at the initial point is not finite");
  if (prev_loss == 0.0) return iterates;

  AdamState state = AdamState::zero(static_cast<int>(z_init.size()), opts.learning_rate);
  state.beta1 = opts.beta1;
  state.beta2 = opts.beta2;
  state.eps_adam = opts.eps;

  Vector z = z_init;
  for (int t = 1; t <= opts.max_iterations; ++t) {
    const Vector grad = model.loss_grad_z(z, nu, zeta, Psi_op, u_op);
    auto [z_next, next_state] = adam_step(z, grad, state);
    state = next_state;
    // Clip the g block so the exponential factors stay decaying.
    for (int i = 1; i <= d; ++i)
      if (z_next[i] < 0.0) z_next[i] = 0.0;
    z = z_next;
    iterates.push_back(z);
    const double cur_loss = model.loss(z, nu, zeta, Psi_op, u_op);
    if (!std::isfinite(cur_loss))
      throw ConvergenceError("run_adam: loss became non-finite at iteration " +
                             std::to_string(t));
    if (cur_loss == 0.0) break;
    if (std::abs(cur_loss - prev_loss) / prev_loss < opts.delta_tol) break;
    prev_loss = cur_loss;
  }
  return iterates;
}

Vector predict_signs(const Matrix& Psi, const Vector& u, int folds,
                     std::uint64_t fold_seed) {
  const auto cv = omp_cv(Psi, u, folds, fold_seed);
  const Vector& c = cv.fit.coefficients;
  const Vector residual_corr = Psi.transpose() * (u - Psi * c);
  Vector zeta(c.size());
  for (int i = 0; i < c.size(); ++i) {
    const double basis_for_sign = (c[i] != 0.0) ? c[i] : residual_corr[i];
    zeta[i] = (basis_for_sign < 0.0) ? -1.0 : 1.0;  // exact zero resolves to +1
  }
  return zeta;
}

GenModFitReport genmod_fit(const MeasurementMatrix& Psi_op, const Vector& u_op,
                           const MeasurementMatrix& Psi_va, const Vector& u_va,
                           const GenModFitConfig& config) {
  if (Psi_op.basis == nullptr || Psi_va.basis == nullptr)
    throw std::invalid_argument("genmod_fit: measurement matrices need a basis");
  if (Psi_op.values.cols() != Psi_va.values.cols())
    throw std::invalid_argument("genmod_fit: column count mismatch between splits");
  if (Psi_op.values.rows() < 1 || Psi_va.values.rows() < 1)
    throw std::invalid_argument("genmod_fit: both splits must be non-empty");

  const MultiIndexBasis& basis = *Psi_op.basis;
  const GenModel model(basis);
  const int P = basis.size();
  const int d = basis.dim();
  const int n_op = static_cast<int>(Psi_op.values.rows());
  const int n_va = static_cast<int>(Psi_va.values.rows());

  // OMP and Lasso work on the combined data.
  Matrix Psi(n_op + n_va, P);
  Psi.topRows(n_op) = Psi_op.values;
  Psi.bottomRows(n_va) = Psi_va.values;
  Vector u(n_op + n_va);
  u.head(n_op) = u_op;
  u.tail(n_va) = u_va;

  const Vector zeta =
      predict_signs(Psi, u, config.cv_folds, derive_seed(config.fold_seed, 0, stream::kSigns));

  const double mean_u = u.mean();
  double log_c0;
  if (mean_u != 0.0) {
    log_c0 = std::log(std::abs(mean_u));
  } else {
    const double rms = std::sqrt(u.squaredNorm() / u.size());
    if (rms == 0.0)
      throw std::invalid_argument(
          "genmod_fit: observations are identically zero; nothing to fit");
    log_c0 = std::log(rms);
  }
  Vector z = Vector::Ones(2 * d + 1);
  z[0] = log_c0;
  Vector nu = Vector::Zero(P);

  GenModFitReport report;
  report.state = GenModelState{z, zeta, nu};
  double best_val = model.loss(z, nu, zeta, Psi_va.values, u_va);
  report.validation_loss_trace.push_back(best_val);

  for (int k = 1; k <= config.max_outer_iterations; ++k) {
    const auto iterates = run_adam(model, z, nu, zeta, Psi_op.values, u_op, config.adam);
    int best_idx = 0;
    double best_iter_val = model.loss(iterates[0], nu, zeta, Psi_va.values, u_va);
    for (size_t i = 1; i < iterates.size(); ++i) {
      const double val = model.loss(iterates[i], nu, zeta, Psi_va.values, u_va);
      if (val < best_iter_val) {
        best_iter_val = val;
        best_idx = static_cast<int>(i);
      }
    }
    const Vector z_k = iterates[best_idx];

    Vector nu_k = nu;
    if (config.sparse_deviations) {
      const Vector w = model.weight_matrix(z_k, config.weight_eps, config.weight_form);
      const Vector inv_w = w.cwiseInverse();
      const Matrix design = Psi * inv_w.asDiagonal();
      const Vector target = u - Psi * zeta.cwiseProduct(model.eval(z_k));
      const double lambda_max =
          (design.transpose() * target).cwiseAbs().maxCoeff() / design.rows();
      if (lambda_max == 0.0) {
        nu_k = Vector::Zero(P);  // zero residual: lasso keeps nu at zero
        report.chosen_lambdas.push_back(0.0);
      } else {
        const Vector grid = lambda_grid(design, target, config.lambda_count,
                                        config.lambda_ratio);
        const auto path = lasso_cv_stderr(design, target, grid, config.cv_folds,
                                          derive_seed(config.fold_seed, k, stream::kFolds),
                                          config.lasso_tol, config.lasso_max_sweeps);
        nu_k = inv_w.cwiseProduct(path.solution);
        report.chosen_lambdas.push_back(path.chosen_lambda);
      }
    }

    const double val = model.loss(z_k, nu_k, zeta, Psi_va.values, u_va);
    report.validation_loss_trace.push_back(val);
    report.outer_iterations = k;
    if (val > best_val) break;  // no improvement: keep the previous state
    report.state = GenModelState{z_k, zeta, nu_k};
    best_val = val;
    z = z_k;
    nu = nu_k;
    if (!config.sparse_deviations) break;  // no-sparse variant runs one iteration
  }

  report.sign_flip_count = count_sign_flips(report.state, basis);
  return report;
}

Vector assemble_coefficients(const GenModelState& state, const MultiIndexBasis& basis) {
  return state.zeta.cwiseProduct(GenModel(basis).eval(state.z)) + state.nu;
}

int count_sign_flips(const GenModelState& state, const MultiIndexBasis& basis) {
  const Vector c = assemble_coefficients(state, basis);
  int flips = 0;
  for (int i = 0; i < c.size(); ++i) {
    if (state.nu[i] == 0.0) continue;
    const double sign_c = (c[i] > 0.0) ? 1.0 : (c[i] < 0.0 ? -1.0 : 0.0);
    if (sign_c != state.zeta[i]) ++flips;
  }
  return flips;
}

}  // namespace genmod
