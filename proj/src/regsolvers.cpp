#include "genmod/regsolvers.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "genmod/rng.hpp"

namespace genmod {

namespace {

double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

double lasso_objective(const Matrix& Phi, const Vector& u, const Vector& w, double lambda) {
  const double n = static_cast<double>(Phi.rows());
  return (Phi * w - u).squaredNorm() / (2.0 * n) + lambda * w.lpNorm<1>();
}

// Max KKT stationarity violation at w given the residual r = u - Phi w.
double kkt_violation(const Matrix& Phi, const Vector& r, const Vector& w, double lambda) {
  const double n = static_cast<double>(Phi.rows());
  const Vector g = Phi.transpose() * r / n;
  double worst = 0.0;
  for (int j = 0; j < w.size(); ++j) {
    if (w[j] == 0.0)
      worst = std::max(worst, std::abs(g[j]) - lambda);
    else
      worst = std::max(worst, std::abs(g[j] - lambda * (w[j] > 0 ? 1.0 : -1.0)));
  }
  return worst;
}

}  // namespace

Vector lasso(const Matrix& Phi, const Vector& u, double lambda, double tol,
             int max_sweeps, const Vector* warm_start, LassoDiagnostics* diag) {
  if (lambda < 0.0) throw std::invalid_argument("lasso: lambda must be >= 0");
  if (Phi.rows() != u.size())
    throw std::invalid_argument("lasso: row count mismatch between Phi and u");
  const int n = static_cast<int>(Phi.rows());
  const int p = static_cast<int>(Phi.cols());
  const double n_d = static_cast<double>(n);

  Vector w = Vector::Zero(p);
  if (warm_start) {
    if (warm_start->size() != p)
      throw std::invalid_argument("lasso: warm start has wrong length");
    w = *warm_start;
  }
  Vector col_sq(p);  // ||phi_j||^2 / N
  for (int j = 0; j < p; ++j) col_sq[j] = Phi.col(j).squaredNorm() / n_d;
  Vector r = u - Phi * w;

  std::vector<int> active;
  active.reserve(p);

  auto sweep = [&](const std::vector<int>* subset) {
    const int count = subset ? static_cast<int>(subset->size()) : p;
    for (int idx = 0; idx < count; ++idx) {
      const int j = subset ? (*subset)[idx] : idx;
      if (col_sq[j] == 0.0) continue;
      const double rho = Phi.col(j).dot(r) / n_d + col_sq[j] * w[j];
      const double wj = soft_threshold(rho, lambda) / col_sq[j];
      if (wj != w[j]) {
        r += Phi.col(j) * (w[j] - wj);
        w[j] = wj;
      }
    }
  };

  int sweeps = 0;
  double violation = 0.0;
  while (sweeps < max_sweeps) {
    sweep(nullptr);
    ++sweeps;
    if (diag) diag->objective_trace.push_back(lasso_objective(Phi, u, w, lambda));
    violation = kkt_violation(Phi, r, w, lambda);
    if (violation <= tol) break;
    // Polish the current active set before the next full pass.
    active.clear();
    for (int j = 0; j < p; ++j)
      if (w[j] != 0.0) active.push_back(j);
    for (int inner = 0; inner < max_sweeps && !active.empty(); ++inner) {
      const Vector before = w;
      sweep(&active);
      double moved = 0.0;
      for (int j : active) moved = std::max(moved, std::abs(w[j] - before[j]));
      if (moved <= tol * 1e-2) break;
    }
  }
  if (violation > tol)
    throw ConvergenceError("lasso: KKT violation " + std::to_string(violation) +
                           " above tolerance " + std::to_string(tol) + " after " +
                           std::to_string(sweeps) + " sweeps (lambda=" +
                           std::to_string(lambda) + ")");
  if (diag) {
    diag->sweeps = sweeps;
    diag->kkt_violation = violation;
  }
  return w;
}

Vector lambda_grid(const Matrix& Phi, const Vector& u, int count, double ratio) {
  if (count < 1) throw std::invalid_argument("lambda_grid: count must be >= 1");
  if (!(ratio > 0.0 && ratio <= 1.0))
    throw std::invalid_argument("lambda_grid: ratio must be in (0, 1]");
  const double n = static_cast<double>(Phi.rows());
  const double lambda_max = (Phi.transpose() * u).cwiseAbs().maxCoeff() / n;
  if (lambda_max == 0.0)
    throw std::invalid_argument("lambda_grid: degenerate input, ||Phi^T u||_inf is zero");
  Vector grid(count);
  if (count == 1) {
    grid[0] = lambda_max;
    return grid;
  }
  for (int i = 0; i < count; ++i)
    grid[i] = lambda_max * std::pow(ratio, static_cast<double>(i) / (count - 1));
  return grid;
}

std::vector<std::vector<int>> make_folds(int n, int k, std::uint64_t fold_seed) {
  if (k < 1) throw ConfigError("make_folds: fold count must be >= 1");
  if (k > n)
    throw ConfigError("make_folds: " + std::to_string(k) + " folds over " +
                      std::to_string(n) + " samples leaves an empty hold-out");
  Rng rng(fold_seed);
  const std::vector<int> perm = rng.permutation(n);
  std::vector<std::vector<int>> folds(k);
  int pos = 0;
  for (int f = 0; f < k; ++f) {
    const int size = n / k + (f < n % k ? 1 : 0);
    folds[f].assign(perm.begin() + pos, perm.begin() + pos + size);
    pos += size;
  }
  return folds;
}

namespace {

Matrix take_rows(const Matrix& m, const std::vector<int>& rows) {
  Matrix out(rows.size(), m.cols());
  for (size_t i = 0; i < rows.size(); ++i) out.row(i) = m.row(rows[i]);
  return out;
}

Vector take_entries(const Vector& v, const std::vector<int>& rows) {
  Vector out(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) out[i] = v[rows[i]];
  return out;
}

}  // namespace

LassoPathResult lasso_cv_stderr(const Matrix& Phi, const Vector& u, const Vector& grid,
                                int folds, std::uint64_t fold_seed, double tol,
                                int max_sweeps) {
  const int n = static_cast<int>(Phi.rows());
  const int n_lambda = static_cast<int>(grid.size());
  if (n_lambda < 1) throw std::invalid_argument("lasso_cv_stderr: empty lambda grid");
  const auto fold_idx = make_folds(n, folds, fold_seed);

  Matrix errors(n_lambda, folds);  // e_{l,j}
  for (int j = 0; j < folds; ++j) {
    std::vector<int> train;
    train.reserve(n);
    for (int f = 0; f < folds; ++f)
      if (f != j) train.insert(train.end(), fold_idx[f].begin(), fold_idx[f].end());
    const Matrix Phi_tr = take_rows(Phi, train);
    const Vector u_tr = take_entries(u, train);
    const Matrix Phi_ho = take_rows(Phi, fold_idx[j]);
    const Vector u_ho = take_entries(u, fold_idx[j]);
    Vector w = Vector::Zero(Phi.cols());
    for (int l = 0; l < n_lambda; ++l) {
      w = lasso(Phi_tr, u_tr, grid[l], tol, max_sweeps, &w);
      errors(l, j) = (Phi_ho * w - u_ho).squaredNorm();
    }
  }

  LassoPathResult result;
  result.lambda_grid = grid;
  result.cv_mean_error = errors.rowwise().mean();
  result.cv_stderr.resize(n_lambda);
  for (int l = 0; l < n_lambda; ++l) {
    const double mean = result.cv_mean_error[l];
    double var = 0.0;
    for (int j = 0; j < folds; ++j) var += (errors(l, j) - mean) * (errors(l, j) - mean);
    var /= folds;  // population std over the k fold errors
    result.cv_stderr[l] = std::sqrt(var) / std::sqrt(static_cast<double>(n));
  }

  int min_index = 0;
  for (int l = 1; l < n_lambda; ++l)
    if (result.cv_mean_error[l] < result.cv_mean_error[min_index]) min_index = l;
  result.min_index = min_index;

  // Largest lambda strictly inside the one-standard-error band; the grid is
  // descending, so that is the smallest such index. When s_L = 0 the band is
  // empty and the minimizer itself is used.
  const double band = result.cv_mean_error[min_index] + result.cv_stderr[min_index];
  int chosen = min_index;
  for (int l = 0; l <= min_index; ++l) {
    if (result.cv_mean_error[l] < band) {
      chosen = l;
      break;
    }
  }
  result.chosen_index = chosen;
  result.chosen_lambda = grid[chosen];
  result.solution = lasso(Phi, u, result.chosen_lambda, tol, max_sweeps);
  return result;
}

IrwLassoResult irw_lasso(const Matrix& Psi, const Vector& u, const IrwLassoOptions& opts) {
  const int p = static_cast<int>(Psi.cols());
  IrwLassoResult result;

  const double n = static_cast<double>(Psi.rows());
  if ((Psi.transpose() * u).cwiseAbs().maxCoeff() / n == 0.0) {
    // Zero (or fully orthogonal) target: lasso is identically zero.
    result.coefficients = Vector::Zero(p);
    result.first_iterate = result.coefficients;
    result.converged = true;
    result.tau_final = opts.tau0;
    result.iterations = 1;
    return result;
  }

  auto solve_weighted = [&](const Vector& inv_weights) {
    const Matrix scaled = Psi * inv_weights.asDiagonal();
    const Vector grid = lambda_grid(scaled, u, opts.lambda_count, opts.lambda_ratio);
    const auto path = lasso_cv_stderr(scaled, u, grid, opts.folds, opts.fold_seed,
                                      opts.lasso_tol, opts.lasso_max_sweeps);
    return inv_weights.cwiseProduct(path.solution).eval();
  };

  Vector prev = solve_weighted(Vector::Ones(p));
  result.first_iterate = prev;
  double tau = opts.tau0;
  int stagnant = 1;
  int total = 1;
  Vector current = prev;
  while (true) {
    const Vector inv_weights = prev.cwiseAbs().array() + tau;  // W^{-1} diagonal
    current = solve_weighted(inv_weights);
    ++total;
    if ((current - prev).norm() < opts.conv_tol) {
      result.converged = true;
      break;
    }
    prev = current;
    if (stagnant >= opts.max_iter) {
      stagnant = 0;
      tau *= 10.0;
      if (tau > opts.tau_max) break;  // give up, return last iterate
    }
    ++stagnant;
  }
  result.coefficients = current;
  result.tau_final = tau;
  result.iterations = total;
  return result;
}

OmpResult omp(const Matrix& Psi, const Vector& u, int n_atoms) {
  const int n = static_cast<int>(Psi.rows());
  const int p = static_cast<int>(Psi.cols());
  if (n_atoms < 1 || n_atoms > std::min(n, p))
    throw std::invalid_argument("omp: n_atoms must be in [1, min(N, P)]");

  OmpResult result;
  result.coefficients = Vector::Zero(p);
  Vector r = u;
  const double u_norm = u.norm();
  Matrix support_cols(n, n_atoms);
  Vector fit;
  std::vector<char> selected(p, 0);
  for (int step = 0; step < n_atoms; ++step) {
    if (r.norm() <= 1e-13 * std::max(u_norm, 1.0)) break;  // already interpolating
    const Vector corr = Psi.transpose() * r;
    int best = -1;
    double best_val = -1.0;
    for (int j = 0; j < p; ++j) {
      if (selected[j]) continue;
      const double v = std::abs(corr[j]);
      if (v > best_val) {
        best_val = v;
        best = j;
      }
    }
    selected[best] = 1;
    result.support.push_back(best);
    support_cols.col(step) = Psi.col(best);
    const auto block = support_cols.leftCols(step + 1);
    Eigen::ColPivHouseholderQR<Matrix> qr(block);
    if (qr.rank() < step + 1)
      throw NumericalError("omp: support matrix is rank deficient after adding column " +
                           std::to_string(best));
    fit = qr.solve(u);
    r = u - block * fit;
  }
  for (size_t i = 0; i < result.support.size(); ++i)
    result.coefficients[result.support[i]] = fit[static_cast<int>(i)];
  result.residual_norm = r.norm();
  return result;
}

OmpCvResult omp_cv(const Matrix& Psi, const Vector& u, int folds, std::uint64_t fold_seed,
                   int max_atoms) {
  const int n = static_cast<int>(Psi.rows());
  const int p = static_cast<int>(Psi.cols());
  const auto fold_idx = make_folds(n, folds, fold_seed);
  int min_train = n;
  for (const auto& f : fold_idx) min_train = std::min(min_train, n - static_cast<int>(f.size()));
  int cap = std::min({min_train, p,
                      static_cast<int>(std::floor(10.0 * std::sqrt(static_cast<double>(n))))});
  if (max_atoms > 0) cap = std::min(cap, max_atoms);
  if (cap < 1) throw std::invalid_argument("omp_cv: no admissible atom count");

  Matrix errors = Matrix::Zero(cap, folds);
  for (int j = 0; j < folds; ++j) {
    std::vector<int> train;
    train.reserve(n);
    for (int f = 0; f < folds; ++f)
      if (f != j) train.insert(train.end(), fold_idx[f].begin(), fold_idx[f].end());
    const Matrix Psi_tr = take_rows(Psi, train);
    const Vector u_tr = take_entries(u, train);
    const Matrix Psi_ho = take_rows(Psi, fold_idx[j]);
    const Vector u_ho = take_entries(u, fold_idx[j]);

    // Incremental greedy pass; record the hold-out error after each atom.
    Vector r = u_tr;
    const double u_norm = u_tr.norm();
    Matrix cols(Psi_tr.rows(), cap);
    std::vector<int> support;
    std::vector<char> selected(p, 0);
    Vector fit;
    double last_error = u_ho.squaredNorm();
    for (int step = 0; step < cap; ++step) {
      if (r.norm() > 1e-13 * std::max(u_norm, 1.0)) {
        const Vector corr = Psi_tr.transpose() * r;
        int best = -1;
        double best_val = -1.0;
        for (int c = 0; c < p; ++c) {
          if (selected[c]) continue;
          const double v = std::abs(corr[c]);
          if (v > best_val) {
            best_val = v;
            best = c;
          }
        }
        selected[best] = 1;
        support.push_back(best);
        cols.col(step) = Psi_tr.col(best);
        const auto block = cols.leftCols(step + 1);
        Eigen::ColPivHouseholderQR<Matrix> qr(block);
        if (qr.rank() < step + 1)
          throw NumericalError("omp_cv: rank-deficient support within fold " +
                               std::to_string(j));
        fit = qr.solve(u_tr);
        r = u_tr - block * fit;
        Vector predicted = Vector::Zero(u_ho.size());
        for (size_t i = 0; i < support.size(); ++i)
          predicted += Psi_ho.col(support[i]) * fit[static_cast<int>(i)];
        last_error = (predicted - u_ho).squaredNorm();
      }
      errors(step, j) = last_error;
    }
  }

  OmpCvResult result;
  result.cv_mean_error = errors.rowwise().mean();
  int best_count = 0;
  for (int a = 1; a < cap; ++a)
    if (result.cv_mean_error[a] < result.cv_mean_error[best_count]) best_count = a;
  result.chosen_atoms = best_count + 1;
  result.fit = omp(Psi, u, result.chosen_atoms);
  return result;
}

Vector least_squares(const Matrix& Psi, const Vector& u) {
  const int n = static_cast<int>(Psi.rows());
  const int p = static_cast<int>(Psi.cols());
  if (n < p)
    throw std::invalid_argument("least_squares: system is underdetermined (N=" +
                                std::to_string(n) + " < P=" + std::to_string(p) + ")");
  Eigen::ColPivHouseholderQR<Matrix> qr(Psi);
  if (qr.rank() < p) {
    const int offending = qr.colsPermutation().indices()[qr.rank()];
    throw NumericalError("least_squares: rank-deficient matrix (rank " +
                         std::to_string(qr.rank()) + " < " + std::to_string(p) +
                         "), offending pivot column " + std::to_string(offending));
  }
  return qr.solve(u);
}

}  // namespace genmod
