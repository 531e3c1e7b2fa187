#include "genmod/genmodel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace genmod {

double log_multinomial_ratio(const MultiIndex& alpha) {
  double total = 0.0;
  double sum_parts = 0.0;
  for (int e : alpha.entries) {
    total += e;
    sum_parts += std::lgamma(static_cast<double>(e) + 1.0);
  }
  return std::lgamma(total + 1.0) - sum_parts;
}

GenModel::GenModel(const MultiIndexBasis& basis) : basis_(&basis) {
  const int P = basis.size();
  const int d = basis.dim();
  log_mult_.resize(P);
  design_.resize(P, 2 * d + 1);
  for (int i = 0; i < P; ++i) {
    log_mult_[i] = log_multinomial_ratio(basis[i]);
    design_(i, 0) = 1.0;
    for (int j = 0; j < d; ++j) {
      const int a = basis.degrees()(i, j);
      design_(i, 1 + j) = -static_cast<double>(a);
      design_(i, 1 + d + j) = std::log1p(static_cast<double>(a));
    }
  }
}

void GenModel::check_latent(const Vector& z) const {
  if (z.size() != latent_dim())
    throw std::invalid_argument("GenModel: latent vector has length " +
                                std::to_string(z.size()) + ", expected " +
                                std::to_string(latent_dim()));
  if (!z.allFinite())
    throw std::invalid_argument("GenModel: latent vector has non-finite entries");
}

Vector GenModel::eval(const Vector& z) const {
  check_latent(z);
  return (log_mult_ + design_ * z).array().exp();
}

Matrix GenModel::jacobian(const Vector& z) const {
  return eval(z).asDiagonal() * design_;
}

double GenModel::loss(const Vector& z, const Vector& nu, const Vector& zeta,
                      const Matrix& Psi, const Vector& u) const {
  const int P = output_dim();
  if (nu.size() != P || zeta.size() != P || Psi.cols() != P || Psi.rows() != u.size())
    throw std::invalid_argument("loss: inconsistent dimensions");
  const Vector c = zeta.cwiseProduct(eval(z)) + nu;
  return (Psi * c - u).squaredNorm();
}

Vector GenModel::loss_grad_z(const Vector& z, const Vector& nu, const Vector& zeta,
                             const Matrix& Psi, const Vector& u) const {
  const int P = output_dim();
  if (nu.size() != P || zeta.size() != P || Psi.cols() != P || Psi.rows() != u.size())
    throw std::invalid_argument("loss_grad_z: inconsistent dimensions");
  const Vector g = eval(z);
  const Vector residual = Psi * (zeta.cwiseProduct(g) + nu) - u;
  // 2 J_G^T D_zeta Psi^T r, with J_G = diag(G) B.
  const Vector back = zeta.cwiseProduct(Psi.transpose() * residual).cwiseProduct(g);
  return 2.0 * (design_.transpose() * back);
}

Vector GenModel::weight_matrix(const Vector& z, double eps, WeightForm form) const {
  if (!(eps > 0.0)) throw std::domain_error("weight_matrix: eps must be positive");
  const Vector g = eval(z);
  const double ref = (form == WeightForm::kScaledEps) ? std::exp(z[0]) : 1.0;
  return (g.array() + eps * ref).inverse();
}

double rel_loss_change(const GenModel& model, const Vector& z1, const Vector& z2,
                       const Vector& nu, const Vector& zeta, const Matrix& Psi,
                       const Vector& u) {
  const double l2 = model.loss(z2, nu, zeta, Psi, u);
  if (l2 == 0.0)
    throw std::domain_error("rel_loss_change: loss at reference point is zero (converged)");
  return (model.loss(z1, nu, zeta, Psi, u) - l2) / l2;
}

Vector gen_eval(const Vector& z, const MultiIndexBasis& basis) {
  return GenModel(basis).eval(z);
}

Matrix gen_jacobian(const Vector& z, const MultiIndexBasis& basis) {
  return GenModel(basis).jacobian(z);
}

double loss(const GenModelState& state, const MeasurementMatrix& Psi, const Vector& u) {
  return GenModel(*Psi.basis).loss(state.z, state.nu, state.zeta, Psi.values, u);
}

Vector loss_grad_z(const GenModelState& state, const MeasurementMatrix& Psi,
                   const Vector& u) {
  return GenModel(*Psi.basis).loss_grad_z(state.z, state.nu, state.zeta, Psi.values, u);
}

Vector weight_matrix(const Vector& z, const MultiIndexBasis& basis, double eps,
                     WeightForm form) {
  return GenModel(basis).weight_matrix(z, eps, form);
}

double lipschitz_decay_factor(double b) {
  if (!(b > 0.0)) throw std::domain_error("lipschitz_decay_factor: b must be positive");
  if (b >= 2.0) return 1.0;
  return (4.0 / (b * b)) * std::exp(b - 2.0);
}

Matrix lipschitz_b_vectors(const MultiIndexBasis& basis) {
  const int P = basis.size();
  const int d = basis.dim();
  Matrix b(P, 2 * d + 1);
  for (int i = 0; i < P; ++i) {
    b(i, 0) = 1.0;
    for (int j = 0; j < d; ++j) {
      const int a = basis.degrees()(i, j);
      b(i, 1 + j) = static_cast<double>(a);
      b(i, 1 + d + j) = std::log1p(static_cast<double>(a));
    }
  }
  return b;
}

double lipschitz_constant(const MultiIndexBasis& basis, const Vector& z0,
                          const Vector& c_scale) {
  const int P = basis.size();
  const int k = 2 * basis.dim() + 1;
  if (z0.size() != k)
    throw std::invalid_argument("lipschitz_constant: z0 must have length 2d+1");
  if (c_scale.size() != P)
    throw std::invalid_argument("lipschitz_constant: c_scale must have length P");
  if ((c_scale.array() <= 0.0).any())
    throw std::invalid_argument("lipschitz_constant: c_scale entries must be positive");

  const Matrix b = lipschitz_b_vectors(basis);
  double max_entry = 0.0;
  for (int i = 0; i < P; ++i) {
    const double envelope = c_scale[i] * std::exp(-b.row(i).dot(z0));
    for (int j = 0; j < k; ++j) {
      const double bij = b(i, j);
      if (bij == 0.0) continue;
      max_entry = std::max(max_entry, envelope * bij * lipschitz_decay_factor(bij));
    }
  }
  return std::sqrt(static_cast<double>(P) * static_cast<double>(k)) * max_entry;
}

}  // namespace genmod
