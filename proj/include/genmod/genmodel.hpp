#pragma once

#include "genmod/measurement.hpp"
#include "genmod/multiindex.hpp"
#include "genmod/types.hpp"

namespace genmod {

/// Full coefficient description: latent vector z = (logC, g, h) of length
/// 2d+1, per-coefficient signs zeta in {-1, +1}, and the sparse deviation nu.
/// The g block is kept non-negative by the optimizer so the magnitude profile
/// decays with polynomial degree.
struct GenModelState {
  Vector z;
  Vector zeta;
  Vector nu;
};

/// Which denominator the Lasso weight matrix uses. `kScaledEps` is the
/// algorithmic form 1/(G_j + eps * G_ref) with G_ref = exp(logC), which makes
/// the penalty invariant to overall coefficient scale. `kPlainEps` is the
/// plain 1/(G_j + eps) variant, exposed for A/B comparison.
enum class WeightForm { kScaledEps, kPlainEps };

/// Magnitude model over the coefficients of a fixed basis:
///
///   G_i = exp(logC) * (|a|!/a!) * prod_j (1+a_j)^{h_j} * exp(-g_j a_j)
///
/// for multi-index a = alpha^{(i)}. Everything is evaluated in log space and
/// exponentiated once, so large d and p cannot under/overflow intermediate
/// products. The multinomial ratio |a|!/a! (a! meaning the product of entry
/// factorials) is computed via lgamma for the same reason.
///
/// Construction precomputes:
///   log G(z) = log_mult + B z,   B = [1 | -alpha | log(1+alpha)]  (P x 2d+1)
/// so evaluation and the Jacobian are single matrix products. Instances are
/// immutable and safe to share across threads.
class GenModel {
 public:
  explicit GenModel(const MultiIndexBasis& basis);

  int latent_dim() const { return static_cast<int>(design_.cols()); }
  int output_dim() const { return static_cast<int>(design_.rows()); }
  const MultiIndexBasis& basis() const { return *basis_; }

  /// G(z); all entries strictly positive. Throws std::invalid_argument on a
  /// length mismatch or non-finite z entries.
  Vector eval(const Vector& z) const;

  /// P x (2d+1) Jacobian of G; row i = G_i * (1, -alpha_i, log(1+alpha_i)).
  Matrix jacobian(const Vector& z) const;

  /// || Psi (D_zeta G(z) + nu) - u ||_2^2
  double loss(const Vector& z, const Vector& nu, const Vector& zeta, const Matrix& Psi,
              const Vector& u) const;

  /// Analytic gradient of the loss with respect to z:
  /// 2 (Psi D_zeta J_G)^T (Psi (D_zeta G + nu) - u).
  Vector loss_grad_z(const Vector& z, const Vector& nu, const Vector& zeta,
                     const Matrix& Psi, const Vector& u) const;

  /// Diagonal of the Lasso weight matrix, as a length-P vector.
  /// Throws std::domain_error for eps <= 0.
  Vector weight_matrix(const Vector& z, double eps = 1e-4,
                       WeightForm form = WeightForm::kScaledEps) const;

 private:
  void check_latent(const Vector& z) const;

  const MultiIndexBasis* basis_;
  Vector log_mult_;
  Matrix design_;  // B above
};

/// log(|alpha|! / prod_j alpha_j!) via lgamma.
double log_multinomial_ratio(const MultiIndex& alpha);

/// Relative loss change (L(z1) - L(z2)) / L(z2). Throws std::domain_error
/// when L(z2) == 0; callers treat that as convergence, not failure.
double rel_loss_change(const GenModel& model, const Vector& z1, const Vector& z2,
                       const Vector& nu, const Vector& zeta, const Matrix& Psi,
                       const Vector& u);

// Convenience wrappers matching the free-function surface used by the
// bindings and by small tests; hot loops construct a GenModel once instead.
Vector gen_eval(const Vector& z, const MultiIndexBasis& basis);
Matrix gen_jacobian(const Vector& z, const MultiIndexBasis& basis);
double loss(const GenModelState& state, const MeasurementMatrix& Psi, const Vector& u);
Vector loss_grad_z(const GenModelState& state, const MeasurementMatrix& Psi,
                   const Vector& u);
Vector weight_matrix(const Vector& z, const MultiIndexBasis& basis, double eps = 1e-4,
                     WeightForm form = WeightForm::kScaledEps);

/// Decay factor g(b) from the Lipschitz bound: 1 for b >= 2, (4/b^2) e^{b-2}
/// for 0 < b < 2.
double lipschitz_decay_factor(double b);

/// Lipschitz constant of a = z-reparameterized exponential-decay model
///   G_i(z(a)) = c_i exp(-(b^{(i)})^T z(a)),  z_j = a_j / (1 - a_j) + z0_j,
/// over a in [0,1)^k, with b-vectors derived from the basis:
/// b = (1, alpha, log(1+alpha)). Returns sqrt(P k) * max_{i,j} L_{i,j} with
///   L_{i,j} = |c_i| b_j^{(i)} exp(-(b^{(i)})^T z0) g(b_j^{(i)}),
/// zero when b_j^{(i)} = 0. Throws std::invalid_argument for non-positive
/// c_scale entries or a z0 length mismatch.
double lipschitz_constant(const MultiIndexBasis& basis, const Vector& z0,
                          const Vector& c_scale);

/// The b-vectors used by lipschitz_constant, as a P x (2d+1) matrix.
Matrix lipschitz_b_vectors(const MultiIndexBasis& basis);

}  // namespace genmod
