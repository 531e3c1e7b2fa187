#pragma once

#include <cstdint>
#include <functional>

#include "genmod/dataset.hpp"
#include "genmod/types.hpp"

namespace genmod {

/// Truncated Karhunen-Loeve expansion of the Gaussian-kernel random field
/// on (0,1), discretized with the Nystrom method on a Gauss-Legendre rule.
/// Eigenfunctions are L2(0,1)-normalized with a first-node-positive sign
/// convention; off-node values come from the Nystrom extension formula.
/// Immutable after construction.
class KlExpansion {
 public:
  KlExpansion(double correlation_length, int term_count, int quadrature_points,
              double a_bar, double sigma);

  int term_count() const { return static_cast<int>(eigenvalues_.size()); }
  double correlation_length() const { return correlation_length_; }
  double a_bar() const { return a_bar_; }
  double sigma() const { return sigma_; }

  const Vector& eigenvalues() const { return eigenvalues_; }
  const Vector& quad_nodes() const { return nodes_; }
  const Vector& quad_weights() const { return weights_; }
  /// Eigenfunction values at the quadrature nodes (n_quad x d).
  const Matrix& eigenfunction_node_values() const { return node_values_; }

  /// phi_i(x) by Nystrom extension; x in [0, 1].
  double eigenfunction(int i, double x) const;

  /// All d eigenfunction values at x (one kernel pass).
  Vector eigenfunctions_at(double x) const;

  /// Conservative lower bound on the diffusion field over x in [0,1],
  /// y in [-1,1]^d, computed on a fine grid at construction:
  /// min_x [a_bar - sigma * sum_i sqrt(lambda_i) |phi_i(x)|].
  double diffusion_lower_bound() const { return diffusion_lower_bound_; }

 private:
  double correlation_length_;
  double a_bar_;
  double sigma_;
  Vector eigenvalues_;
  Vector nodes_;
  Vector weights_;
  Matrix node_values_;
  double diffusion_lower_bound_ = 0.0;
};

/// Computes the top-d KL eigenpairs of C(x1,x2) = exp(-(x1-x2)^2 / L^2).
/// Requires n_quad >= 4d and L > 0. Fails fast (ConfigError) when the
/// worst-case diffusion bound is not strictly positive, so every sample
/// drawn later is guaranteed an elliptic problem.
KlExpansion kl_eigenpairs(double L, int d, int n_quad = 200, double a_bar = 0.1,
                          double sigma = 0.03);

/// a(x, y) = a_bar + sigma * sum_i sqrt(lambda_i) phi_i(x) y_i.
double diffusion_eval(const KlExpansion& kl, double x, const Vector& y);

/// Uniform mesh of quadratic Lagrange elements on [0,1]; nodes include the
/// element midpoints.
struct FemMesh {
  int element_count = 0;
  Vector nodes;  // 2*element_count + 1 values, strictly increasing, endpoints 0 and 1

  static FemMesh uniform(int element_count);
};

/// Reusable 1D FEM solver for -(a u')' = f, u(0) = u(1) = 0, with quadratic
/// elements and 3-point Gauss quadrature per element. The assembled system is
/// symmetric positive definite with half-bandwidth 2 and is factored by a
/// banded Cholesky; a non-positive pivot (non-SPD matrix, i.e. a sign-
/// violating coefficient) raises NumericalError.
class FemSolver {
 public:
  explicit FemSolver(int element_count);

  const FemMesh& mesh() const { return mesh_; }
  /// Physical quadrature points, 3 per element, in element order.
  const Vector& quadrature_points() const { return quad_points_; }

  /// Solve with the coefficient sampled at quadrature_points().
  Vector solve_with_coefficient_values(const Vector& a_at_quad, double f = 1.0) const;

  /// Solve with a callable coefficient.
  Vector solve(const std::function<double(double)>& a_fn, double f = 1.0) const;

 private:
  FemMesh mesh_;
  Vector quad_points_;
  Vector quad_xi_;       // reference-element quadrature nodes
  Vector quad_w_;        // reference-element quadrature weights
};

/// Galerkin solution of -(a u')' = f with homogeneous Dirichlet conditions;
/// returns the nodal values on FemMesh::uniform(element_count).
Vector fem_solve(const std::function<double(double)>& a_fn, int element_count,
                 double f = 1.0);

/// QoI for one parameter realization: the FEM solution at x = 0.5. The
/// element count must be even so the midpoint is a mesh vertex.
double qoi_sample(const KlExpansion& kl, int element_count, const Vector& y);

/// Caches everything reusable across samples of the same (kl, mesh) pair so
/// dataset generation costs one banded solve per sample.
class QoiEvaluator {
 public:
  QoiEvaluator(const KlExpansion& kl, int element_count);
  double operator()(const Vector& y) const;

 private:
  const KlExpansion* kl_;
  FemSolver solver_;
  Matrix scaled_modes_at_quad_;  // (#quad points) x d, columns scaled by sqrt(lambda)
  int center_node_ = 0;
};

/// N i.i.d. uniform[-1,1]^d samples with their QoI values. Each sample draws
/// from its own counter-derived stream, so the result is bit-identical no
/// matter how the loop is scheduled. noise_amplitude adds centered Gaussian
/// noise to the QoI (0 = the noise-free benchmark).
Dataset generate_dataset(const KlExpansion& kl, int element_count, int N,
                         std::uint64_t seed, double noise_amplitude = 0.0);

}  // namespace genmod
