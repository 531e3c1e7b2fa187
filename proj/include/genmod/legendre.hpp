#pragma once

#include <utility>
#include <vector>

#include "genmod/multiindex.hpp"
#include "genmod/types.hpp"

namespace genmod {

/// Orthonormal Legendre polynomial psi_j(y) = sqrt(2j+1) * P_j(y), normalized
/// against the uniform measure rho = 1/2 on [-1, 1]. Three-term recurrence.
/// Throws std::domain_error when y is outside [-1, 1].
double legendre_eval(int degree, double y);

/// psi_0(y) .. psi_max_degree(y) in one recurrence pass (no domain check
/// beyond legendre_eval's; used by matrix assembly).
void legendre_eval_all(int max_degree, double y, double* out);

/// Tensor-product basis function: prod_i psi_{alpha_i}(y_i).
/// Throws std::invalid_argument on dimension mismatch.
double multivariate_eval(const MultiIndex& alpha, const Vector& y);

/// Gauss-Legendre nodes/weights on [-1, 1]; weights sum to 2.
/// Newton iteration on the recurrence, accurate to machine precision.
std::pair<Vector, Vector> gauss_legendre(int n);

/// Gauss-Legendre rule mapped to [a, b].
std::pair<Vector, Vector> gauss_legendre(int n, double a, double b);

}  // namespace genmod
