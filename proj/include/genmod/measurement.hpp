#pragma once

#include "genmod/multiindex.hpp"
#include "genmod/types.hpp"

namespace genmod {

/// N x P matrix of tensor Legendre evaluations: row = sample, column = basis
/// index in basis order. Every entry is bounded by 3^{p/2}; column 0 is all
/// ones. `basis` is non-owning and must outlive the matrix.
struct MeasurementMatrix {
  Matrix values;
  const MultiIndexBasis* basis = nullptr;

  int sample_count() const { return static_cast<int>(values.rows()); }
};

/// Evaluates the basis at each sample row (samples is N x d, entries in
/// [-1, 1]). Throws std::domain_error naming the offending row/column when a
/// sample entry is out of range, and std::invalid_argument on a column-count
/// mismatch. Asserts the 3^{p/2} sup bound on the result.
MeasurementMatrix assemble_matrix(const MultiIndexBasis& basis, const Matrix& samples);

}  // namespace genmod
