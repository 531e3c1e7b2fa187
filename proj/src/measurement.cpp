#include "genmod/measurement.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "genmod/legendre.hpp"

namespace genmod {

MeasurementMatrix assemble_matrix(const MultiIndexBasis& basis, const Matrix& samples) {
  const int d = basis.dim();
  const int p = basis.max_degree();
  const int P = basis.size();
  const int N = static_cast<int>(samples.rows());
  if (samples.cols() != d)
    throw std::invalid_argument("assemble_matrix: samples have " +
                                std::to_string(samples.cols()) + " columns, basis needs " +
                                std::to_string(d));
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < d; ++j) {
      const double y = samples(i, j);
      if (!(y >= -1.0 && y <= 1.0))
        throw std::domain_error("assemble_matrix: sample entry (" + std::to_string(i) +
                                ", " + std::to_string(j) + ") = " + std::to_string(y) +
                                " outside [-1, 1]");
    }
  }

  MeasurementMatrix result;
  result.basis = &basis;
  result.values.resize(N, P);
  const auto& degrees = basis.degrees();
  std::vector<double> table(static_cast<size_t>(d) * (p + 1));
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < d; ++j)
      legendre_eval_all(p, samples(i, j), table.data() + static_cast<size_t>(j) * (p + 1));
    for (int c = 0; c < P; ++c) {
      double prod = 1.0;
      for (int j = 0; j < d; ++j) {
        const int deg = degrees(c, j);
        if (deg > 0) prod *= table[static_cast<size_t>(j) * (p + 1) + deg];
      }
      result.values(i, c) = prod;
    }
  }

  const double sup = std::pow(3.0, 0.5 * p) * (1.0 + 1e-12);
  const double max_abs = result.values.cwiseAbs().maxCoeff();
  if (max_abs > sup)
    throw std::logic_error("assemble_matrix: entry magnitude " + std::to_string(max_abs) +
                           " exceeds the 3^{p/2} bound; evaluation is broken");
  return result;
}

}  // namespace genmod
