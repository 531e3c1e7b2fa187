#include "genmod/legendre.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace genmod {

namespace {

void check_domain(double y) {
  if (!(y >= -1.0 && y <= 1.0))
    throw std::domain_error("legendre_eval: point " + std::to_string(y) +
                            " outside [-1, 1]");
}

}  // namespace

double legendre_eval(int degree, double y) {
  if (degree < 0) throw std::invalid_argument("legendre_eval: degree must be >= 0");
  check_domain(y);
  if (degree == 0) return 1.0;
  // (j+1) P_{j+1} = (2j+1) y P_j - j P_{j-1}
  double pm = 1.0;
  double pc = y;
  for (int j = 1; j < degree; ++j) {
    const double pn = ((2 * j + 1) * y * pc - j * pm) / (j + 1);
    pm = pc;
    pc = pn;
  }
  return pc * std::sqrt(2.0 * degree + 1.0);
}

void legendre_eval_all(int max_degree, double y, double* out) {
  check_domain(y);
  out[0] = 1.0;
  if (max_degree == 0) return;
  double pm = 1.0;
  double pc = y;
  out[1] = y * std::sqrt(3.0);
  for (int j = 1; j < max_degree; ++j) {
    const double pn = ((2 * j + 1) * y * pc - j * pm) / (j + 1);
    pm = pc;
    pc = pn;
    out[j + 1] = pn * std::sqrt(2.0 * (j + 1) + 1.0);
  }
}

double multivariate_eval(const MultiIndex& alpha, const Vector& y) {
  if (alpha.dim() != y.size())
    throw std::invalid_argument("multivariate_eval: alpha has dimension " +
                                std::to_string(alpha.dim()) + " but point has " +
                                std::to_string(y.size()));
  double prod = 1.0;
  for (int i = 0; i < alpha.dim(); ++i) prod *= legendre_eval(alpha.entries[i], y[i]);
  return prod;
}

std::pair<Vector, Vector> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  Vector nodes(n), weights(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double pm = 1.0, pc = x;
      for (int j = 1; j < n; ++j) {
        const double pn = ((2 * j + 1) * x * pc - j * pm) / (j + 1);
        pm = pc;
        pc = pn;
      }
      pp = n * (x * pc - pm) / (x * x - 1.0);
      const double dx = pc / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
  return {nodes, weights};
}

std::pair<Vector, Vector> gauss_legendre(int n, double a, double b) {
  auto [x, w] = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    x[i] = mid + half * x[i];
    w[i] *= half;
  }
  return {x, w};
}

}  // namespace genmod
