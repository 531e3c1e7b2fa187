#include "genmod/elliptic1d.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

#include "genmod/legendre.hpp"
#include "genmod/regsolvers.hpp"
#include "genmod/rng.hpp"

namespace genmod {

namespace {

double gaussian_kernel(double x1, double x2, double L) {
  const double dx = x1 - x2;
  return std::exp(-dx * dx / (L * L));
}

}  // namespace

KlExpansion::KlExpansion(double correlation_length, int term_count, int quadrature_points,
                         double a_bar, double sigma)
    : correlation_length_(correlation_length), a_bar_(a_bar), sigma_(sigma) {
  if (!(correlation_length > 0.0))
    throw std::invalid_argument("KlExpansion: correlation length must be positive");
  if (term_count < 1) throw std::invalid_argument("KlExpansion: term count must be >= 1");
  if (quadrature_points < 4 * term_count)
    throw std::invalid_argument("KlExpansion: need at least 4*d quadrature points");

  auto [x, w] = gauss_legendre(quadrature_points, 0.0, 1.0);
  nodes_ = x;
  weights_ = w;

  // Symmetrized Nystrom matrix sqrt(W) K sqrt(W).
  const int n = quadrature_points;
  Matrix kernel(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      kernel(i, j) = gaussian_kernel(x[i], x[j], correlation_length);
  const Vector sqrt_w = w.cwiseSqrt();
  const Matrix sym = sqrt_w.asDiagonal() * kernel * sqrt_w.asDiagonal();

  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  if (eig.info() != Eigen::Success)
    throw NumericalError("KlExpansion: eigensolver did not converge");

  // Eigen returns ascending order; take the top term_count, descending.
  eigenvalues_.resize(term_count);
  node_values_.resize(n, term_count);
  for (int i = 0; i < term_count; ++i) {
    const int src = n - 1 - i;
    eigenvalues_[i] = eig.eigenvalues()[src];
    if (!(eigenvalues_[i] > 0.0))
      throw NumericalError("KlExpansion: eigenvalue " + std::to_string(i) +
                           " is not positive; increase quadrature resolution");
    Vector phi = eig.eigenvectors().col(src).cwiseQuotient(sqrt_w);
    if (phi[0] < 0.0) phi = -phi;  // first-node-positive sign convention
    node_values_.col(i) = phi;
  }

  // Exact worst case over y in [-1,1]^d at each grid point x:
  // min_x [a_bar - sigma * sum_i sqrt(lambda_i) |phi_i(x)|].
  const Vector scale = eigenvalues_.cwiseSqrt();
  double lower = a_bar_;
  const int fine = 2001;
  for (int g = 0; g < fine + n; ++g) {
    const double xg = (g < fine) ? static_cast<double>(g) / (fine - 1) : nodes_[g - fine];
    const Vector phi = eigenfunctions_at(xg);
    lower = std::min(lower, a_bar_ - sigma_ * scale.cwiseProduct(phi).cwiseAbs().sum());
  }
  diffusion_lower_bound_ = lower;
}

double KlExpansion::eigenfunction(int i, double x) const {
  if (i < 0 || i >= term_count())
    throw std::invalid_argument("KlExpansion: eigenfunction index out of range");
  double acc = 0.0;
  for (int q = 0; q < nodes_.size(); ++q)
    acc += weights_[q] * gaussian_kernel(x, nodes_[q], correlation_length_) * node_values_(q, i);
  return acc / eigenvalues_[i];
}

Vector KlExpansion::eigenfunctions_at(double x) const {
  const int n = static_cast<int>(nodes_.size());
  Vector kw(n);
  for (int q = 0; q < n; ++q)
    kw[q] = weights_[q] * gaussian_kernel(x, nodes_[q], correlation_length_);
  return (node_values_.transpose() * kw).cwiseQuotient(eigenvalues_);
}

KlExpansion kl_eigenpairs(double L, int d, int n_quad, double a_bar, double sigma) {
  KlExpansion kl(L, d, n_quad, a_bar, sigma);
  if (!(kl.diffusion_lower_bound() > 0.0))
    throw ConfigError("kl_eigenpairs: diffusion field is not strictly positive "
                      "(worst-case bound " + std::to_string(kl.diffusion_lower_bound()) +
                      "); reduce sigma or increase a_bar");
  return kl;
}

double diffusion_eval(const KlExpansion& kl, double x, const Vector& y) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error("diffusion_eval: x must lie in [0, 1]");
  if (y.size() != kl.term_count())
    throw std::invalid_argument("diffusion_eval: y must have length d");
  const Vector phi = kl.eigenfunctions_at(x);
  return kl.a_bar() + kl.sigma() * kl.eigenvalues().cwiseSqrt().cwiseProduct(phi).dot(y);
}

FemMesh FemMesh::uniform(int element_count) {
  if (element_count < 1)
    throw std::invalid_argument("FemMesh: element count must be >= 1");
  FemMesh mesh;
  mesh.element_count = element_count;
  const int n_nodes = 2 * element_count + 1;
  mesh.nodes.resize(n_nodes);
  for (int i = 0; i < n_nodes; ++i)
    mesh.nodes[i] = static_cast<double>(i) / (n_nodes - 1);
  return mesh;
}

namespace {

// Quadratic Lagrange shape functions on the reference element [-1, 1].
inline void shape_values(double xi, double n[3]) {
  n[0] = 0.5 * xi * (xi - 1.0);
  n[1] = 1.0 - xi * xi;
  n[2] = 0.5 * xi * (xi + 1.0);
}

inline void shape_derivs(double xi, double dn[3]) {
  dn[0] = xi - 0.5;
  dn[1] = -2.0 * xi;
  dn[2] = xi + 0.5;
}

// Banded Cholesky (lower), half-bandwidth 2. bands(i, k) holds A(i, i-k).
// Factors in place and solves; throws on a non-positive pivot.
Vector banded_spd_solve(Matrix& bands, Vector rhs) {
  const int n = static_cast<int>(bands.rows());
  const int hbw = static_cast<int>(bands.cols()) - 1;
  for (int i = 0; i < n; ++i) {
    double diag = bands(i, 0);
    for (int k = 1; k <= std::min(hbw, i); ++k) diag -= bands(i, k) * bands(i, k);
    if (!(diag > 0.0))
      throw NumericalError("banded_spd_solve: non-positive pivot at row " +
                           std::to_string(i) + "; system is not SPD");
    const double l_ii = std::sqrt(diag);
    bands(i, 0) = l_ii;
    for (int j = i + 1; j <= std::min(n - 1, i + hbw); ++j) {
      double v = bands(j, j - i);
      for (int k = 1; k <= hbw; ++k) {
        const int col = j - k;  // A(j, col) pairs with A(i, col)
        if (col < 0 || col >= i || i - col > hbw) continue;
        v -= bands(j, k) * bands(i, i - col);
      }
      bands(j, j - i) = v / l_ii;
    }
  }
  // Forward substitution L y = rhs.
  for (int i = 0; i < n; ++i) {
    double v = rhs[i];
    for (int k = 1; k <= std::min(hbw, i); ++k) v -= bands(i, k) * rhs[i - k];
    rhs[i] = v / bands(i, 0);
  }
  // Back substitution L^T x = y.
  for (int i = n - 1; i >= 0; --i) {
    double v = rhs[i];
    for (int k = 1; k <= std::min(hbw, n - 1 - i); ++k) v -= bands(i + k, k) * rhs[i + k];
    rhs[i] = v / bands(i, 0);
  }
  return rhs;
}

}  // namespace

FemSolver::FemSolver(int element_count) : mesh_(FemMesh::uniform(element_count)) {
  auto [xi, w] = gauss_legendre(3);
  quad_xi_ = xi;
  quad_w_ = w;
  quad_points_.resize(3 * element_count);
  const double h = 1.0 / element_count;
  for (int e = 0; e < element_count; ++e) {
    const double left = e * h;
    for (int q = 0; q < 3; ++q)
      quad_points_[3 * e + q] = left + 0.5 * h * (xi[q] + 1.0);
  }
}

Vector FemSolver::solve_with_coefficient_values(const Vector& a_at_quad, double f) const {
  const int m = mesh_.element_count;
  if (a_at_quad.size() != 3 * m)
    throw std::invalid_argument("FemSolver: expected 3 coefficient values per element");
  const int n_nodes = 2 * m + 1;
  const double h = 1.0 / m;
  const double jac = 0.5 * h;

  const int n_free = n_nodes - 2;  // Dirichlet rows removed
  Matrix bands = Matrix::Zero(n_free, 3);
  Vector load = Vector::Zero(n_free);

  double nv[3], dn[3];
  for (int e = 0; e < m; ++e) {
    double ke[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    double fe[3] = {0, 0, 0};
    for (int q = 0; q < 3; ++q) {
      const double a = a_at_quad[3 * e + q];
      shape_values(quad_xi_[q], nv);
      shape_derivs(quad_xi_[q], dn);
      const double wq = quad_w_[q];
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j <= i; ++j) ke[i][j] += wq * a * dn[i] * dn[j] / jac;
        fe[i] += wq * f * nv[i] * jac;
      }
    }
    for (int i = 0; i < 3; ++i) {
      const int gi = 2 * e + i - 1;  // free-node numbering (node index minus 1)
      if (gi < 0 || gi >= n_free) continue;
      load[gi] += fe[i];
      for (int j = 0; j <= i; ++j) {
        const int gj = 2 * e + j - 1;
        if (gj < 0 || gj >= n_free) continue;
        bands(gi, gi - gj) += ke[i][j];
      }
    }
  }

  const Vector interior = banded_spd_solve(bands, std::move(load));
  Vector solution = Vector::Zero(n_nodes);
  solution.segment(1, n_free) = interior;
  return solution;
}

Vector FemSolver::solve(const std::function<double(double)>& a_fn, double f) const {
  Vector a_vals(quad_points_.size());
  for (int q = 0; q < quad_points_.size(); ++q) a_vals[q] = a_fn(quad_points_[q]);
  return solve_with_coefficient_values(a_vals, f);
}

Vector fem_solve(const std::function<double(double)>& a_fn, int element_count, double f) {
  return FemSolver(element_count).solve(a_fn, f);
}

QoiEvaluator::QoiEvaluator(const KlExpansion& kl, int element_count)
    : kl_(&kl), solver_(element_count) {
  if (element_count % 2 != 0)
    throw std::invalid_argument("QoiEvaluator: element count must be even so that "
                                "x = 0.5 is a mesh vertex");
  const Vector& qp = solver_.quadrature_points();
  const int d = kl.term_count();
  scaled_modes_at_quad_.resize(qp.size(), d);
  const Vector scale = kl.eigenvalues().cwiseSqrt();
  for (int q = 0; q < qp.size(); ++q)
    scaled_modes_at_quad_.row(q) = kl.eigenfunctions_at(qp[q]).cwiseProduct(scale).transpose();
  center_node_ = element_count;  // node index of x = 0.5 on the 2m+1 grid
}

double QoiEvaluator::operator()(const Vector& y) const {
  if (y.size() != kl_->term_count())
    throw std::invalid_argument("QoiEvaluator: y must have length d");
  const Vector a_vals =
      (kl_->a_bar() + (kl_->sigma() * (scaled_modes_at_quad_ * y).array())).matrix();
  const Vector solution = solver_.solve_with_coefficient_values(a_vals);
  return solution[center_node_];
}

double qoi_sample(const KlExpansion& kl, int element_count, const Vector& y) {
  return QoiEvaluator(kl, element_count)(y);
}

Dataset generate_dataset(const KlExpansion& kl, int element_count, int N,
                         std::uint64_t seed, double noise_amplitude) {
  if (N < 1) throw std::invalid_argument("generate_dataset: N must be >= 1");
  const int d = kl.term_count();
  QoiEvaluator evaluate(kl, element_count);

  Dataset ds;
  ds.samples.resize(N, d);
  ds.qoi.resize(N);
  ds.seed = seed;
  ds.noise_amplitude = noise_amplitude;
  ds.generator = "elliptic1d";
  ds.correlation_length = kl.correlation_length();
  ds.a_bar = kl.a_bar();
  ds.sigma = kl.sigma();
  ds.element_count = element_count;

  for (int i = 0; i < N; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i), stream::kSample));
    Vector y(d);
    for (int j = 0; j < d; ++j) y[j] = rng.uniform_sym();
    ds.samples.row(i) = y.transpose();
    double q = evaluate(y);
    if (noise_amplitude > 0.0) q += noise_amplitude * rng.gaussian();
    ds.qoi[i] = q;
  }
  return ds;
}

}  // namespace genmod
