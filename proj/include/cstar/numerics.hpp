#pragma once

// Dense complex linear algebra used by every construction in the library.

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace cstar {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kDefaultTol = 1e-10;

/// Relative singular-value cut used for kernels and spans. Looser than
/// kDefaultTol because exact kernels of assembled linear systems show up at
/// roundoff (~1e-15) while genuine directions are O(1).
inline constexpr double kKernelTol = 1e-8;

struct HermEig {
  RVector eigenvalues;   // ascending
  CMatrix eigenvectors;  // orthonormal columns
};

/// Orthonormal coordinates for the quotient of C^n by the null space of a PSD
/// Gram matrix G.
///
/// `project` (T, rank x ambient) sends an ambient coefficient vector v to the
/// coordinates of its class, so that |Tv|^2 = v* G v. `lift` (ambient x rank)
/// holds ambient representatives of the orthonormal quotient basis; T * lift = I.
/// `coisometry` is lift*, the whitening map with coisometry * G * coisometry* = I.
struct QuotientBasis {
  Eigen::Index ambient_dim = 0;
  Eigen::Index rank = 0;
  CMatrix coisometry;
  CMatrix project;
  CMatrix lift;
  double tol_used = kDefaultTol;

  CVector quotient(const CVector& v) const { return project * v; }
  /// Orthogonal projector onto the null space of G, in ambient coordinates.
  CMatrix null_projector() const;
};

HermEig herm_eig(const CMatrix& m, double tol = kDefaultTol);
QuotientBasis gram_quotient(const CMatrix& gram, double tol = kDefaultTol);
/// Re-expresses the quotient coordinates in a rotated orthonormal basis.
QuotientBasis regauge(const QuotientBasis& q, const CMatrix& unitary);

double op_norm(const CMatrix& m);
double fro_norm(const CMatrix& m);
/// Smallest singular value.
double min_singular_value(const CMatrix& m);

CMatrix hermitize(const CMatrix& m);
CMatrix adjoint(const CMatrix& m);
CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix identity(Eigen::Index n);

/// Orthonormal basis of ker(m). Singular values <= rel_tol * max(sigma_max, 1)
/// count as zero; the floor keeps a roundoff-sized matrix from having full rank.
CMatrix null_space(const CMatrix& m, double rel_tol = kKernelTol);
/// Orthonormal basis of the column span of m.
CMatrix column_span(const CMatrix& m, double rel_tol = kKernelTol);
Eigen::Index numerical_rank(const CMatrix& m, double rel_tol = kKernelTol);

/// f(H) for Hermitian H via its eigendecomposition.
template <class F>
CMatrix herm_function(const CMatrix& h, F&& f) {
  const HermEig e = herm_eig(hermitize(h), 1.0);
  CMatrix out = CMatrix::Zero(h.rows(), h.cols());
  for (Eigen::Index k = 0; k < e.eigenvalues.size(); ++k) {
    out += f(e.eigenvalues(k)) * e.eigenvectors.col(k) * e.eigenvectors.col(k).adjoint();
  }
  return out;
}

CMatrix psd_sqrt(const CMatrix& h);
CMatrix psd_inverse_sqrt(const CMatrix& h);

/// Row-major vectorization: vec(X)[r*cols + s] = X(r, s).
CVector vec(const CMatrix& x);
CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols);

/// Least-squares solution of A x = b through a complete orthogonal decomposition.
CMatrix solve_least_squares(const CMatrix& a, const CMatrix& b);

CMatrix random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);
CMatrix random_unitary(Eigen::Index n, std::mt19937_64& rng);

}  // namespace cstar
