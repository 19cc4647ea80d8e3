#include "cstar/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "cstar/error.hpp"

namespace cstar {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NotUnital: return "NotUnital";
    case ErrorKind::NotCP: return "NotCP";
    case ErrorKind::AlgebraMismatch: return "AlgebraMismatch";
    case ErrorKind::NotAnAlgebra: return "NotAnAlgebra";
    case ErrorKind::SchwarzViolation: return "SchwarzViolation";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::DegenerateState: return "DegenerateState";
    case ErrorKind::NotInvariant: return "NotInvariant";
    case ErrorKind::NotSeparating: return "NotSeparating";
    case ErrorKind::NotFaithful: return "NotFaithful";
    case ErrorKind::ModularObstruction: return "ModularObstruction";
    case ErrorKind::NotUcp: return "NotUcp";
    case ErrorKind::GramNotPSD: return "GramNotPSD";
    case ErrorKind::IllDefined: return "IllDefined";
    case ErrorKind::DimensionCap: return "DimensionCap";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::NotEquivalent: return "NotEquivalent";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::NotMultiplicative: return "NotMultiplicative";
    case ErrorKind::NoAdjoint: return "NoAdjoint";
    case ErrorKind::NotASection: return "NotASection";
    case ErrorKind::Inconsistent: return "Inconsistent";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

CMatrix adjoint(const CMatrix& m) { return m.adjoint(); }

CMatrix hermitize(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

double fro_norm(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.norm(); }

double op_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<CMatrix> svd(m);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

double min_singular_value(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  if (m.cols() > m.rows()) return 0.0;
  return s(s.size() - 1);
}

HermEig herm_eig(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::NotHermitian, "matrix is not square");
  const double scale = fro_norm(m);
  const double asym = fro_norm(m - m.adjoint());
  if (asym > tol * scale) {
    throw Error(ErrorKind::NotHermitian,
                "asymmetry " + std::to_string(asym) + " exceeds tolerance");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitize(m));
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NoConvergence, "Hermitian eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

CMatrix QuotientBasis::null_projector() const {
  return identity(ambient_dim) - lift * project;
}

QuotientBasis gram_quotient(const CMatrix& gram, double tol) {
  // Gram matrices assembled from products pick up asymmetry at roundoff; the
  // hermiticity gate uses a fixed loose bound and the PSD gate uses tol.
  const HermEig e = herm_eig(gram, std::max(tol, 1e-8));
  const Eigen::Index n = gram.rows();
  const double lmax = n ? std::max(e.eigenvalues.maxCoeff(), 0.0) : 0.0;
  const double lmin = n ? e.eigenvalues.minCoeff() : 0.0;
  if (lmin < -tol * std::max(lmax, fro_norm(gram))) {
    throw Error(ErrorKind::NotPSD, "Gram eigenvalue " + std::to_string(lmin) + " is negative");
  }
  const double cut = tol * lmax;
  std::vector<Eigen::Index> kept;
  // Descending order so the largest directions come first.
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    if (e.eigenvalues(k) > cut) kept.push_back(k);
  }
  QuotientBasis q;
  q.ambient_dim = n;
  q.rank = static_cast<Eigen::Index>(kept.size());
  q.tol_used = tol;
  q.project.resize(q.rank, n);
  q.lift.resize(n, q.rank);
  for (Eigen::Index r = 0; r < q.rank; ++r) {
    const double lam = e.eigenvalues(kept[r]);
    const CVector v = e.eigenvectors.col(kept[r]);
    q.project.row(r) = std::sqrt(lam) * v.adjoint();
    q.lift.col(r) = v / std::sqrt(lam);
  }
  q.coisometry = q.lift.adjoint();
  return q;
}

QuotientBasis regauge(const QuotientBasis& q, const CMatrix& unitary) {
  QuotientBasis out = q;
  out.project = unitary * q.project;
  out.lift = q.lift * unitary.adjoint();
  out.coisometry = out.lift.adjoint();
  return out;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix null_space(const CMatrix& m, double rel_tol) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0) return identity(n);
  Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = std::max(s.size() ? s(0) : 0.0, 1.0);
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) > rel_tol * smax && s(k) > 0.0) ++rank;
  }
  return svd.matrixV().rightCols(n - rank);
}

CMatrix column_span(const CMatrix& m, double rel_tol) {
  if (m.cols() == 0) return CMatrix(m.rows(), 0);
  Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  const double smax = std::max(s.size() ? s(0) : 0.0, 1.0);
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) > rel_tol * smax && s(k) > 0.0) ++rank;
  }
  return svd.matrixU().leftCols(rank);
}

Eigen::Index numerical_rank(const CMatrix& m, double rel_tol) {
  return column_span(m, rel_tol).cols();
}

CMatrix psd_sqrt(const CMatrix& h) {
  return herm_function(h, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

CMatrix psd_inverse_sqrt(const CMatrix& h) {
  return herm_function(h, [](double x) { return 1.0 / std::sqrt(x); });
}

CVector vec(const CMatrix& x) {
  CVector v(x.size());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index s = 0; s < x.cols(); ++s) v(r * x.cols() + s) = x(r, s);
  }
  return v;
}

CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols) {
  CMatrix x(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index s = 0; s < cols; ++s) x(r, s) = v(r * cols + s);
  }
  return x;
}

CMatrix solve_least_squares(const CMatrix& a, const CMatrix& b) {
  return a.completeOrthogonalDecomposition().solve(b);
}

CMatrix random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = cplx(gauss(rng), gauss(rng));
  }
  return out;
}

CMatrix random_unitary(Eigen::Index n, std::mt19937_64& rng) {
  const CMatrix g = random_complex(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

}  // namespace cstar
