#include "cstar/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cstar/error.hpp"

namespace cstar {

LinearMap map_from_function(const Algebra& algebra, const std::function<Element(const Element&)>& f) {
  const Eigen::Index t = algebra.total_dim();
  CMatrix s(t, t);
  for (Eigen::Index i = 0; i < t; ++i) s.col(i) = algebra.coords(f(algebra.basis_element(i)));
  return {algebra, s};
}

LinearMap map_from_kraus(const Algebra& algebra, const std::vector<KrausTerm>& kraus) {
  const auto& dims = algebra.block_dims();
  for (const auto& k : kraus) {
    if (k.from_block >= dims.size() || k.to_block >= dims.size() || k.op.rows() != dims[k.to_block] ||
        k.op.cols() != dims[k.from_block]) {
      throw Error(ErrorKind::AlgebraMismatch, "Kraus operator shape does not match its block pair");
    }
  }
  return map_from_function(algebra, [&](const Element& a) {
    Element out = algebra.zero();
    for (const auto& k : kraus) {
      out.block(k.to_block) += k.op * a.block(k.from_block) * k.op.adjoint();
    }
    return out;
  });
}

LinearMap map_from_kraus(const Algebra& algebra, const std::vector<CMatrix>& kraus) {
  if (algebra.num_blocks() != 1) {
    throw Error(ErrorKind::AlgebraMismatch, "plain Kraus lists need a single-block algebra");
  }
  std::vector<KrausTerm> terms;
  for (const auto& k : kraus) terms.push_back({0, 0, k});
  return map_from_kraus(algebra, terms);
}

LinearMap map_from_stochastic(const RMatrix& p) {
  if (p.rows() != p.cols() || p.rows() == 0) {
    throw Error(ErrorKind::ValidationError, "stochastic matrix must be square and nonempty");
  }
  return {Algebra::diagonal(p.rows()), p.cast<cplx>()};
}

std::vector<BlockChoi> choi_blocks(const LinearMap& m) {
  const Algebra& alg = m.algebra;
  const auto& dims = alg.block_dims();
  std::vector<BlockChoi> out;
  for (std::size_t from = 0; from < dims.size(); ++from) {
    for (std::size_t to = 0; to < dims.size(); ++to) {
      const Eigen::Index di = dims[from];
      const Eigen::Index dj = dims[to];
      CMatrix c = CMatrix::Zero(di * dj, di * dj);
      for (Eigen::Index r = 0; r < di; ++r) {
        for (Eigen::Index s = 0; s < di; ++s) {
          const Element img = m(alg.basis_element(alg.index_of(from, r, s)));
          c.block(r * dj, s * dj, dj, dj) = img.block(to);
        }
      }
      out.push_back({from, to, c});
    }
  }
  return out;
}

UcpMap verify_ucp(const LinearMap& m, double tol) {
  const Algebra& alg = m.algebra;
  if (m.superop.rows() != alg.total_dim() || m.superop.cols() != alg.total_dim()) {
    throw Error(ErrorKind::AlgebraMismatch, "superoperator size does not match algebra");
  }
  const double scale = std::max(1.0, op_norm(m.superop));
  const double unital_residual = (m(alg.unit()) - alg.unit()).norm();
  if (unital_residual > tol * scale) {
    throw Error(ErrorKind::NotUnital, "|Phi(1) - 1| = " + std::to_string(unital_residual));
  }

  UcpMap out(alg);
  out.superop_ = m.superop;
  out.choi_ = choi_blocks(m);

  double global_max = 0.0;
  std::vector<HermEig> eigs;
  for (const auto& bc : out.choi_) {
    try {
      eigs.push_back(herm_eig(bc.choi, std::max(tol, 1e-8)));
    } catch (const Error& e) {
      // A non-Hermitian Choi matrix means the map does not preserve adjoints.
      if (e.kind() == ErrorKind::NotHermitian) throw Error(ErrorKind::NotCP, e.what());
      throw;
    }
    if (eigs.back().eigenvalues.size()) global_max = std::max(global_max, eigs.back().eigenvalues.maxCoeff());
  }
  for (std::size_t p = 0; p < out.choi_.size(); ++p) {
    const double lmin = eigs[p].eigenvalues.size() ? eigs[p].eigenvalues.minCoeff() : 0.0;
    if (lmin < -tol * std::max(global_max, 1.0)) {
      throw Error(ErrorKind::NotCP, "Choi eigenvalue " + std::to_string(lmin) + " for block pair (" +
                                        std::to_string(out.choi_[p].from_block) + " -> " +
                                        std::to_string(out.choi_[p].to_block) + ")");
    }
  }

  // Kraus operators from the Choi eigenvectors, ascending eigenvalue order.
  // Eigenvector index (r, m) = r * d_to + m holds K(m, r) / sqrt(lambda).
  for (std::size_t p = 0; p < out.choi_.size(); ++p) {
    const auto& bc = out.choi_[p];
    const Eigen::Index di = alg.block_dims()[bc.from_block];
    const Eigen::Index dj = alg.block_dims()[bc.to_block];
    for (Eigen::Index k = 0; k < eigs[p].eigenvalues.size(); ++k) {
      const double lam = eigs[p].eigenvalues(k);
      if (lam <= tol * global_max) continue;
      CMatrix op(dj, di);
      for (Eigen::Index r = 0; r < di; ++r) {
        for (Eigen::Index mm = 0; mm < dj; ++mm) op(mm, r) = std::sqrt(lam) * eigs[p].eigenvectors(r * dj + mm, k);
      }
      // First entry (row-major) of significant magnitude made real positive.
      const double big = op.cwiseAbs().maxCoeff();
      for (Eigen::Index idx = 0; idx < op.size(); ++idx) {
        const cplx v = op(idx / di, idx % di);
        if (std::abs(v) > 1e-8 * big) {
          op *= std::conj(v) / std::abs(v);
          break;
        }
      }
      out.kraus_.push_back({bc.from_block, bc.to_block, op});
    }
  }

  const CMatrix rebuilt = map_from_kraus(alg, out.kraus_).superop;
  const double enc = fro_norm(rebuilt - m.superop);
  if (enc > std::sqrt(tol) * scale) {
    throw Error(ErrorKind::Inconsistent, "Kraus reconstruction residual " + std::to_string(enc));
  }
  return out;
}

UcpMap compose(const UcpMap& phi, const UcpMap& psi) {
  if (!(phi.algebra() == psi.algebra())) throw Error(ErrorKind::AlgebraMismatch, "compose on different algebras");
  return verify_ucp({phi.algebra(), phi.superop() * psi.superop()}, 1e-9);
}

UcpMap identity_map(const Algebra& algebra) {
  return verify_ucp({algebra, identity(algebra.total_dim())});
}

UcpMap power(const UcpMap& phi, std::size_t n) {
  CMatrix s = identity(phi.algebra().total_dim());
  for (std::size_t k = 0; k < n; ++k) s = phi.superop() * s;
  return verify_ucp({phi.algebra(), s}, 1e-9);
}

LinearMap trace_dual(const UcpMap& phi) {
  // tr(a X) = c(a)^T P c(X) with P the transpose permutation, so
  // c(Phi^*(X)) = P S^T P c(X).
  const CMatrix p = phi.algebra().star_permutation();
  return {phi.algebra(), p * phi.superop().transpose() * p};
}

std::vector<CMatrix> represented_on_basis(const UcpMap& phi) {
  const Algebra& alg = phi.algebra();
  std::vector<CMatrix> out;
  for (Eigen::Index i = 0; i < alg.total_dim(); ++i) {
    out.push_back(alg.block_diagonal(phi(alg.basis_element(i))));
  }
  return out;
}

namespace {

CMatrix apply_on_basis(const std::vector<CMatrix>& on_basis, const CVector& c) {
  CMatrix out = CMatrix::Zero(on_basis.front().rows(), on_basis.front().cols());
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (c(i) != cplx(0.0)) out += c(i) * on_basis[i];
  }
  return out;
}

}  // namespace

double multiplicativity_defect(const Algebra& algebra, const std::vector<CMatrix>& on_basis,
                               const Element& a) {
  const CVector c = algebra.coords(a);
  const CMatrix fa = apply_on_basis(on_basis, c);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < algebra.total_dim(); ++j) {
    const Element x = algebra.basis_element(j);
    const CMatrix left = apply_on_basis(on_basis, algebra.coords(a * x)) - fa * on_basis[j];
    const CMatrix right = apply_on_basis(on_basis, algebra.coords(x * a)) - on_basis[j] * fa;
    worst = std::max({worst, fro_norm(left), fro_norm(right)});
  }
  return worst;
}

Subspace multiplicative_domain(const Algebra& algebra, const std::vector<CMatrix>& on_basis, double tol) {
  const Eigen::Index t = algebra.total_dim();
  if (static_cast<Eigen::Index>(on_basis.size()) != t) {
    throw Error(ErrorKind::AlgebraMismatch, "map must be given on every matrix unit");
  }
  const Eigen::Index h = on_basis.front().rows();
  const Eigen::Index block = h * h;
  CMatrix system = CMatrix::Zero(2 * t * block, t);
  for (Eigen::Index j = 0; j < t; ++j) {
    for (Eigen::Index i = 0; i < t; ++i) {
      CMatrix left = -on_basis[i] * on_basis[j];
      if (auto ij = algebra.unit_product(i, j)) left += on_basis[*ij];
      CMatrix right = -on_basis[j] * on_basis[i];
      if (auto ji = algebra.unit_product(j, i)) right += on_basis[*ji];
      system.block((2 * j) * block, i, block, 1) = vec(left);
      system.block((2 * j + 1) * block, i, block, 1) = vec(right);
    }
  }
  Subspace d;
  d.algebra = algebra;
  d.basis = null_space(system, tol);

  // The kernel must be a unital *-subalgebra on which the quadratic
  // identities hold.
  const double check = 1e-7;
  if (!d.contains(algebra.unit(), check)) {
    throw Error(ErrorKind::NotAnAlgebra, "multiplicative domain misses the unit");
  }
  for (Eigen::Index k = 0; k < d.dim(); ++k) {
    const Element a = d.element(k);
    if (!d.contains(a.star(), check)) throw Error(ErrorKind::NotAnAlgebra, "multiplicative domain not *-closed");
    for (Eigen::Index l = 0; l < d.dim(); ++l) {
      if (!d.contains(a * d.element(l), check)) {
        throw Error(ErrorKind::NotAnAlgebra, "multiplicative domain not closed under products");
      }
    }
    const CMatrix fa = apply_on_basis(on_basis, algebra.coords(a));
    const CMatrix fas = apply_on_basis(on_basis, algebra.coords(a.star()));
    const double q1 = fro_norm(fas * fa - apply_on_basis(on_basis, algebra.coords(a.star() * a)));
    const double q2 = fro_norm(fa * fas - apply_on_basis(on_basis, algebra.coords(a * a.star())));
    if (std::max(q1, q2) > check) {
      throw Error(ErrorKind::NotAnAlgebra, "quadratic multiplicativity identities fail on the kernel");
    }
  }
  return d;
}

Subspace multiplicative_domain(const UcpMap& phi, double tol) {
  return multiplicative_domain(phi.algebra(), represented_on_basis(phi), tol);
}

bool is_homomorphism(const UcpMap& phi, double tol) {
  const Algebra& alg = phi.algebra();
  for (Eigen::Index i = 0; i < alg.total_dim(); ++i) {
    for (Eigen::Index j = 0; j < alg.total_dim(); ++j) {
      const Element a = alg.basis_element(i);
      const Element b = alg.basis_element(j);
      if (alg.coords(phi(a * b) - phi(a) * phi(b)).norm() > tol) return false;
    }
  }
  return true;
}

Element kadison_defect(const UcpMap& phi, const Element& a, double tol) {
  const Element d = phi(a.star() * a) - phi(a.star()) * phi(a);
  const double scale = std::max(1.0, a.norm() * a.norm());
  for (const auto& b : d.blocks()) {
    const HermEig e = herm_eig(hermitize(b), 1.0);
    if (e.eigenvalues.size() && e.eigenvalues.minCoeff() < -tol * scale) {
      throw Error(ErrorKind::SchwarzViolation,
                  "Kadison defect has eigenvalue " + std::to_string(e.eigenvalues.minCoeff()));
    }
  }
  return d;
}

}  // namespace cstar
