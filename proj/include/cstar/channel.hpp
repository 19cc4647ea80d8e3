#pragma once

// Unital completely positive endomorphisms of a finite-dimensional C*-algebra.
//
// The canonical encoding is the superoperator: the matrix S acting on
// coordinates, coords(Phi(a)) = S coords(a). Choi matrices are kept per pair
// of blocks and Kraus operators follow the convention
//   Phi(a)_j = sum_k K_k a_i K_k^*   (K_k is d_j x d_i),
// so that ad_U(a) = U a U^* has the single Kraus operator U.

#include <cstddef>
#include <functional>
#include <vector>

#include "cstar/algebra.hpp"

namespace cstar {

/// A linear map on an algebra, not yet known to be ucp.
struct LinearMap {
  Algebra algebra;
  CMatrix superop;

  Element operator()(const Element& a) const { return algebra.element(superop * algebra.coords(a)); }
};

struct KrausTerm {
  std::size_t from_block = 0;
  std::size_t to_block = 0;
  CMatrix op;  // d_to x d_from
};

struct BlockChoi {
  std::size_t from_block = 0;
  std::size_t to_block = 0;
  CMatrix choi;  // sum_rs E_rs (x) Phi(E_rs)_to, of size d_from * d_to
};

class UcpMap {
 public:
  const Algebra& algebra() const { return algebra_; }
  const CMatrix& superop() const { return superop_; }
  const std::vector<BlockChoi>& choi() const { return choi_; }
  const std::vector<KrausTerm>& kraus() const { return kraus_; }

  Element operator()(const Element& a) const { return algebra_.element(superop_ * algebra_.coords(a)); }
  CVector apply(const CVector& coords) const { return superop_ * coords; }
  LinearMap linear() const { return {algebra_, superop_}; }

 private:
  friend UcpMap verify_ucp(const LinearMap& m, double tol);
  explicit UcpMap(Algebra a) : algebra_(std::move(a)) {}

  Algebra algebra_;
  CMatrix superop_;
  std::vector<BlockChoi> choi_;
  std::vector<KrausTerm> kraus_;
};

/// Checks unitality and complete positivity and populates all encodings.
/// Throws NotUnital or NotCP.
UcpMap verify_ucp(const LinearMap& m, double tol = kDefaultTol);

LinearMap map_from_function(const Algebra& algebra, const std::function<Element(const Element&)>& f);
LinearMap map_from_kraus(const Algebra& algebra, const std::vector<KrausTerm>& kraus);
/// Single-block shorthand: Phi(a) = sum_k K_k a K_k^*.
LinearMap map_from_kraus(const Algebra& algebra, const std::vector<CMatrix>& kraus);
/// f -> P f on C^n for a row-stochastic P.
LinearMap map_from_stochastic(const RMatrix& p);

/// Superoperator of the Choi blocks; inverse of the per-pair Choi encoding.
std::vector<BlockChoi> choi_blocks(const LinearMap& m);

/// compose(phi, psi) = phi o psi.
UcpMap compose(const UcpMap& phi, const UcpMap& psi);
UcpMap power(const UcpMap& phi, std::size_t n);
UcpMap identity_map(const Algebra& algebra);

/// Trace dual Phi^*: tr(Phi(a) X) = tr(a Phi^*(X)).
LinearMap trace_dual(const UcpMap& phi);

/// Max over the basis {x_j} of |Phi(a x_j) - Phi(a)Phi(x_j)| and the mirrored
/// defect, for a map given by its values on the matrix units (into B(H)).
double multiplicativity_defect(const Algebra& algebra, const std::vector<CMatrix>& on_basis,
                               const Element& a);

/// Multiplicative domain of a ucp map A -> B(H) given on the matrix units, as
/// the kernel of a -> (Phi(a x_j) - Phi(a)Phi(x_j), Phi(x_j a) - Phi(x_j)Phi(a))_j.
/// Throws NotAnAlgebra when the kernel fails the subalgebra checks.
Subspace multiplicative_domain(const Algebra& algebra, const std::vector<CMatrix>& on_basis,
                               double tol = kKernelTol);
Subspace multiplicative_domain(const UcpMap& phi, double tol = kKernelTol);

/// Values of phi on the matrix units as block-diagonal matrices on C^{rep_dim}.
std::vector<CMatrix> represented_on_basis(const UcpMap& phi);

bool is_homomorphism(const UcpMap& phi, double tol = 1e-9);

/// Phi(a* a) - Phi(a*) Phi(a), certified positive. Throws SchwarzViolation.
Element kadison_defect(const UcpMap& phi, const Element& a, double tol = 1e-9);

}  // namespace cstar
