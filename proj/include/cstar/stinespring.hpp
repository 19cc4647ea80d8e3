#pragma once

// One Stinespring step for a ucp map A -> B(H), and the factorization
// isometry Lambda_0 through the first dilation space.
//
// Ambient space: A (x) H with index i * dim H + j for x_i (x) e_j. The
// semi-inner product <x_i (x) e_j, x_k (x) e_l> = Phi(x_i^* x_k)_{jl} is
// quotiented by gram_quotient; sigma(a) compresses L_a (x) I.

#include <cstdint>
#include <vector>

#include "cstar/gns.hpp"

namespace cstar {

struct StinespringOptions {
  double tol = kDefaultTol;
  /// Nonzero: assemble the Gram matrix in a permuted algebra-basis order.
  std::uint64_t permutation_seed = 0;
  /// Nonzero: rotate the quotient coordinates by a seeded random unitary.
  std::uint64_t gauge_seed = 0;
};

struct StinespringData {
  Algebra algebra;
  Eigen::Index source_dim = 0;
  Eigen::Index dilation_dim = 0;
  QuotientBasis coords;
  CMatrix V;                             // dilation_dim x source_dim
  std::vector<CMatrix> sigma_basis;      // sigma on each matrix unit
  double well_defined_residual = 0.0;    // max |T (L_x (x) I) P_null|

  CMatrix sigma(const Element& a) const;
  /// Class of a (x) psi in the dilation space.
  CVector class_of(const Element& a, const CVector& psi) const;
};

/// phi_on_basis[i] = Phi(x_i) as an h x h matrix. Throws NotUcp or GramNotPSD.
StinespringData stinespring(const Algebra& algebra, const std::vector<CMatrix>& phi_on_basis,
                            const StinespringOptions& options = {});

/// Factorization, isometry and multiplicativity certificates.
Checks verify_stinespring(const StinespringData& s, const std::vector<CMatrix>& phi_on_basis,
                          double tol = kDefaultTol);

struct MdCommutationReport {
  double commutation_residual = 0.0;  // max over D-basis |sigma(x) VV* - VV* sigma(x)|
  double unitarity_residual = 0.0;    // |VV* - I| (infinite when the dimensions differ)
  bool v_unitary = false;
  bool domain_full = false;
  bool equivalence_holds = false;
  Checks checks;
};

MdCommutationReport check_md_commutation(const StinespringData& s, const Subspace& domain,
                                         double tol = kDefaultTol);

/// Phi_0(a) = pi_phi(Phi(a)) on the matrix units.
std::vector<CMatrix> lifted_on_basis(const GnsData& g, const UcpMap& phi);

/// Isometry H_phi -> L_1 sending embed(a) to the class of a (x) Omega.
/// Throws IllDefined when the assignment does not respect the GNS kernel.
CMatrix lambda0(const GnsData& g, const StinespringData& s1, double tol = kDefaultTol);

Checks verify_lambda0(const GnsData& g, const StinespringData& s1, const CMatrix& lambda, const CMatrix& u,
                      double tol = kDefaultTol);

}  // namespace cstar
