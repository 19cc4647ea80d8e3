#pragma once

// Reversible dilation of the induced W*-system for multiplicative dynamics:
// the big algebra on the truncated limit, the embedding i, the conditional
// expectation E(X) = Z0* X Z0, the dilated state and the automorphism
// X -> V* X V. Also the analyzer for ucp right inverses.

#include <optional>

#include "cstar/cgns.hpp"
#include "cstar/error.hpp"

namespace cstar {

struct DilationData {
  CgnsData cgns;
  UcpMap adjoint;
  WSystem w;                 // pi_phi(A)'' on H_phi with Phi_. and phi_.
  Subspace big_algebra;      // double commutant of the d_k(a), k <= budget
  std::size_t budget = 0;
  Checks certificates;

  /// i(A) for A in pi_phi(A)''.
  CMatrix embed(const CMatrix& a) const;
  CMatrix expectation(const CMatrix& x) const { return cgns.Z[0].adjoint() * x * cgns.Z[0]; }
  cplx phi_hat(const CMatrix& x) const { return cgns.omega.dot(x * cgns.omega); }
  /// V*^k X V^k for k >= 0 and V^|k| X V*^|k| for k < 0. Throws BudgetExceeded.
  CMatrix dynamics(const CMatrix& x, int k) const;

 private:
  friend DilationData build_dilation(const CgnsData&, const UcpMap&, std::optional<std::size_t>, double);
  DilationData(CgnsData c, UcpMap adj) : cgns(std::move(c)), adjoint(std::move(adj)) {}
  CMatrix rep_stack_;  // columns vec(pi_phi(x_i))
};

/// Throws NotMultiplicative, NoAdjoint or NotSeparating. The budget defaults
/// to the tower depth.
DilationData build_dilation(const CgnsData& c, const UcpMap& adjoint, std::optional<std::size_t> budget = std::nullopt,
                            double tol = 1e-9);

/// E(Phi_hat^n(i(A))) = Phi_.^n(A), phi_hat o Phi_hat^n = phi_hat, phi_hat = phi_. o E.
Checks verify_dilation_diagram(const DilationData& d, std::size_t n, double tol = 1e-9);

struct MinimalityReport {
  Eigen::Index generated_dim = 0;
  Eigen::Index big_dim = 0;
  double separating_margin = 0.0;
  Checks checks;
};

/// Uses `vector` in place of Omega_inf for the separating test when given.
MinimalityReport minimality_and_separating(const DilationData& d, const CVector* vector = nullptr,
                                           double tol = 1e-9);

/// A unit vector annihilated by a nonzero element of the big algebra.
CVector non_separating_vector(const DilationData& d, std::uint64_t seed = 7);

class SectionError : public Error {
 public:
  SectionError(Eigen::Index witness, double residual);
  Eigen::Index witness() const { return witness_; }
  double residual() const { return residual_; }

 private:
  Eigen::Index witness_;
  double residual_;
};

struct RightInverseReport {
  double section_residual = 0.0;
  Eigen::Index witness = 0;
  bool dilation_built = false;
  Checks checks;
};

/// Throws SectionError (kind NotASection) when Phi o Psi != id.
RightInverseReport right_inverse_analyzer(const UcpMap& phi, const UcpMap& psi, const State& state,
                                          std::size_t depth = 2, double tol = 1e-9);

}  // namespace cstar
