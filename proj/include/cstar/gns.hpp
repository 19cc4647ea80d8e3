#pragma once

// States, GNS triples, the transfer contraction, the induced W*-system, the
// modular pair of a faithful state, and the phi-adjoint of a ucp map.
//
// GNS coordinates: the space is the quotient of the algebra by the left
// kernel of phi, with orthonormal coordinates from gram_quotient applied to
// G_ij = phi(x_i^* x_j). embed(a) = T coords(a) and pi(a) = T L_a C^*.

#include <cstdint>
#include <vector>

#include "cstar/channel.hpp"
#include "cstar/check.hpp"

namespace cstar {

class State {
 public:
  /// Validates PSD blocks with unit total trace. Throws InvalidState.
  State(Algebra algebra, std::vector<CMatrix> densities, double tol = 1e-9);

  /// Normalized trace: every density proportional to the identity.
  static State tracial(const Algebra& algebra);
  /// Seeded random state; faithful unless `faithful` is false, in which case
  /// the last block carries rank-deficient weight.
  static State random(const Algebra& algebra, std::uint64_t seed, bool faithful = true);

  const Algebra& algebra() const { return algebra_; }
  const std::vector<CMatrix>& densities() const { return densities_; }
  bool faithful() const { return faithful_; }
  /// Projection onto the direct sum of the density supports.
  const Element& support() const { return support_; }
  /// The density as an algebra element.
  Element density() const { return Element(densities_); }

  cplx operator()(const Element& a) const;
  /// Row functional f with phi(a) = f coords(a).
  Eigen::RowVectorXcd functional() const;

 private:
  Algebra algebra_;
  std::vector<CMatrix> densities_;
  Element support_;
  bool faithful_ = false;
};

/// Invariant state of phi obtained by projecting the normalized trace onto
/// the fixed space of the trace dual along its spectral complement.
State invariant_state(const UcpMap& phi);

struct GnsData {
  Algebra algebra;
  State state;
  QuotientBasis quotient;
  Eigen::Index dim = 0;
  CVector omega;

  CVector embed(const Element& a) const { return quotient.project * algebra.coords(a); }
  CMatrix rep(const Element& a) const;
  /// pi on every matrix unit, in basis order.
  std::vector<CMatrix> rep_basis() const;
};

GnsData gns_construct(const Algebra& algebra, const State& phi, double tol = kDefaultTol);

/// Reproduction, multiplicativity, star and cyclicity certificates.
Checks verify_gns(const GnsData& g, double tol = kDefaultTol);

/// max_a |phi(Phi(a)) - phi(a)| over the matrix units; passes iff <= tol.
Check check_invariance(const UcpMap& phi, const State& state, double tol = kDefaultTol);

/// Matrix U on H_phi with U embed(a) = embed(Phi(a)). Throws NotInvariant.
CMatrix transfer_contraction(const GnsData& g, const UcpMap& phi, double tol = kDefaultTol);

Checks verify_transfer(const GnsData& g, const UcpMap& phi, const CMatrix& u, double tol = kDefaultTol);

struct WSystem {
  Subspace vn_basis;          // pi(A)'' as operators on H_phi
  CMatrix phi_dot;            // action of Phi_. on vn_basis coordinates
  Eigen::RowVectorXcd state_dot;  // phi_.(X) = state_dot coords(X)
  double separating_margin = 0.0;  // min singular value of X -> X Omega

  CVector coords_of(const CMatrix& x) const;
  CMatrix apply(const CMatrix& x) const;
  cplx state(const CMatrix& x) const { return (state_dot * coords_of(x))(0); }
};

/// Throws NotSeparating when Omega is not cyclic for the commutant of pi(A).
WSystem induce_w_system(const GnsData& g, const CMatrix& u, double tol = kKernelTol);

/// Modular data of a faithful state in GNS coordinates. Antilinear maps are
/// stored as M with v -> M conj(v).
struct ModularPair {
  CMatrix delta;
  CMatrix j_matrix;
  CMatrix s_matrix;
  /// Residuals against the realified polar decomposition of S.
  Checks certificates;

  CVector apply_j(const CVector& v) const { return j_matrix * v.conjugate(); }
  CVector apply_s(const CVector& v) const { return s_matrix * v.conjugate(); }
  CMatrix delta_it(double t) const;
  CMatrix delta_sqrt() const;
};

/// Throws NotFaithful.
ModularPair modular_pair(const GnsData& g, double tol = 1e-9);

/// Realified matrix of v -> M conj(v): [[Re M, Im M], [Im M, -Re M]].
RMatrix realify_antilinear(const CMatrix& m);
/// Realified matrix of v -> A v: [[Re A, -Im A], [Im A, Re A]].
RMatrix realify_linear(const CMatrix& a);

/// Residuals |U Delta^{it} - Delta^{it} U| at each t, |UJ - JU| and
/// |U Delta - Delta U|, all relative to max(1, |Delta|).
Checks modular_commutation_check(const CMatrix& u, const ModularPair& m,
                                 const std::vector<double>& t_samples = {0.5, 1.0, 1.4142135623730951},
                                 double tol = 1e-9);

/// Phi^#(b) = Phi^*(b rho) rho^{-1}, returned only when it is ucp.
/// Throws NotFaithful, NotInvariant, ModularObstruction, or Inconsistent when
/// the candidate is ucp but U fails to commute with the modular operator.
UcpMap phi_adjoint(const UcpMap& phi, const State& state, double tol = 1e-9);

/// max over matrix-unit pairs of |phi(a Psi(b)) - phi(Phi(a) b)|.
double adjunction_residual(const UcpMap& phi, const UcpMap& psi, const State& state);

}  // namespace cstar
