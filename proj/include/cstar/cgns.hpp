#pragma once

// The iterated Stinespring tower L_0 = H_phi, L_{n+1} = dilation space of
// Phi_n = sigma_n o Phi, the connecting isometries Lambda_n, and the depth-N
// truncation of the inductive limit with its operators.
//
// Truncation: H_inf is represented by L_N, Z_n = Xi_{N,n}. V_inf* is total
// (Z_{N-1} V_{N-1}^*); V_inf is known on the range of Z_{N-1}, where it acts
// as V_{N-1} Z_{N-1}^*. When Z_{N-1} is unitary (collapsed tower) V_inf is a
// genuine unitary and no budget applies.

#include <cstdint>
#include <memory>
#include <vector>

#include "cstar/stinespring.hpp"

namespace cstar {

struct TowerOptions {
  double tol = kDefaultTol;
  Eigen::Index dimension_cap = 8192;
  std::uint64_t permutation_seed = 0;
  std::uint64_t gauge_seed = 0;
};

struct Tower {
  Algebra algebra;
  UcpMap phi;
  GnsData gns;
  CMatrix U;
  std::size_t depth = 0;
  std::vector<StinespringData> steps;  // steps[n] dilates Phi_n, 0 <= n < depth
  std::vector<CMatrix> lambda;         // Lambda_n : L_n -> L_{n+1}

  Eigen::Index dim(std::size_t n) const { return n == 0 ? gns.dim : steps.at(n - 1).dilation_dim; }
  const std::vector<CMatrix>& sigma_basis(std::size_t n) const;
  CMatrix sigma(std::size_t n, const Element& a) const;
  const CMatrix& V(std::size_t n) const { return steps.at(n).V; }
  /// Xi_{n,m} = Lambda_{n-1} ... Lambda_m for m <= n.
  CMatrix xi(std::size_t n, std::size_t m) const;
  /// Phi_n on the matrix units.
  std::vector<CMatrix> phi_n_basis(std::size_t n) const;

 private:
  friend Tower build_tower(const UcpMap&, const State&, std::size_t, const TowerOptions&);
  Tower(Algebra a, UcpMap p, GnsData g) : algebra(std::move(a)), phi(std::move(p)), gns(std::move(g)) {}
  std::vector<CMatrix> sigma0_;
};

/// Throws NotInvariant, DimensionCap, IllDefined.
Tower build_tower(const UcpMap& phi, const State& state, std::size_t depth, const TowerOptions& options = {});

/// Level factorizations, relations (a)-(g), Xi composition and the
/// multiplicative-domain nesting.
Checks verify_tower(const Tower& t, double tol = 1e-9);

struct CgnsData {
  std::shared_ptr<const Tower> tower;
  Eigen::Index ambient_dim = 0;
  std::vector<CMatrix> Z;            // Z[n] = Xi_{N,n}
  std::vector<CMatrix> pi_basis;     // pi_inf = sigma_N on matrix units
  CVector omega;
  CMatrix v_star;                    // total
  CMatrix v_partial;                 // valid on the range of Z_{N-1}
  bool v_total = false;
  std::size_t budget = 0;

  CMatrix pi(const Element& a) const;
  /// Throws BudgetExceeded when k exceeds the budget of a non-total V_inf.
  void require_budget(std::size_t k) const;
  /// V_inf^k Z_0 = Z_k V_{k-1} ... V_0.
  CMatrix v_power_on_z0(std::size_t k) const;
  /// v_partial^k, valid on the range of Z_{N-k}.
  CMatrix v_power(std::size_t k) const;
  CMatrix v_star_power(std::size_t k) const;
  /// d_k(a) = V^k pi(a) V^{k*}, total for k <= budget.
  CMatrix partial(std::size_t k, const Element& a) const;
};

CgnsData cgns_operators(const Tower& t);
CgnsData cgns_operators(std::shared_ptr<const Tower> t);

Checks verify_cgns(const CgnsData& c, double tol = 1e-9);

/// Dimension of span{d_0(a_0) ... d_n(a_n) Omega_inf}. Throws BudgetExceeded.
Eigen::Index cyclic_span_dimension(const CgnsData& c, std::size_t n);

struct Equivalence {
  CMatrix W;
  Checks checks;
};

/// Unitary matching the monomial generating vectors of two truncations of
/// the same system. Throws NotEquivalent.
Equivalence unitary_equivalence(const CgnsData& c1, const CgnsData& c2, double tol = 1e-8);

struct NormComparison {
  double norm_inf = 0.0;
  double norm_phi = 0.0;
  bool zero_equivalent = false;
  double separating_margin = 0.0;
  Checks checks;
};

/// Throws PreconditionFailed unless Phi is multiplicative and Omega_phi is
/// cyclic for the commutant of pi_phi(A).
NormComparison norm_compare(const CgnsData& c, const Element& a, double tol = 1e-9);

}  // namespace cstar
