#include "cstar/stinespring.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "cstar/error.hpp"

namespace cstar {

namespace {

// Rows of (L_{x_m} (x) I_h) Y, where L_{x_m} sends x_k to x_m x_k.
CMatrix left_unit_times(const Algebra& alg, Eigen::Index m, Eigen::Index h, const CMatrix& y) {
  CMatrix out = CMatrix::Zero(y.rows(), y.cols());
  for (Eigen::Index k = 0; k < alg.total_dim(); ++k) {
    if (auto p = alg.unit_product(m, k)) out.middleRows(*p * h, h) += y.middleRows(k * h, h);
  }
  return out;
}

CMatrix combine(const Algebra& alg, const std::vector<CMatrix>& on_basis, const Element& a) {
  const CVector c = alg.coords(a);
  CMatrix out = CMatrix::Zero(on_basis.front().rows(), on_basis.front().cols());
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (c(i) != cplx(0.0)) out += c(i) * on_basis[i];
  }
  return out;
}

}  // namespace

CMatrix StinespringData::sigma(const Element& a) const { return combine(algebra, sigma_basis, a); }

CVector StinespringData::class_of(const Element& a, const CVector& psi) const {
  return coords.project * kron(algebra.coords(a), psi);
}

StinespringData stinespring(const Algebra& algebra, const std::vector<CMatrix>& phi_on_basis,
                            const StinespringOptions& options) {
  const Eigen::Index t = algebra.total_dim();
  if (static_cast<Eigen::Index>(phi_on_basis.size()) != t) {
    throw Error(ErrorKind::AlgebraMismatch, "map must be given on every matrix unit");
  }
  const Eigen::Index h = phi_on_basis.front().rows();
  for (const auto& m : phi_on_basis) {
    if (m.rows() != h || m.cols() != h) throw Error(ErrorKind::AlgebraMismatch, "images must be square and equal");
  }

  const double gate = 1e-8;
  const double unital = fro_norm(combine(algebra, phi_on_basis, algebra.unit()) - identity(h));
  if (unital > gate) throw Error(ErrorKind::NotUcp, "map is not unital, residual " + std::to_string(unital));
  for (std::size_t b = 0; b < algebra.num_blocks(); ++b) {
    const Eigen::Index d = algebra.block_dims()[b];
    CMatrix choi(d * h, d * h);
    for (Eigen::Index r = 0; r < d; ++r) {
      for (Eigen::Index s = 0; s < d; ++s) choi.block(r * h, s * h, h, h) = phi_on_basis[algebra.index_of(b, r, s)];
    }
    double lmin = 0.0, lmax = 1.0;
    try {
      const HermEig e = herm_eig(choi, gate);
      lmin = e.eigenvalues.minCoeff();
      lmax = std::max(1.0, e.eigenvalues.maxCoeff());
    } catch (const Error&) {
      throw Error(ErrorKind::NotUcp, "Choi matrix of block " + std::to_string(b) + " is not Hermitian");
    }
    if (lmin < -gate * lmax) {
      throw Error(ErrorKind::NotUcp, "Choi eigenvalue " + std::to_string(lmin) + " on block " + std::to_string(b));
    }
  }

  std::vector<Eigen::Index> perm(t);
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  if (options.permutation_seed != 0) {
    std::mt19937_64 rng(options.permutation_seed);
    std::shuffle(perm.begin(), perm.end(), rng);
  }

  const Eigen::Index ambient = t * h;
  CMatrix gram = CMatrix::Zero(ambient, ambient);
  for (Eigen::Index p = 0; p < t; ++p) {
    const Eigen::Index is = algebra.unit_star(perm[p]);
    for (Eigen::Index q = 0; q < t; ++q) {
      if (auto u = algebra.unit_product(is, perm[q])) gram.block(p * h, q * h, h, h) = phi_on_basis[*u];
    }
  }
  QuotientBasis permuted;
  try {
    permuted = gram_quotient(gram, options.tol);
  } catch (const Error& e) {
    throw Error(ErrorKind::GramNotPSD, e.what());
  }

  // Undo the ordering so coordinates refer to the canonical ambient basis.
  StinespringData s{algebra, h, 0, {}, {}, {}, 0.0};
  s.coords = permuted;
  for (Eigen::Index p = 0; p < t; ++p) {
    s.coords.project.middleCols(perm[p] * h, h) = permuted.project.middleCols(p * h, h);
    s.coords.lift.middleRows(perm[p] * h, h) = permuted.lift.middleRows(p * h, h);
  }
  s.coords.coisometry = s.coords.lift.adjoint();
  if (options.gauge_seed != 0) {
    std::mt19937_64 rng(options.gauge_seed);
    s.coords = regauge(s.coords, random_unitary(s.coords.rank, rng));
  }
  s.dilation_dim = s.coords.rank;

  const CMatrix& tproj = s.coords.project;
  const CMatrix null = s.coords.null_projector();
  for (Eigen::Index m = 0; m < t; ++m) {
    s.sigma_basis.push_back(tproj * left_unit_times(algebra, m, h, s.coords.lift));
    s.well_defined_residual =
        std::max(s.well_defined_residual, fro_norm(tproj * left_unit_times(algebra, m, h, null)));
  }
  s.V = tproj * kron(algebra.coords(algebra.unit()), identity(h));
  return s;
}

Checks verify_stinespring(const StinespringData& s, const std::vector<CMatrix>& phi_on_basis, double tol) {
  const Algebra& alg = s.algebra;
  const Eigen::Index t = alg.total_dim();
  double stine = 0.0, mult = 0.0, star = 0.0;
  for (Eigen::Index i = 0; i < t; ++i) {
    stine = std::max(stine, fro_norm(phi_on_basis[i] - s.V.adjoint() * s.sigma_basis[i] * s.V));
    star = std::max(star, fro_norm(s.sigma_basis[alg.unit_star(i)] - s.sigma_basis[i].adjoint()));
    for (Eigen::Index k = 0; k < t; ++k) {
      CMatrix prod = s.sigma_basis[i] * s.sigma_basis[k];
      if (auto p = alg.unit_product(i, k)) prod -= s.sigma_basis[*p];
      mult = std::max(mult, fro_norm(prod));
    }
  }
  const double iso = fro_norm(s.V.adjoint() * s.V - identity(s.source_dim));
  const double unit = fro_norm(s.sigma(alg.unit()) - identity(s.dilation_dim));
  return {
      {"stinespring.factorization", "max |Phi(a) - V* sigma(a) V|", stine, tol, "Stinespring factorization"},
      {"stinespring.isometry", "|V*V - I|", iso, tol, "Stinespring isometry"},
      {"stinespring.multiplicative", "max |sigma(x_i) sigma(x_k) - sigma(x_i x_k)|", mult, tol,
       "Stinespring representation"},
      {"stinespring.star", "max |sigma(a*) - sigma(a)*|", star, tol, "Stinespring representation"},
      {"stinespring.unital", "|sigma(1) - I|", unit, tol, "Stinespring representation"},
      {"stinespring.well_defined", "max |T (L_x (x) I) P_null|", s.well_defined_residual, tol,
       "Stinespring quotient"},
  };
}

MdCommutationReport check_md_commutation(const StinespringData& s, const Subspace& domain, double tol) {
  MdCommutationReport r;
  const CMatrix proj = s.V * s.V.adjoint();
  for (Eigen::Index k = 0; k < domain.dim(); ++k) {
    const CMatrix sx = s.sigma(domain.element(k));
    r.commutation_residual = std::max(r.commutation_residual, fro_norm(sx * proj - proj * sx));
  }
  r.unitarity_residual = fro_norm(proj - identity(s.dilation_dim));
  r.v_unitary = s.dilation_dim == s.source_dim && r.unitarity_residual <= 1e-8;
  r.domain_full = domain.dim() == s.algebra.total_dim();
  r.equivalence_holds = r.v_unitary == r.domain_full;
  r.checks = {
      {"md_commutation.commutes", "max over D-basis |sigma(x) VV* - VV* sigma(x)|", r.commutation_residual, tol,
       "multiplicative domain commutation"},
      {"md_commutation.equivalence", "[V unitary] xor [D = A]", r.equivalence_holds ? 0.0 : 1.0, 0.0,
       "homomorphism iff unitary"},
  };
  return r;
}

std::vector<CMatrix> lifted_on_basis(const GnsData& g, const UcpMap& phi) {
  std::vector<CMatrix> out;
  for (Eigen::Index i = 0; i < g.algebra.total_dim(); ++i) out.push_back(g.rep(phi(g.algebra.basis_element(i))));
  return out;
}

CMatrix lambda0(const GnsData& g, const StinespringData& s1, double tol) {
  if (s1.source_dim != g.dim) throw Error(ErrorKind::AlgebraMismatch, "Stinespring step is not over H_phi");
  const CMatrix omega = g.omega;
  const CMatrix ill = s1.coords.project * kron(g.quotient.null_projector(), omega);
  const double r = fro_norm(ill);
  if (r > std::max(tol, 1e-8)) {
    throw Error(ErrorKind::IllDefined, "a (x) Omega does not vanish on the GNS kernel, residual " + std::to_string(r));
  }
  return s1.coords.project * kron(g.quotient.lift, omega);
}

Checks verify_lambda0(const GnsData& g, const StinespringData& s1, const CMatrix& lambda, const CMatrix& u,
                      double tol) {
  const Algebra& alg = g.algebra;
  double inter = 0.0, defn = 0.0;
  for (Eigen::Index i = 0; i < alg.total_dim(); ++i) {
    const Element x = alg.basis_element(i);
    inter = std::max(inter, fro_norm(s1.sigma_basis[i] * lambda - lambda * g.rep(x)));
    defn = std::max(defn, (lambda * g.embed(x) - s1.class_of(x, g.omega)).norm());
  }
  return {
      {"lambda0.definition", "max |Lambda0 embed(a) - [a (x) Omega]|", defn, tol, "Lambda0 isometry"},
      {"lambda0.factorization", "|U - V0* Lambda0|", fro_norm(u - s1.V.adjoint() * lambda), tol,
       "factorization U = V0* Lambda0"},
      {"lambda0.intertwines", "max |sigma1(a) Lambda0 - Lambda0 pi(a)|", inter, tol, "Lambda0 isometry"},
      {"lambda0.isometry", "|Lambda0* Lambda0 - I|", fro_norm(lambda.adjoint() * lambda - identity(g.dim)), tol,
       "Lambda0 isometry"},
  };
}

}  // namespace cstar
