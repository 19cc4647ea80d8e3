#include "cstar/cgns.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cstar/error.hpp"

namespace cstar {

namespace {

CMatrix combine(const Algebra& alg, const std::vector<CMatrix>& on_basis, const CVector& c) {
  CMatrix out = CMatrix::Zero(on_basis.front().rows(), on_basis.front().cols());
  for (Eigen::Index i = 0; i < alg.total_dim(); ++i) {
    if (c(i) != cplx(0.0)) out += c(i) * on_basis[i];
  }
  return out;
}

void bump(double& slot, double value) { slot = std::max(slot, value); }

// Identity-padded difference so that mismatched sizes count as a failure.
double distance_to_identity(const CMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return fro_norm(m - identity(m.rows()));
}

}  // namespace

const std::vector<CMatrix>& Tower::sigma_basis(std::size_t n) const {
  return n == 0 ? sigma0_ : steps.at(n - 1).sigma_basis;
}

CMatrix Tower::sigma(std::size_t n, const Element& a) const {
  return combine(algebra, sigma_basis(n), algebra.coords(a));
}

CMatrix Tower::xi(std::size_t n, std::size_t m) const {
  if (m > n) throw Error(ErrorKind::ValidationError, "Xi_{n,m} needs m <= n");
  CMatrix out = identity(dim(m));
  for (std::size_t k = m; k < n; ++k) out = lambda.at(k) * out;
  return out;
}

std::vector<CMatrix> Tower::phi_n_basis(std::size_t n) const {
  const auto& sb = sigma_basis(n);
  std::vector<CMatrix> out;
  for (Eigen::Index i = 0; i < algebra.total_dim(); ++i) {
    out.push_back(combine(algebra, sb, phi.superop().col(i)));
  }
  return out;
}

Tower build_tower(const UcpMap& phi, const State& state, std::size_t depth, const TowerOptions& options) {
  if (depth < 1) throw Error(ErrorKind::ValidationError, "tower depth must be at least 1");
  const Algebra& alg = phi.algebra();
  GnsData g = gns_construct(alg, state, options.tol);
  const CMatrix u = transfer_contraction(g, phi, options.tol);
  Tower t(alg, phi, std::move(g));
  t.U = u;
  t.depth = depth;
  t.sigma0_ = t.gns.rep_basis();

  for (std::size_t n = 0; n < depth; ++n) {
    const Eigen::Index projected = alg.total_dim() * t.dim(n);
    if (projected > options.dimension_cap) {
      throw Error(ErrorKind::DimensionCap, "level " + std::to_string(n + 1) + " needs a Gram matrix of size " +
                                               std::to_string(projected) + " > cap " +
                                               std::to_string(options.dimension_cap));
    }
    StinespringOptions so;
    so.tol = options.tol;
    so.permutation_seed = options.permutation_seed ? options.permutation_seed + n : 0;
    so.gauge_seed = options.gauge_seed ? options.gauge_seed + n : 0;
    t.steps.push_back(stinespring(alg, t.phi_n_basis(n), so));
    const StinespringData& next = t.steps.back();
    if (n == 0) {
      t.lambda.push_back(lambda0(t.gns, next, options.tol));
    } else {
      // Lambda_n (a (x) psi) = a (x) Lambda_{n-1} psi on classes.
      const StinespringData& cur = t.steps[n - 1];
      const CMatrix lifted = next.coords.project * kron(identity(alg.total_dim()), t.lambda[n - 1]);
      const double ill = fro_norm(lifted * cur.coords.null_projector());
      if (ill > 1e-8) {
        throw Error(ErrorKind::IllDefined, "Lambda_" + std::to_string(n) + " does not respect the kernel, residual " +
                                               std::to_string(ill));
      }
      t.lambda.push_back(lifted * cur.coords.lift);
    }
  }
  return t;
}

Checks verify_tower(const Tower& t, double tol) {
  const Algebra& alg = t.algebra;
  const Eigen::Index ta = alg.total_dim();
  const std::size_t n_max = t.depth;
  double fact = 0, viso = 0, mult = 0, welldef = 0, liso = 0;
  double ra = 0, rb = 0, rc = 0, rd = 0, re = 0, rf = 0, rg = 0, xcomp = 0, xiso = 0, nest = 0;

  for (std::size_t n = 0; n < n_max; ++n) {
    const Checks lv = verify_stinespring(t.steps[n], t.phi_n_basis(n), tol);
    bump(fact, find_check(lv, "stinespring.factorization")->residual);
    bump(viso, find_check(lv, "stinespring.isometry")->residual);
    bump(mult, find_check(lv, "stinespring.multiplicative")->residual);
    bump(mult, find_check(lv, "stinespring.star")->residual);
    bump(welldef, find_check(lv, "stinespring.well_defined")->residual);
    bump(liso, distance_to_identity(t.lambda[n].adjoint() * t.lambda[n]));
  }

  for (std::size_t n = 1; n <= n_max; ++n) {
    const CMatrix& l = t.lambda[n - 1];
    for (Eigen::Index i = 0; i < ta; ++i) {
      const CMatrix& sn = t.sigma_basis(n)[i];
      const CMatrix& sm = t.sigma_basis(n - 1)[i];
      bump(ra, fro_norm(sn * l - l * sm));
      bump(rb, fro_norm(l.adjoint() * sn * l - sm));
    }
    if (n < n_max) {
      bump(rc, fro_norm(t.V(n) * l - t.lambda[n] * t.V(n - 1)));
      bump(rd, fro_norm(l * t.V(n - 1).adjoint() - t.V(n).adjoint() * t.lambda[n]));
    }
  }

  std::vector<std::vector<CMatrix>> xi(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    for (std::size_t m = 0; m <= n; ++m) {
      xi[n].push_back(t.xi(n, m));
      bump(xiso, distance_to_identity(xi[n][m].adjoint() * xi[n][m]));
    }
  }
  for (std::size_t n = 0; n <= n_max; ++n) {
    for (std::size_t m = 0; m <= n; ++m) {
      for (std::size_t h = 0; h <= m; ++h) bump(xcomp, fro_norm(xi[n][m] * xi[m][h] - xi[n][h]));
      for (Eigen::Index i = 0; i < ta; ++i) {
        bump(re, fro_norm(t.sigma_basis(n)[i] * xi[n][m] - xi[n][m] * t.sigma_basis(m)[i]));
      }
      if (n < n_max) bump(rf, fro_norm(t.V(n) * xi[n][m] - xi[n + 1][m + 1] * t.V(m)));
    }
  }
  for (std::size_t n = 0; n < n_max; ++n) {
    for (std::size_t m = 1; m <= n + 1; ++m) {
      bump(rg, fro_norm(t.V(n).adjoint() * xi[n + 1][m] - xi[n][m - 1] * t.V(m - 1).adjoint()));
    }
  }

  const Subspace d = multiplicative_domain(t.phi);
  for (std::size_t n = 0; n <= n_max; ++n) {
    const Subspace dn = multiplicative_domain(alg, t.phi_n_basis(n));
    for (Eigen::Index k = 0; k < d.dim(); ++k) bump(nest, dn.membership_residual(d.basis.col(k)));
  }

  const std::string a = "tower relations";
  return {
      {"tower.factorization", "max_n |Phi_n(a) - V_n* sigma_{n+1}(a) V_n|", fact, tol, "iterated Stinespring"},
      {"tower.lambda_isometry", "max_n |Lambda_n* Lambda_n - I|", liso, tol, a},
      {"tower.md_nesting", "D_Phi inside D_{Phi_n} for every level", nest, tol, "multiplicative domain nesting"},
      {"tower.relation_a", "sigma_n(a) Lambda_{n-1} = Lambda_{n-1} sigma_{n-1}(a)", ra, tol, a},
      {"tower.relation_b", "Lambda_{n-1}* sigma_n(a) Lambda_{n-1} = sigma_{n-1}(a)", rb, tol, a},
      {"tower.relation_c", "V_n Lambda_{n-1} = Lambda_n V_{n-1}", rc, tol, a},
      {"tower.relation_d", "Lambda_{n-1} V_{n-1}* = V_n* Lambda_n", rd, tol, a},
      {"tower.relation_e", "sigma_n(a) Xi_{n,m} = Xi_{n,m} sigma_m(a)", re, tol, a},
      {"tower.relation_f", "V_n Xi_{n,m} = Xi_{n+1,m+1} V_m", rf, tol, a},
      {"tower.relation_g", "V_n* Xi_{n+1,m} = Xi_{n,m-1} V_{m-1}*", rg, tol, a},
      {"tower.sigma_representation", "max_n multiplicativity and star defects of sigma_n", mult, tol,
       "iterated Stinespring"},
      {"tower.v_isometry", "max_n |V_n* V_n - I|", viso, tol, "iterated Stinespring"},
      {"tower.well_defined", "max_n sigma_n kernel residual", welldef, tol, "iterated Stinespring"},
      {"tower.xi_composition", "Xi_{n,m} Xi_{m,h} = Xi_{n,h}", xcomp, tol, "directed system"},
      {"tower.xi_isometry", "max |Xi_{n,m}* Xi_{n,m} - I|", xiso, tol, "directed system"},
  };
}

CMatrix CgnsData::pi(const Element& a) const {
  return combine(tower->algebra, pi_basis, tower->algebra.coords(a));
}

void CgnsData::require_budget(std::size_t k) const {
  if (!v_total && k > budget) {
    throw Error(ErrorKind::BudgetExceeded, std::to_string(k) + " applications of V_inf exceed budget " +
                                               std::to_string(budget));
  }
}

CMatrix CgnsData::v_power_on_z0(std::size_t k) const {
  require_budget(k);
  if (k > budget) return v_power(k) * Z[0];
  CMatrix out = identity(tower->dim(0));
  for (std::size_t j = 0; j < k; ++j) out = tower->V(j) * out;
  return Z[k] * out;
}

CMatrix CgnsData::v_power(std::size_t k) const {
  require_budget(k);
  CMatrix out = identity(ambient_dim);
  for (std::size_t j = 0; j < k; ++j) out = v_partial * out;
  return out;
}

CMatrix CgnsData::v_star_power(std::size_t k) const {
  CMatrix out = identity(ambient_dim);
  for (std::size_t j = 0; j < k; ++j) out = v_star * out;
  return out;
}

CMatrix CgnsData::partial(std::size_t k, const Element& a) const {
  return v_power(k) * pi(a) * v_star_power(k);
}

CgnsData cgns_operators(const Tower& t) { return cgns_operators(std::make_shared<const Tower>(t)); }

CgnsData cgns_operators(std::shared_ptr<const Tower> t) {
  CgnsData c;
  const std::size_t n = t->depth;
  c.tower = t;
  c.budget = n;
  c.ambient_dim = t->dim(n);
  for (std::size_t m = 0; m <= n; ++m) c.Z.push_back(t->xi(n, m));
  c.pi_basis = t->sigma_basis(n);
  c.omega = c.Z[0] * t->gns.omega;
  const CMatrix& top = c.Z[n - 1];
  c.v_star = top * t->V(n - 1).adjoint();
  c.v_partial = t->V(n - 1) * top.adjoint();
  c.v_total = top.rows() == top.cols() && fro_norm(top * top.adjoint() - identity(top.rows())) <= 1e-9;
  return c;
}

Checks verify_cgns(const CgnsData& c, double tol) {
  const Tower& t = *c.tower;
  const Algebra& alg = t.algebra;
  const std::size_t n_max = c.budget;
  const Eigen::Index ta = alg.total_dim();

  double dil = 0, cov = 0, state = 0, rh = 0, ri = 0, rl = 0, zc = 0, zi = 0;
  CMatrix upow = identity(t.gns.dim);
  for (std::size_t k = 0; k <= n_max; ++k) {
    bump(dil, fro_norm(upow.adjoint() - c.Z[0].adjoint() * c.v_power_on_z0(k)));
    upow = t.U * upow;
  }
  const CMatrix& top = c.Z[n_max - 1];
  for (Eigen::Index i = 0; i < ta; ++i) {
    const Element x = alg.basis_element(i);
    bump(cov, fro_norm(c.v_star * c.pi_basis[i] * c.v_partial * top - c.pi(t.phi(x)) * top));
    bump(state, std::abs(c.omega.dot(c.pi_basis[i] * c.omega) - t.gns.state(x)));
  }
  for (std::size_t n = 0; n <= n_max; ++n) {
    for (Eigen::Index i = 0; i < ta; ++i) bump(rh, fro_norm(c.pi_basis[i] * c.Z[n] - c.Z[n] * t.sigma_basis(n)[i]));
    if (n < n_max) bump(ri, fro_norm(c.v_partial * c.Z[n] - c.Z[n + 1] * t.V(n)));
    if (n >= 1) bump(rl, fro_norm(c.v_star * c.Z[n] - c.Z[n - 1] * t.V(n - 1).adjoint()));
    for (std::size_t m = 0; m <= n_max; ++m) {
      const CMatrix expected = m <= n ? t.xi(n, m) : CMatrix(t.xi(m, n).adjoint());
      bump(zi, fro_norm(c.Z[n].adjoint() * c.Z[m] - expected));
      if (m <= n) bump(zc, fro_norm(c.Z[n] * t.xi(n, m) - c.Z[m]));
    }
  }

  const Subspace d = multiplicative_domain(t.phi);
  const CMatrix proj = c.v_partial * c.v_star;
  double rb1 = 0, rb2 = 0;
  for (Eigen::Index k = 0; k < d.dim(); ++k) {
    const Element x = d.element(k);
    const CMatrix px = c.pi(x);
    bump(rb1, fro_norm(proj * px - px * proj));
    bump(rb2, fro_norm(c.v_star * px - c.pi(t.phi(x)) * c.v_star));
  }

  const std::string th = "CGNS theorem";
  Checks out = {
      {"cgns.covariance", "max |pi(Phi(a)) - V* pi(a) V| on the range of Z_{N-1}", cov, tol, th},
      {"cgns.dilation_identity", "max_{k<=N} |U^{k*} - Z0* V^k Z0|", dil, tol, "isometric dilation identity"},
      {"cgns.embedding_compat", "Z_n Xi_{n,m} = Z_m", zc, tol, "inductive limit embeddings"},
      {"cgns.embedding_inner", "Z_n* Z_m = Xi_{n,m} or Xi_{m,n}*", zi, tol, "inductive limit embeddings"},
      {"cgns.omega_fixed", "|V Omega_inf - Omega_inf|", (c.v_partial * c.omega - c.omega).norm(), tol, th},
      {"cgns.relation_h", "pi_inf(a) Z_n = Z_n sigma_n(a)", rh, tol, th},
      {"cgns.relation_i", "V_inf Z_n = Z_{n+1} V_n", ri, tol, th},
      {"cgns.relation_l", "V_inf* Z_n = Z_{n-1} V_{n-1}*", rl, tol, th},
      {"cgns.remark_b_covariance", "max over D_Phi |V* pi(x) - pi(Phi(x)) V*|", rb2, tol,
       "multiplicative domain remark"},
      {"cgns.remark_b_projection", "max over D_Phi |VV* pi(x) - pi(x) VV*|", rb1, tol,
       "multiplicative domain remark"},
      {"cgns.state", "max |<Omega_inf, pi_inf(a) Omega_inf> - phi(a)|", state, tol, th},
      {"cgns.vstar_z0", "|V* Z0 - Z0 U|", fro_norm(c.v_star * c.Z[0] - c.Z[0] * t.U), tol,
       "isometric dilation identity"},
  };

  if (is_homomorphism(t.phi)) {
    double vu = 0, iso = 0, range = 0;
    CMatrix all(c.ambient_dim, 0);
    for (std::size_t n = 0; n < n_max; ++n) bump(vu, distance_to_identity(t.V(n) * t.V(n).adjoint()));
    for (std::size_t k = 0; k <= n_max; ++k) {
      const CMatrix vk = c.v_power_on_z0(k);
      bump(iso, distance_to_identity(vk.adjoint() * vk));
      CMatrix both(c.ambient_dim, vk.cols() + c.Z[k].cols());
      both << vk, c.Z[k];
      const auto lk = static_cast<double>(t.dim(k));
      bump(range, std::abs(numerical_rank(vk) - lk) + std::abs(numerical_rank(both) - lk));
      all.conservativeResize(Eigen::NoChange, all.cols() + vk.cols());
      all.rightCols(vk.cols()) = vk;
    }
    const double minimal = static_cast<double>(c.ambient_dim - numerical_rank(all));
    out.push_back({"cgns.multiplicative.isometric_powers", "max_k |(V^k Z0)*(V^k Z0) - I|", iso, tol,
                   "multiplicative dynamics"});
    out.push_back({"cgns.multiplicative.minimal", "ambient dim minus rank of the V^k Z0 ranges", minimal, 0.0,
                   "minimal unitary dilation"});
    out.push_back({"cgns.multiplicative.range_equality", "rank defects of V^k Z0 H_phi versus Z_k L_k", range, 0.0,
                   "multiplicative dynamics"});
    out.push_back({"cgns.multiplicative.v_unitary", "max_n |V_n V_n* - I|", vu, tol, "multiplicative dynamics"});
    if (min_singular_value(t.phi.superop()) > 1e-8) {
      out.push_back({"cgns.automorphism.collapse", "|ambient dim - dim H_phi|",
                     std::abs(static_cast<double>(c.ambient_dim - t.gns.dim)), 0.0, "automorphism collapse"});
    }
  }
  if (t.gns.state.faithful()) {
    CMatrix stacked(c.ambient_dim * c.ambient_dim, ta);
    for (Eigen::Index i = 0; i < ta; ++i) stacked.col(i) = vec(c.pi_basis[i]);
    out.push_back({"cgns.faithful_injective", "dim ker pi_inf", static_cast<double>(ta - numerical_rank(stacked)), 0.0,
                   "faithful representation"});
  }
  std::sort(out.begin(), out.end(), [](const Check& x, const Check& y) { return x.id < y.id; });
  return out;
}

namespace {

// Columns d_0(x_{w_0}) ... d_n(x_{w_n}) Omega over every word w; when
// `orthonormalize` is set only a basis of the span is kept at each stage.
CMatrix monomial_vectors(const CgnsData& c, std::size_t n, bool orthonormalize) {
  c.require_budget(n);
  const Algebra& alg = c.tower->algebra;
  const Eigen::Index ta = alg.total_dim();
  CMatrix cols = c.omega;
  for (std::size_t j = n + 1; j-- > 0;) {
    std::vector<CMatrix> partials;
    for (Eigen::Index i = 0; i < ta; ++i) partials.push_back(c.partial(j, alg.basis_element(i)));
    if (!orthonormalize && static_cast<double>(cols.cols()) * ta > 2e5) {
      throw Error(ErrorKind::DimensionCap, "too many monomial generators");
    }
    CMatrix next(c.ambient_dim, cols.cols() * ta);
    for (Eigen::Index i = 0; i < ta; ++i) next.middleCols(i * cols.cols(), cols.cols()) = partials[i] * cols;
    cols = orthonormalize ? column_span(next) : next;
  }
  return cols;
}

}  // namespace

Eigen::Index cyclic_span_dimension(const CgnsData& c, std::size_t n) {
  if (n > c.budget) {
    throw Error(ErrorKind::BudgetExceeded, "span level " + std::to_string(n) + " exceeds depth " +
                                               std::to_string(c.budget));
  }
  return monomial_vectors(c, n, true).cols();
}

Equivalence unitary_equivalence(const CgnsData& c1, const CgnsData& c2, double tol) {
  if (c1.ambient_dim != c2.ambient_dim || c1.budget != c2.budget ||
      !(c1.tower->algebra == c2.tower->algebra)) {
    throw Error(ErrorKind::NotEquivalent, "truncations differ in dimension, depth or algebra");
  }
  const std::size_t n = c1.budget;
  const CMatrix g1 = monomial_vectors(c1, n, false);
  const CMatrix g2 = monomial_vectors(c2, n, false);
  Equivalence eq;
  eq.W = solve_least_squares(g1.adjoint(), g2.adjoint()).adjoint();
  const CMatrix& w = eq.W;
  const Algebra& alg = c1.tower->algebra;
  double inter = 0.0;
  for (Eigen::Index i = 0; i < alg.total_dim(); ++i) {
    bump(inter, fro_norm(w * c1.pi_basis[i] - c2.pi_basis[i] * w));
  }
  const CMatrix& top = c1.Z[n - 1];
  const std::string th = "CGNS uniqueness";
  eq.checks = {
      {"equivalence.generators", "|W G1 - G2| / |G2|", fro_norm(w * g1 - g2) / std::max(1.0, fro_norm(g2)), tol, th},
      {"equivalence.omega", "|W Omega1 - Omega2|", (w * c1.omega - c2.omega).norm(), tol, th},
      {"equivalence.pi", "max |W pi1(a) - pi2(a) W|", inter, tol, th},
      {"equivalence.unitary", "|W*W - I|", distance_to_identity(w.adjoint() * w), tol, th},
      {"equivalence.v", "|W V1 - V2 W| on the range of Z_{N-1}", fro_norm(w * c1.v_partial * top - c2.v_partial * w * top),
       tol, th},
      {"equivalence.v_star", "|W V1* - V2* W|", fro_norm(w * c1.v_star - c2.v_star * w), tol, th},
  };
  for (const auto& ch : eq.checks) {
    if (!ch.pass()) {
      throw Error(ErrorKind::NotEquivalent, ch.id + " residual " + std::to_string(ch.residual));
    }
  }
  return eq;
}

NormComparison norm_compare(const CgnsData& c, const Element& a, double tol) {
  const Tower& t = *c.tower;
  if (!is_homomorphism(t.phi)) throw Error(ErrorKind::PreconditionFailed, "Phi is not multiplicative");
  const auto reps = t.gns.rep_basis();
  const Subspace comm = commutant(reps);
  CMatrix orbit(t.gns.dim, comm.dim());
  for (Eigen::Index k = 0; k < comm.dim(); ++k) orbit.col(k) = comm.op(k) * t.gns.omega;
  if (numerical_rank(orbit) != t.gns.dim) {
    throw Error(ErrorKind::PreconditionFailed, "Omega_phi is not cyclic for the commutant of pi_phi(A)");
  }

  NormComparison r;
  const CMatrix pinf = c.pi(a);
  const CMatrix pphi = t.gns.rep(a);
  r.norm_inf = op_norm(pinf);
  r.norm_phi = op_norm(pphi);
  r.zero_equivalent = (r.norm_inf <= tol) == (r.norm_phi <= tol);

  // Kernels of a -> pi_inf(a) and a -> pi_phi(a) must coincide.
  const Algebra& alg = t.algebra;
  const Eigen::Index ta = alg.total_dim();
  CMatrix s_inf(c.ambient_dim * c.ambient_dim, ta), s_phi(t.gns.dim * t.gns.dim, ta);
  for (Eigen::Index i = 0; i < ta; ++i) {
    s_inf.col(i) = vec(c.pi_basis[i]);
    s_phi.col(i) = vec(reps[i]);
  }
  const CMatrix k_inf = null_space(s_inf);
  const CMatrix k_phi = null_space(s_phi);
  double kernel = std::abs(static_cast<double>(k_inf.cols() - k_phi.cols()));
  if (k_inf.cols() > 0) kernel += fro_norm(s_phi * k_inf);

  const Subspace alg_inf = generated_star_algebra(c.pi_basis);
  CMatrix applied(c.ambient_dim, alg_inf.dim());
  for (Eigen::Index k = 0; k < alg_inf.dim(); ++k) applied.col(k) = alg_inf.op(k) * c.omega;
  r.separating_margin = min_singular_value(applied);

  r.checks = {
      {"norm_compare.kernel", "kernels of pi_inf and pi_phi coincide", kernel, tol, "norm equality lemma"},
      {"norm_compare.norm_equality", "| |pi_inf(a)| - |pi_phi(a)| |", std::abs(r.norm_inf - r.norm_phi), tol,
       "norm equality lemma"},
      {"norm_compare.separating", "min singular value of X -> X Omega_inf above 1e-6",
       r.separating_margin > 1e-6 ? 0.0 : 1.0, 0.0, "separating vector"},
      {"norm_compare.zero_equivalence", "pi_inf(a) = 0 iff pi_phi(a) = 0", r.zero_equivalent ? 0.0 : 1.0, 0.0,
       "norm equality lemma"},
  };
  return r;
}

}  // namespace cstar
