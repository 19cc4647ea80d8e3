#include "cstar/dilation.hpp"

#include <algorithm>
#include <cstdlib>
#include <random>
#include <string>

#include "cstar/error.hpp"

namespace cstar {

namespace {

void bump(double& slot, double value) { slot = std::max(slot, value); }

CMatrix combine_ops(const Subspace& s, const CVector& c) {
  CMatrix out = CMatrix::Zero(s.operator_dim, s.operator_dim);
  for (Eigen::Index k = 0; k < c.size(); ++k) out += c(k) * s.op(k);
  return out;
}

Subspace double_commutant(const std::vector<CMatrix>& ops) { return commutant(commutant(ops).ops()); }

}  // namespace

CMatrix DilationData::embed(const CMatrix& a) const {
  const CVector c = solve_least_squares(rep_stack_, vec(a));
  const auto& pis = cgns.pi_basis;
  CMatrix out = CMatrix::Zero(cgns.ambient_dim, cgns.ambient_dim);
  for (Eigen::Index i = 0; i < c.size(); ++i) out += c(i) * pis[i];
  return out;
}

CMatrix DilationData::dynamics(const CMatrix& x, int k) const {
  const auto steps = static_cast<std::size_t>(std::abs(k));
  if (steps > budget) {
    throw Error(ErrorKind::BudgetExceeded, std::to_string(steps) + " dilated steps exceed budget " +
                                               std::to_string(budget));
  }
  const CMatrix& v = cgns.v_partial;
  CMatrix out = x;
  for (std::size_t j = 0; j < steps; ++j) out = k > 0 ? CMatrix(v.adjoint() * out * v) : CMatrix(v * out * v.adjoint());
  return out;
}

DilationData build_dilation(const CgnsData& c, const UcpMap& adjoint, std::optional<std::size_t> budget, double tol) {
  const Tower& t = *c.tower;
  const Algebra& alg = t.algebra;
  if (!is_homomorphism(t.phi)) throw Error(ErrorKind::NotMultiplicative, "reversible dilation needs a homomorphism");
  const double adj = adjunction_residual(t.phi, adjoint, t.gns.state);
  if (adj > tol) throw Error(ErrorKind::NoAdjoint, "adjunction residual " + std::to_string(adj));
  if (!c.v_total) throw Error(ErrorKind::Inconsistent, "multiplicative tower did not collapse");

  DilationData d(c, adjoint);
  d.budget = budget.value_or(c.budget);
  d.w = induce_w_system(t.gns, t.U);
  const auto reps = t.gns.rep_basis();
  d.rep_stack_.resize(t.gns.dim * t.gns.dim, alg.total_dim());
  for (Eigen::Index i = 0; i < alg.total_dim(); ++i) d.rep_stack_.col(i) = vec(reps[i]);

  std::vector<CMatrix> gens;
  for (std::size_t k = 0; k <= d.budget; ++k) {
    for (Eigen::Index i = 0; i < alg.total_dim(); ++i) gens.push_back(c.partial(k, alg.basis_element(i)));
  }
  const Subspace generated = generated_star_algebra(gens);
  d.big_algebra = double_commutant(generated.ops());
  const Subspace& big = d.big_algebra;

  double e1 = 0, e2 = 0, e3 = 0, ei = 0, erange = 0, epos = 0, ihom = 0, icontained = 0, inv = 0, aut = 0;
  UcpMap adj_power = identity_map(alg);
  for (std::size_t k = 0; k <= d.budget; ++k) {
    for (Eigen::Index i = 0; i < alg.total_dim(); ++i) {
      const Element x = alg.basis_element(i);
      bump(e1, fro_norm(d.expectation(c.partial(k, x)) - t.gns.rep(adj_power(x))));
    }
    adj_power = compose(adjoint, adj_power);
  }
  const auto big_ops = big.ops();
  for (const auto& x : big_ops) {
    const CMatrix ex = d.expectation(x);
    for (Eigen::Index i = 0; i < alg.total_dim(); ++i) {
      bump(e2, fro_norm(d.expectation(c.pi_basis[i] * x) - reps[i] * ex));
    }
    bump(e3, std::abs(t.gns.omega.dot(ex * t.gns.omega) - d.phi_hat(x)));
    bump(erange, d.w.vn_basis.membership_residual(vec(ex)) * std::max(1.0, fro_norm(ex)));
    bump(inv, std::abs(d.phi_hat(d.dynamics(x, 1)) - d.phi_hat(x)));
    bump(aut, big.membership_residual(vec(d.dynamics(x, 1))));
  }
  // Positivity of E on seeded random elements of the big algebra.
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix x = combine_ops(big, random_complex(big.dim(), 1, rng).col(0));
    const HermEig e = herm_eig(hermitize(d.expectation(x.adjoint() * x)), 1.0);
    bump(epos, std::max(0.0, -e.eigenvalues.minCoeff()) / std::max(1.0, fro_norm(x) * fro_norm(x)));
  }
  const auto vn_ops = d.w.vn_basis.ops();
  for (const auto& a : vn_ops) {
    const CMatrix ia = d.embed(a);
    bump(ei, fro_norm(d.expectation(ia) - a));
    bump(icontained, big.membership_residual(vec(ia)));
    for (const auto& b : vn_ops) bump(ihom, fro_norm(d.embed(a * b) - ia * d.embed(b)));
  }

  const std::string prop = "reversible dilation";
  d.certificates = {
      {"dilation.automorphism", "Phi_hat maps the big algebra into itself", aut, tol, prop},
      {"dilation.double_commutant", "dim of generated algebra equals its double commutant",
       std::abs(static_cast<double>(generated.dim() - big.dim())), 0.0, "double commutant"},
      {"dilation.e_of_i", "max |E(i(A)) - A|", ei, tol, "conditional expectation"},
      {"dilation.e_positive", "negative part of E(X*X) over seeded X", epos, tol, "conditional expectation"},
      {"dilation.e_range", "E maps into pi_phi(A)''", erange, tol, "conditional expectation"},
      {"dilation.e_unital", "|E(1) - 1|", fro_norm(d.expectation(identity(c.ambient_dim)) - identity(t.gns.dim)), tol,
       "conditional expectation"},
      {"dilation.econd1", "max_{k<=budget} |E(V^k pi(a) V^{k*}) - pi_phi(Phi#^k(a))|", e1, tol,
       "expectation condition 1"},
      {"dilation.econd2", "max |E(pi_inf(a) X) - pi_phi(a) E(X)|", e2, tol, "expectation condition 2"},
      {"dilation.econd3", "max |<Omega, E(X) Omega> - <Omega_inf, X Omega_inf>|", e3, tol,
       "expectation condition 3"},
      {"dilation.i_homomorphism", "max |i(AB) - i(A) i(B)|", ihom, tol, "embedding i"},
      {"dilation.i_in_big_algebra", "i(pi_phi(A)'') inside the big algebra", icontained, tol, "embedding i"},
      {"dilation.phi_hat_invariant", "max |phi_hat(Phi_hat(X)) - phi_hat(X)|", inv, tol, prop},
  };
  return d;
}

Checks verify_dilation_diagram(const DilationData& d, std::size_t n, double tol) {
  if (n > d.budget) {
    throw Error(ErrorKind::BudgetExceeded, "diagram step " + std::to_string(n) + " exceeds budget " +
                                               std::to_string(d.budget));
  }
  double diag = 0, inv = 0, factor = 0;
  for (const auto& a : d.w.vn_basis.ops()) {
    CMatrix expected = a;
    for (std::size_t j = 0; j < n; ++j) expected = d.w.apply(expected);
    bump(diag, fro_norm(d.expectation(d.dynamics(d.embed(a), static_cast<int>(n))) - expected));
  }
  for (const auto& x : d.big_algebra.ops()) {
    bump(inv, std::abs(d.phi_hat(d.dynamics(x, static_cast<int>(n))) - d.phi_hat(x)));
    bump(factor, std::abs(d.phi_hat(x) - d.w.state(d.expectation(x))));
  }
  const std::string anchor = "dilation diagram";
  return {
      {"diagram.expectation", "max |E(Phi_hat^n(i(A))) - Phi_.^n(A)|", diag, tol, anchor},
      {"diagram.state_factor", "max |phi_hat(X) - phi_.(E(X))|", factor, tol, anchor},
      {"diagram.state_invariant", "max |phi_hat(Phi_hat^n(X)) - phi_hat(X)|", inv, tol, anchor},
  };
}

MinimalityReport minimality_and_separating(const DilationData& d, const CVector* vector, double tol) {
  std::vector<CMatrix> gens;
  const auto budget = static_cast<int>(d.budget);
  for (const auto& a : d.w.vn_basis.ops()) {
    const CMatrix ia = d.embed(a);
    for (int k = -budget; k <= budget; ++k) gens.push_back(d.dynamics(ia, k));
  }
  const Subspace gen = double_commutant(generated_star_algebra(gens).ops());
  MinimalityReport r;
  r.generated_dim = gen.dim();
  r.big_dim = d.big_algebra.dim();
  double span = std::abs(static_cast<double>(r.generated_dim - r.big_dim));
  for (Eigen::Index k = 0; k < gen.dim(); ++k) bump(span, d.big_algebra.membership_residual(gen.basis.col(k)));

  const CVector& v = vector ? *vector : d.cgns.omega;
  CMatrix applied(d.cgns.ambient_dim, d.big_algebra.dim());
  for (Eigen::Index k = 0; k < d.big_algebra.dim(); ++k) applied.col(k) = d.big_algebra.op(k) * v;
  r.separating_margin = min_singular_value(applied);
  r.checks = {
      {"minimality.span", "generated algebra of Phi_hat^k(i(A)) equals the big algebra", span, tol,
       "minimal dilation"},
      {"minimality.separating", "min singular value of X -> X Omega_inf is at most 1e-6",
       r.separating_margin > 1e-6 ? 0.0 : 1.0, 0.0, "separating vector"},
  };
  return r;
}

CVector non_separating_vector(const DilationData& d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix h = CMatrix::Zero(d.cgns.ambient_dim, d.cgns.ambient_dim);
  for (const auto& b : d.big_algebra.ops()) h += gauss(rng) * (b + b.adjoint());
  const HermEig e = herm_eig(hermitize(h), 1.0);
  return e.eigenvectors.col(0);
}

SectionError::SectionError(Eigen::Index witness, double residual)
    : Error(ErrorKind::NotASection, "Phi(Psi(x)) != x, max residual " + std::to_string(residual) +
                                        " at matrix unit " + std::to_string(witness)),
      witness_(witness),
      residual_(residual) {}

RightInverseReport right_inverse_analyzer(const UcpMap& phi, const UcpMap& psi, const State& state, std::size_t depth,
                                          double tol) {
  const Algebra& alg = phi.algebra();
  if (!(psi.algebra() == alg) || !(state.algebra() == alg)) {
    throw Error(ErrorKind::AlgebraMismatch, "maps and state must share the algebra");
  }
  RightInverseReport r;
  for (Eigen::Index i = 0; i < alg.total_dim(); ++i) {
    const Element x = alg.basis_element(i);
    const double res = (phi(psi(x)) - x).norm();
    if (res > r.section_residual) {
      r.section_residual = res;
      r.witness = i;
    }
  }
  if (r.section_residual > tol) throw SectionError(r.witness, r.section_residual);

  const Subspace dom = multiplicative_domain(phi);
  double domain = 0, kadison = 0;
  for (Eigen::Index i = 0; i < alg.total_dim(); ++i) {
    const Element y = psi(alg.basis_element(i));
    bump(domain, dom.membership_residual(alg.coords(y)));
    bump(kadison, kadison_defect(phi, y, 1e-8).norm());
  }
  const double adj = adjunction_residual(phi, psi, state);
  const double margin = min_singular_value(psi.superop());

  const std::string anchor = "right inverse";
  r.checks = {
      {"right_inverse.adjunction", "max |phi(a Psi(b)) - phi(Phi(a) b)|", adj, tol, anchor},
      {"right_inverse.domain", "Psi(A) inside D_Phi", domain, tol, anchor},
      {"right_inverse.invertible", "Psi injective: smallest singular value above 1e-8", margin > 1e-8 ? 0.0 : 1.0, 0.0,
       anchor},
      {"right_inverse.kadison", "max |Phi(Psi(a)* Psi(a)) - Phi(Psi(a))* Phi(Psi(a))|", kadison, tol, anchor},
      {"right_inverse.section", "max |Phi(Psi(a)) - a|", r.section_residual, tol, anchor},
  };
  if (state.faithful()) {
    double hom = 0;
    for (Eigen::Index i = 0; i < alg.total_dim(); ++i) {
      for (Eigen::Index k = 0; k < alg.total_dim(); ++k) {
        const Element a = alg.basis_element(i), b = alg.basis_element(k);
        bump(hom, (psi(a * b) - psi(a) * psi(b)).norm());
      }
    }
    r.checks.push_back({"right_inverse.homomorphism", "max |Psi(ab) - Psi(a) Psi(b)|", hom, tol, anchor});
  }

  if (all_pass(r.checks) && state.faithful()) {
    const UcpMap psi_adj = phi_adjoint(psi, state, tol);
    const CgnsData c = cgns_operators(build_tower(psi, state, depth));
    const DilationData d = build_dilation(c, psi_adj, std::nullopt, tol);
    for (auto ch : d.certificates) {
      ch.id = "right_inverse." + ch.id;
      r.checks.push_back(ch);
    }
    r.dilation_built = true;
  }
  std::sort(r.checks.begin(), r.checks.end(), [](const Check& x, const Check& y) { return x.id < y.id; });
  return r;
}

}  // namespace cstar
