#include "cstar/gns.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "cstar/error.hpp"

namespace cstar {

namespace {

Element block_function(const Element& rho, double (*f)(double)) {
  std::vector<CMatrix> out;
  for (const auto& b : rho.blocks()) out.push_back(herm_function(b, f));
  return Element(std::move(out));
}

double inv(double x) { return 1.0 / x; }
double sqrt_pos(double x) { return std::sqrt(std::max(x, 0.0)); }
double inv_sqrt(double x) { return 1.0 / std::sqrt(x); }

}  // namespace

State::State(Algebra algebra, std::vector<CMatrix> densities, double tol)
    : algebra_(std::move(algebra)), densities_(std::move(densities)) {
  if (densities_.size() != algebra_.num_blocks()) {
    throw Error(ErrorKind::InvalidState, "state needs one density block per algebra block");
  }
  double total = 0.0;
  std::vector<CMatrix> support;
  faithful_ = true;
  for (std::size_t b = 0; b < densities_.size(); ++b) {
    const Eigen::Index d = algebra_.block_dims()[b];
    CMatrix& rho = densities_[b];
    if (rho.rows() != d || rho.cols() != d) {
      throw Error(ErrorKind::InvalidState, "density block " + std::to_string(b) + " has the wrong shape");
    }
    if (!rho.allFinite()) throw Error(ErrorKind::InvalidState, "density block " + std::to_string(b) + " is not finite");
    if (fro_norm(rho - rho.adjoint()) > tol * std::max(1.0, fro_norm(rho))) {
      throw Error(ErrorKind::InvalidState, "density block " + std::to_string(b) + " is not Hermitian");
    }
    rho = hermitize(rho);
    const HermEig e = herm_eig(rho, 1.0);
    if (e.eigenvalues.minCoeff() < -tol) {
      throw Error(ErrorKind::InvalidState, "density block " + std::to_string(b) + " has eigenvalue " +
                                               std::to_string(e.eigenvalues.minCoeff()));
    }
    CMatrix p = CMatrix::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
      if (e.eigenvalues(k) > tol) {
        p += e.eigenvectors.col(k) * e.eigenvectors.col(k).adjoint();
      } else {
        faithful_ = false;
      }
    }
    support.push_back(p);
    total += rho.trace().real();
  }
  if (std::abs(total - 1.0) > tol) {
    throw Error(ErrorKind::InvalidState, "densities have total trace " + std::to_string(total));
  }
  support_ = Element(std::move(support));
}

State State::tracial(const Algebra& algebra) {
  const double n = static_cast<double>(algebra.rep_dim());
  std::vector<CMatrix> rho;
  for (auto d : algebra.block_dims()) rho.push_back(identity(d) / n);
  return State(algebra, std::move(rho));
}

State State::random(const Algebra& algebra, std::uint64_t seed, bool faithful) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> weight(0.2, 1.0);
  const auto& dims = algebra.block_dims();
  std::vector<CMatrix> rho;
  double total = 0.0;
  for (std::size_t b = 0; b < dims.size(); ++b) {
    const bool deficient = !faithful && b + 1 == dims.size();
    const Eigen::Index cols = deficient ? dims[b] - 1 : dims[b];
    CMatrix m = CMatrix::Zero(dims[b], dims[b]);
    if (cols > 0) {
      const CMatrix g = random_complex(dims[b], cols, rng);
      m = g * g.adjoint();
      m *= weight(rng) / m.trace().real();
    }
    total += m.trace().real();
    rho.push_back(m);
  }
  if (total <= 0.0) throw Error(ErrorKind::InvalidState, "random state has no weight");
  for (auto& m : rho) m /= total;
  return State(algebra, std::move(rho));
}

cplx State::operator()(const Element& a) const {
  algebra_.require(a);
  cplx v = 0.0;
  for (std::size_t b = 0; b < densities_.size(); ++b) v += (densities_[b] * a.block(b)).trace();
  return v;
}

Eigen::RowVectorXcd State::functional() const {
  Eigen::RowVectorXcd f(algebra_.total_dim());
  for (Eigen::Index i = 0; i < algebra_.total_dim(); ++i) {
    const auto u = algebra_.unit_of(i);
    f(i) = densities_[u.block](u.col, u.row);
  }
  return f;
}

State invariant_state(const UcpMap& phi) {
  const Algebra& alg = phi.algebra();
  const CMatrix d = trace_dual(phi).superop;
  const CMatrix shifted = d - identity(alg.total_dim());
  const CMatrix right = null_space(shifted);
  const CMatrix left = null_space(shifted.adjoint());
  if (right.cols() == 0 || right.cols() != left.cols()) {
    throw Error(ErrorKind::InvalidState, "fixed space of the dual map could not be isolated");
  }
  const CMatrix proj = right * (left.adjoint() * right).inverse() * left.adjoint();
  const Element rho = alg.element(proj * alg.coords(State::tracial(alg).density()));
  std::vector<CMatrix> blocks;
  double total = 0.0;
  for (const auto& b : rho.blocks()) {
    blocks.push_back(hermitize(b));
    total += b.trace().real();
  }
  for (auto& b : blocks) b /= total;
  return State(alg, std::move(blocks), 1e-8);
}

CMatrix GnsData::rep(const Element& a) const {
  return quotient.project * algebra.left_multiplication(a) * quotient.lift;
}

std::vector<CMatrix> GnsData::rep_basis() const {
  std::vector<CMatrix> out;
  for (Eigen::Index i = 0; i < algebra.total_dim(); ++i) out.push_back(rep(algebra.basis_element(i)));
  return out;
}

GnsData gns_construct(const Algebra& algebra, const State& phi, double tol) {
  if (!(phi.algebra() == algebra)) throw Error(ErrorKind::AlgebraMismatch, "state lives on another algebra");
  const Eigen::Index t = algebra.total_dim();
  const Eigen::RowVectorXcd f = phi.functional();
  CMatrix gram = CMatrix::Zero(t, t);
  for (Eigen::Index i = 0; i < t; ++i) {
    const Eigen::Index is = algebra.unit_star(i);
    for (Eigen::Index j = 0; j < t; ++j) {
      if (auto p = algebra.unit_product(is, j)) gram(i, j) = f(*p);
    }
  }
  GnsData g{algebra, phi, gram_quotient(gram, tol), 0, {}};
  g.dim = g.quotient.rank;
  if (g.dim == 0) throw Error(ErrorKind::DegenerateState, "GNS space is zero-dimensional");
  g.omega = g.embed(algebra.unit());
  return g;
}

Checks verify_gns(const GnsData& g, double tol) {
  const Algebra& alg = g.algebra;
  const Eigen::Index t = alg.total_dim();
  const auto reps = g.rep_basis();
  const CMatrix null = g.quotient.null_projector();
  double repro = 0.0, mult = 0.0, star = 0.0, welldef = 0.0;
  CMatrix orbit(g.dim, t);
  for (Eigen::Index i = 0; i < t; ++i) {
    const Element x = alg.basis_element(i);
    repro = std::max(repro, std::abs(g.state(x) - g.omega.dot(reps[i] * g.omega)));
    star = std::max(star, fro_norm(reps[alg.unit_star(i)] - reps[i].adjoint()));
    welldef = std::max(welldef, fro_norm(g.quotient.project * alg.left_multiplication(x) * null));
    orbit.col(i) = reps[i] * g.omega;
    for (Eigen::Index k = 0; k < t; ++k) {
      CMatrix prod = reps[i] * reps[k];
      if (auto p = alg.unit_product(i, k)) prod -= reps[*p];
      mult = std::max(mult, fro_norm(prod));
    }
  }
  const double cyc = static_cast<double>(g.dim - numerical_rank(orbit));
  return {
      {"gns.cyclicity", "dim H_phi minus rank of {pi(a) Omega}", cyc, 0.0, "GNS representation"},
      {"gns.multiplicative", "max |pi(x_i) pi(x_k) - pi(x_i x_k)|", mult, tol, "GNS representation"},
      {"gns.reproduction", "max |phi(a) - <Omega, pi(a) Omega>|", repro, tol, "GNS representation"},
      {"gns.star", "max |pi(a*) - pi(a)*|", star, tol, "GNS representation"},
      {"gns.well_defined", "max |T L_a P_null|", welldef, tol, "GNS quotient"},
  };
}

Check check_invariance(const UcpMap& phi, const State& state, double tol) {
  if (!(phi.algebra() == state.algebra())) throw Error(ErrorKind::AlgebraMismatch, "state and map differ");
  const Eigen::RowVectorXcd f = state.functional();
  const Eigen::RowVectorXcd diff = f * phi.superop() - f;
  const double r = diff.size() ? diff.cwiseAbs().maxCoeff() : 0.0;
  return {"invariance", "max over matrix units |phi(Phi(a)) - phi(a)|", r, tol, "invariant state"};
}

CMatrix transfer_contraction(const GnsData& g, const UcpMap& phi, double tol) {
  const Check inv = check_invariance(phi, g.state, tol);
  if (!inv.pass()) {
    throw Error(ErrorKind::NotInvariant, "phi o Phi != phi, residual " + std::to_string(inv.residual));
  }
  const CMatrix ts = g.quotient.project * phi.superop();
  const CMatrix u = ts * g.quotient.lift;
  const double r = fro_norm(u * g.quotient.project - ts);
  if (r > 1e-8 * std::max(1.0, fro_norm(ts))) {
    throw Error(ErrorKind::NotInvariant, "Phi does not preserve the GNS kernel, residual " + std::to_string(r));
  }
  return u;
}

Checks verify_transfer(const GnsData& g, const UcpMap& phi, const CMatrix& u, double tol) {
  const Algebra& alg = g.algebra;
  double eq1 = 0.0;
  for (Eigen::Index i = 0; i < alg.total_dim(); ++i) {
    const Element x = alg.basis_element(i);
    eq1 = std::max(eq1, (u * g.embed(x) - g.embed(phi(x))).norm());
  }
  return {
      {"transfer.contraction", "max(0, |U| - 1)", std::max(0.0, op_norm(u) - 1.0), tol, "transfer contraction"},
      {"transfer.intertwines", "max |U embed(a) - embed(Phi(a))|", eq1, tol, "transfer contraction"},
      {"transfer.omega_fixed", "|U Omega - Omega|", (u * g.omega - g.omega).norm(), tol, "transfer contraction"},
  };
}

CVector WSystem::coords_of(const CMatrix& x) const { return vn_basis.basis.adjoint() * vec(x); }

CMatrix WSystem::apply(const CMatrix& x) const {
  const CVector y = phi_dot * coords_of(x);
  CMatrix out = CMatrix::Zero(vn_basis.operator_dim, vn_basis.operator_dim);
  for (Eigen::Index k = 0; k < y.size(); ++k) out += y(k) * vn_basis.op(k);
  return out;
}

WSystem induce_w_system(const GnsData& g, const CMatrix& u, double tol) {
  const auto reps = g.rep_basis();
  const Subspace comm = commutant(reps, tol);
  CMatrix orbit(g.dim, comm.dim());
  for (Eigen::Index k = 0; k < comm.dim(); ++k) orbit.col(k) = comm.op(k) * g.omega;
  if (numerical_rank(orbit, tol) != g.dim) {
    throw Error(ErrorKind::NotSeparating, "Omega is not cyclic for the commutant of pi(A)");
  }
  WSystem w;
  w.vn_basis = commutant(comm.ops(), tol);
  const Eigen::Index n = w.vn_basis.dim();
  CMatrix applied(g.dim, n);
  for (Eigen::Index k = 0; k < n; ++k) applied.col(k) = w.vn_basis.op(k) * g.omega;
  w.separating_margin = min_singular_value(applied);
  if (w.separating_margin <= tol) {
    throw Error(ErrorKind::NotSeparating, "X -> X Omega has a kernel on pi(A)''");
  }
  w.phi_dot.resize(n, n);
  w.state_dot.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const CVector target = u * applied.col(k);
    w.phi_dot.col(k) = solve_least_squares(applied, target);
    w.state_dot(k) = g.omega.dot(applied.col(k));
  }
  return w;
}

CMatrix ModularPair::delta_it(double t) const {
  return herm_function(delta, [t](double x) { return std::exp(cplx(0.0, t * std::log(x))); });
}

CMatrix ModularPair::delta_sqrt() const { return psd_sqrt(delta); }

RMatrix realify_antilinear(const CMatrix& m) {
  const Eigen::Index r = m.rows(), c = m.cols();
  RMatrix out(2 * r, 2 * c);
  out << m.real(), m.imag(), m.imag(), -m.real();
  return out;
}

RMatrix realify_linear(const CMatrix& a) {
  const Eigen::Index r = a.rows(), c = a.cols();
  RMatrix out(2 * r, 2 * c);
  out << a.real(), -a.imag(), a.imag(), a.real();
  return out;
}

ModularPair modular_pair(const GnsData& g, double tol) {
  const Algebra& alg = g.algebra;
  if (!g.state.faithful() || g.dim != alg.total_dim()) {
    throw Error(ErrorKind::NotFaithful, "modular operators need a faithful state");
  }
  const Element rho = g.state.density();
  const CMatrix& t = g.quotient.project;
  const CMatrix& lift = g.quotient.lift;
  const CMatrix p = alg.star_permutation();
  const CMatrix lift_bar = lift.conjugate();

  ModularPair m;
  const CMatrix delta_raw = t * alg.sandwich(rho, block_function(rho, inv)) * lift;
  m.delta = hermitize(delta_raw);
  m.j_matrix = t * alg.sandwich(block_function(rho, sqrt_pos), block_function(rho, inv_sqrt)) * p * lift_bar;
  m.s_matrix = t * p * lift_bar;

  const double scale = std::max(1.0, op_norm(m.delta));
  const CMatrix delta_inv = herm_function(m.delta, inv);
  const CMatrix delta_half = m.delta_sqrt();
  const CMatrix id = identity(g.dim);

  double s_action = 0.0;
  for (Eigen::Index i = 0; i < alg.total_dim(); ++i) {
    const Element x = alg.basis_element(i);
    s_action = std::max(s_action, (m.apply_s(g.embed(x)) - g.embed(x.star())).norm());
  }

  // Independent route: polar decomposition of the realified antilinear S.
  const RMatrix rs = realify_antilinear(m.s_matrix);
  Eigen::JacobiSVD<RMatrix> svd(rs, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RMatrix polar_j = svd.matrixU() * svd.matrixV().transpose();
  const RMatrix polar_abs = svd.matrixV() * svd.singularValues().asDiagonal() * svd.matrixV().transpose();
  const double oracle_j = (polar_j - realify_antilinear(m.j_matrix)).norm();
  const double oracle_abs = (polar_abs - realify_linear(delta_half)).norm() / std::sqrt(scale);

  const HermEig de = herm_eig(m.delta, 1.0);
  m.certificates = {
      {"modular.delta_hermitian", "|Delta - Delta*| / |Delta|", fro_norm(delta_raw - delta_raw.adjoint()) / scale, tol,
       "modular operator"},
      {"modular.delta_positive", "negative part of min eigenvalue of Delta", std::max(0.0, -de.eigenvalues.minCoeff()),
       tol, "modular operator"},
      {"modular.j_delta_j", "|J Delta J - Delta^{-1}| / |Delta^{-1}|",
       fro_norm(m.j_matrix * m.delta.conjugate() * m.j_matrix.conjugate() - delta_inv) /
           std::max(1.0, op_norm(delta_inv)),
       tol, "modular conjugation"},
      {"modular.j_involution", "|J^2 - I|", fro_norm(m.j_matrix * m.j_matrix.conjugate() - id), tol,
       "modular conjugation"},
      {"modular.oracle_abs", "realified |S| vs Delta^{1/2}", oracle_abs, tol, "modular operator"},
      {"modular.oracle_j", "realified polar part of S vs J", oracle_j, tol, "modular conjugation"},
      {"modular.s_action", "max |S embed(a) - embed(a*)|", s_action / std::sqrt(scale), tol, "Tomita operator"},
      {"modular.s_polar", "|S - J Delta^{1/2}|", fro_norm(m.s_matrix - m.j_matrix * delta_half.conjugate()) /
                                                      std::sqrt(scale),
       tol, "Tomita operator"},
  };
  return m;
}

Checks modular_commutation_check(const CMatrix& u, const ModularPair& m, const std::vector<double>& t_samples,
                                 double tol) {
  const double scale = std::max(1.0, op_norm(m.delta));
  Checks out;
  out.push_back({"modular_commutation.delta", "|U Delta - Delta U| / max(1, |Delta|)",
                 fro_norm(u * m.delta - m.delta * u) / scale, tol, "modular commutation"});
  for (std::size_t k = 0; k < t_samples.size(); ++k) {
    const CMatrix d = m.delta_it(t_samples[k]);
    out.push_back({"modular_commutation.delta_it." + std::to_string(k),
                   "|U Delta^{it} - Delta^{it} U| at t = " + std::to_string(t_samples[k]),
                   fro_norm(u * d - d * u), tol, "modular commutation"});
  }
  out.push_back({"modular_commutation.j", "|UJ - JU|", fro_norm(u * m.j_matrix - m.j_matrix * u.conjugate()), tol,
                 "modular commutation"});
  return out;
}

UcpMap phi_adjoint(const UcpMap& phi, const State& state, double tol) {
  const Algebra& alg = phi.algebra();
  if (!state.faithful()) throw Error(ErrorKind::NotFaithful, "phi-adjoint needs a faithful state");
  const Check invariance = check_invariance(phi, state, tol);
  if (!invariance.pass()) {
    throw Error(ErrorKind::NotInvariant, "residual " + std::to_string(invariance.residual));
  }

  const Element rho = state.density();
  const CMatrix candidate = alg.right_multiplication(block_function(rho, inv)) * trace_dual(phi).superop *
                            alg.right_multiplication(rho);
  UcpMap adj = [&] {
    try {
      return verify_ucp({alg, candidate}, tol);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NotCP || e.kind() == ErrorKind::NotUnital) {
        throw Error(ErrorKind::ModularObstruction, std::string("candidate adjoint is not ucp (") + e.what() + ")");
      }
      throw;
    }
  }();

  const GnsData g = gns_construct(alg, state);
  const CMatrix u = transfer_contraction(g, phi, tol);
  const Checks comm = modular_commutation_check(u, modular_pair(g, tol), {0.5, 1.0, 1.4142135623730951}, 1e-8);
  if (!all_pass(comm)) {
    throw Error(ErrorKind::Inconsistent, "ucp adjoint exists but U does not commute with Delta");
  }
  return adj;
}

double adjunction_residual(const UcpMap& phi, const UcpMap& psi, const State& state) {
  const Algebra& alg = phi.algebra();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < alg.total_dim(); ++i) {
    const Element a = alg.basis_element(i);
    const Element pa = phi(a);
    for (Eigen::Index k = 0; k < alg.total_dim(); ++k) {
      const Element b = alg.basis_element(k);
      worst = std::max(worst, std::abs(state(a * psi(b)) - state(pa * b)));
    }
  }
  return worst;
}

}  // namespace cstar
