#include "cstar/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "cstar/error.hpp"

namespace cstar {

namespace {

void bump(double& slot, double value) { slot = std::max(slot, value); }

void require_invariant(const UcpMap& phi, const State& state, double tol) {
  const Check inv = check_invariance(phi, state, tol);
  if (!inv.pass()) throw Error(ErrorKind::NotInvariant, "residual " + std::to_string(inv.residual));
}

}  // namespace

std::vector<cplx> correlation_sequence(const UcpMap& phi, const State& state, const Element& a, const Element& b,
                                       std::size_t n, double tol) {
  require_invariant(phi, state, tol);
  const Algebra& alg = phi.algebra();
  const Eigen::RowVectorXcd row = state.functional() * alg.left_multiplication(a);
  CVector v = alg.coords(b);
  std::vector<cplx> out;
  for (std::size_t k = 0; k <= n; ++k) {
    out.push_back((row * v)(0));
    v = phi.apply(v);
  }
  return out;
}

ErgodicReport classify(const UcpMap& phi, const State& state, const ClassifyOptions& options) {
  require_invariant(phi, state, options.tol);
  const Algebra& alg = phi.algebra();
  const Eigen::Index t = alg.total_dim();
  const CMatrix& s = phi.superop();
  ErgodicReport r;

  Eigen::ComplexEigenSolver<CMatrix> es(s, false);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::NoConvergence, "superoperator eigensolver failed");
  r.fixed_space_dim = t - numerical_rank(s - identity(t));
  bool other_peripheral = false;
  double max_inner = 0.0;
  for (Eigen::Index k = 0; k < t; ++k) {
    const cplx lam = es.eigenvalues()(k);
    if (std::abs(std::abs(lam) - 1.0) <= options.peripheral_band) {
      r.peripheral_eigenvalues.push_back(lam);
      if (std::abs(lam - 1.0) > options.peripheral_band) other_peripheral = true;
    } else {
      max_inner = std::max(max_inner, std::abs(lam));
    }
  }
  std::sort(r.peripheral_eigenvalues.begin(), r.peripheral_eigenvalues.end(),
            [](cplx x, cplx y) { return std::arg(x) < std::arg(y); });
  r.ergodic = r.fixed_space_dim == 1;
  r.weakly_mixing = r.ergodic && !other_peripheral;
  r.spectral_gap = 1.0 - max_inner;
  r.conclusive = r.spectral_gap >= options.conclusive_gap;

  // Peripheral eigenvalues must be semisimple.
  double jordan = 0.0;
  std::vector<cplx> seen;
  for (const cplx lam : r.peripheral_eigenvalues) {
    if (std::any_of(seen.begin(), seen.end(), [&](cplx x) { return std::abs(x - lam) < 1e-6; })) continue;
    seen.push_back(lam);
    const CMatrix shifted = s - lam * identity(t);
    jordan += static_cast<double>(numerical_rank(shifted) - numerical_rank(shifted * shifted));
  }

  // Cesaro averages of centered correlations over all matrix-unit pairs.
  const Eigen::RowVectorXcd f = state.functional();
  CMatrix corr(t, t);
  for (Eigen::Index i = 0; i < t; ++i) corr.row(i) = f * alg.left_multiplication(alg.basis_element(i));
  const CMatrix centering = f.transpose() * f;
  CMatrix plain = CMatrix::Zero(t, t);
  RMatrix absolute = RMatrix::Zero(t, t);
  CMatrix power = identity(t);
  for (std::size_t k = 0; k < options.cesaro_n; ++k) {
    const CMatrix c = corr * power - centering;
    plain += c;
    absolute += c.cwiseAbs();
    power = s * power;
  }
  const auto n = static_cast<double>(options.cesaro_n);
  r.cesaro_residuals = {plain.cwiseAbs().maxCoeff() / n, absolute.maxCoeff() / n};
  r.cesaro_ergodic = r.cesaro_residuals[0] < options.decay_threshold;
  r.cesaro_weakly_mixing = r.cesaro_residuals[1] < options.decay_threshold;

  const bool agree = r.cesaro_ergodic == r.ergodic && r.cesaro_weakly_mixing == r.weakly_mixing;
  const std::string anchor = "ergodicity and weak mixing";
  r.checks = {
      {"ergodic.cesaro_agreement",
       r.conclusive ? "spectral and Cesaro classifications agree" : "inconclusive: spectral gap below cutoff",
       r.conclusive && !agree ? 1.0 : 0.0, 0.0, anchor},
      {"ergodic.fixed_unit", "fixed space contains the unit", r.fixed_space_dim >= 1 ? 0.0 : 1.0, 0.0, anchor},
      {"ergodic.jordan", "rank drop of (S - lambda)^2 at peripheral lambda", jordan, 0.0, anchor},
      {"ergodic.mixing_implies_ergodic", "weak mixing implies ergodicity", r.weakly_mixing && !r.ergodic ? 1.0 : 0.0,
       0.0, anchor},
  };
  return r;
}

TransferReport dilation_transfer_check(const DilationData& d, const TransferOptions& options) {
  const CgnsData& c = d.cgns;
  const Tower& t = *c.tower;
  const Algebra& alg = t.algebra;
  const Eigen::Index ta = alg.total_dim();
  const std::size_t budget = d.budget;
  const GnsData& g = t.gns;

  std::mt19937_64 rng(options.seed);
  std::vector<CMatrix> xs;
  for (const auto& a : d.w.vn_basis.ops()) xs.push_back(d.embed(a));
  for (std::size_t k = 0; k < options.samples; ++k) {
    const CVector coeff = random_complex(d.big_algebra.dim(), 1, rng).col(0);
    CMatrix x = CMatrix::Zero(c.ambient_dim, c.ambient_dim);
    for (Eigen::Index j = 0; j < coeff.size(); ++j) x += coeff(j) * d.big_algebra.op(j);
    xs.push_back(x);
  }

  // Reduction identity: phi_hat(X Phi_hat^k(d_j(y))) = <Omega, E(X) Phi_.^{k-j}(pi(y)) Omega>.
  double reduction = 0.0;
  for (Eigen::Index i = 0; i < ta; ++i) {
    const Element y = alg.basis_element(i);
    std::vector<CMatrix> pushed{g.rep(y)};
    for (std::size_t m = 1; m <= budget; ++m) pushed.push_back(d.w.apply(pushed.back()));
    for (std::size_t j = 0; j <= budget; ++j) {
      const CMatrix dj = c.partial(j, y);
      for (std::size_t k = j; k <= budget; ++k) {
        const CMatrix moved = d.dynamics(dj, static_cast<int>(k));
        for (const auto& x : xs) {
          const cplx lhs = d.phi_hat(x * moved);
          const cplx rhs = g.omega.dot(d.expectation(x) * pushed[k - j] * g.omega);
          bump(reduction, std::abs(lhs - rhs) / std::max(1.0, fro_norm(x)));
        }
      }
    }
  }

  // Dilated correlations of i(pi(a)), i(pi(b)) against the original ones.
  TransferReport r;
  double match = 0.0;
  for (Eigen::Index i = 0; i < ta; ++i) {
    const Element a = alg.basis_element(i);
    const CMatrix ia = d.embed(g.rep(a));
    for (Eigen::Index k = 0; k < ta; ++k) {
      const Element b = alg.basis_element(k);
      const CMatrix ib = d.embed(g.rep(b));
      const auto orig = correlation_sequence(t.phi, g.state, a, b, budget, options.tol);
      const cplx centre = g.state(a) * g.state(b);
      cplx sum_d = 0.0, sum_o = 0.0;
      for (std::size_t m = 0; m <= budget; ++m) {
        const cplx dil = d.phi_hat(ia * d.dynamics(ib, static_cast<int>(m))) - d.phi_hat(ia) * d.phi_hat(ib);
        bump(match, std::abs(dil - (orig[m] - centre)));
        sum_d += dil;
        sum_o += orig[m] - centre;
      }
      const double denom = static_cast<double>(budget + 1);
      r.dilated_cesaro = std::max(r.dilated_cesaro, std::abs(sum_d) / denom);
      r.original_cesaro = std::max(r.original_cesaro, std::abs(sum_o) / denom);
    }
  }

  // Approximating Y by its projection onto the span of low-level generators
  // moves every correlation by at most 2 eps |X|.
  const std::size_t level = budget > 0 ? budget - 1 : 0;
  CMatrix gen(c.ambient_dim * c.ambient_dim, 0);
  for (std::size_t j = 0; j <= level; ++j) {
    for (Eigen::Index i = 0; i < ta; ++i) {
      gen.conservativeResize(Eigen::NoChange, gen.cols() + 1);
      gen.col(gen.cols() - 1) = vec(c.partial(j, alg.basis_element(i)));
    }
  }
  const CMatrix span = column_span(gen);
  double eps_excess = 0.0;
  for (std::size_t k = 0; k < options.samples; ++k) {
    const CMatrix& y = xs[xs.size() - 1 - k];
    const CMatrix y_eps = unvec(span * (span.adjoint() * vec(y)), c.ambient_dim, c.ambient_dim);
    const double eps = op_norm(y - y_eps);
    for (std::size_t m = 0; m <= budget; ++m) {
      const CMatrix dy = d.dynamics(y, static_cast<int>(m));
      const CMatrix dye = d.dynamics(y_eps, static_cast<int>(m));
      for (const auto& x : xs) {
        const double gap = std::abs(d.phi_hat(x * dy) - d.phi_hat(x * dye));
        bump(eps_excess, std::max(0.0, gap - 2.0 * eps * op_norm(x)));
      }
    }
  }

  const std::string anchor = "ergodicity transfer";
  r.checks = {
      {"transfer.correlation_match", "max |dilated - original centered correlation| within budget", match, options.tol,
       anchor},
      {"transfer.epsilon_bound", "excess of |phi_hat(X Phi_hat^k(Y - Y_eps))| over 2 eps |X|", eps_excess, options.tol,
       anchor},
      {"transfer.reduction_identity", "max |phi_hat(X Phi_hat^k(d_j(y))) - phi_.(E(X) Phi_.^{k-j}(y))|", reduction,
       options.tol, anchor},
  };
  return r;
}

}  // namespace cstar
