#include "cstar/instances.hpp"

#include <cmath>
#include <random>

namespace cstar::instances {

using namespace std::complex_literals;

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0.0, -1i, 1i, 0.0;
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

CMatrix hadamard() {
  CMatrix m(2, 2);
  m << 1.0, 1.0, 1.0, -1.0;
  return m / std::sqrt(2.0);
}

CMatrix generic_qubit_unitary() {
  const double theta = 0.7;
  CMatrix rot(2, 2);
  rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  CMatrix phase = CMatrix::Zero(2, 2);
  phase(0, 0) = 1.0;
  phase(1, 1) = std::exp(1i * std::sqrt(2.0));
  return rot * phase;
}

UcpMap conjugation(const Algebra& algebra, const CMatrix& u) {
  return verify_ucp(map_from_kraus(algebra, std::vector<CMatrix>{u}));
}

UcpMap depolarizing(Eigen::Index d) {
  const Algebra alg = Algebra::full_matrix(d);
  return verify_ucp(map_from_function(alg, [&](const Element& a) {
    return (alg.trace(a) / static_cast<double>(d)) * alg.unit();
  }));
}

UcpMap dephasing(Eigen::Index d) {
  const Algebra alg = Algebra::full_matrix(d);
  return verify_ucp(map_from_function(alg, [](const Element& a) {
    return Element({CMatrix(a.block(0).diagonal().asDiagonal())});
  }));
}

UcpMap stochastic(const RMatrix& p) { return verify_ucp(map_from_stochastic(p)); }

RMatrix averaging_matrix(Eigen::Index n) { return RMatrix::Constant(n, n, 1.0 / static_cast<double>(n)); }

RMatrix cycle_matrix(Eigen::Index n) {
  RMatrix p = RMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) p(i, (i + 1) % n) = 1.0;
  return p;
}

UcpMap copy_endomorphism() {
  const Algebra alg({2, 2});
  return verify_ucp(map_from_function(alg, [](const Element& a) { return Element({a.block(0), a.block(0)}); }));
}

System qubit_automorphism() {
  const Algebra alg = Algebra::full_matrix(2);
  const CMatrix u = generic_qubit_unitary();
  return {"qubit_automorphism", conjugation(alg, u), State::tracial(alg), conjugation(alg, u.adjoint())};
}

System depolarizing_qubit() {
  return {"depolarizing_qubit", depolarizing(2), State::tracial(Algebra::full_matrix(2)), std::nullopt};
}

System dephasing_qubit() {
  CMatrix rho = CMatrix::Zero(2, 2);
  rho(0, 0) = 2.0 / 3.0;
  rho(1, 1) = 1.0 / 3.0;
  return {"dephasing_qubit", dephasing(2), State(Algebra::full_matrix(2), {rho}), std::nullopt};
}

System averaging_c2() {
  return {"averaging_c2", stochastic(averaging_matrix(2)), State::tracial(Algebra::diagonal(2)), std::nullopt};
}

System swap_c2() {
  const UcpMap swap = stochastic(cycle_matrix(2));
  return {"swap_c2", swap, State::tracial(Algebra::diagonal(2)), swap};
}

System cycle_c3() {
  return {"cycle_c3", stochastic(cycle_matrix(3)), State::tracial(Algebra::diagonal(3)),
          stochastic(cycle_matrix(3).transpose())};
}

System copy_m2m2() {
  const Algebra alg({2, 2});
  return {"copy_m2m2", copy_endomorphism(), State(alg, {identity(2) / 2.0, CMatrix::Zero(2, 2)}), std::nullopt};
}

System identity_c2() {
  const Algebra alg = Algebra::diagonal(2);
  return {"identity_c2", identity_map(alg), State::tracial(alg), identity_map(alg)};
}

std::vector<System> bundled() {
  return {qubit_automorphism(), depolarizing_qubit(), dephasing_qubit(), averaging_c2(),
          swap_c2(),            cycle_c3(),           copy_m2m2(),       identity_c2()};
}

UcpMap random_ucp(const Algebra& algebra, std::size_t kraus, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto& dims = algebra.block_dims();
  const std::size_t nb = dims.size();
  std::vector<KrausTerm> terms;
  for (std::size_t to = 0; to < nb; ++to) {
    std::vector<KrausTerm> raw;
    CMatrix total = CMatrix::Zero(dims[to], dims[to]);
    for (std::size_t from = 0; from < nb; ++from) {
      for (std::size_t k = 0; k < kraus; ++k) {
        const CMatrix g = random_complex(dims[to], dims[from], rng);
        total += g * g.adjoint();
        raw.push_back({from, to, g});
      }
    }
    // Normalize so that sum_k K_k K_k^* = 1 on the target block.
    const CMatrix norm = psd_inverse_sqrt(total);
    for (auto& term : raw) {
      term.op = norm * term.op;
      terms.push_back(term);
    }
  }
  return verify_ucp(map_from_kraus(algebra, terms), 1e-9);
}

UcpMap random_schur_multiplier(Eigen::Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const CMatrix g = random_complex(d, d, rng);
  CMatrix c = g * g.adjoint();
  RVector scale(d);
  for (Eigen::Index i = 0; i < d; ++i) scale(i) = 1.0 / std::sqrt(c(i, i).real());
  c = scale.asDiagonal() * c * scale.asDiagonal();
  const Algebra alg = Algebra::full_matrix(d);
  return verify_ucp(map_from_function(alg, [&](const Element& a) {
    return Element({CMatrix(c.cwiseProduct(a.block(0)))});
  }), 1e-9);
}

State random_diagonal_state(Eigen::Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> weight(0.1, 1.0);
  RVector w(d);
  for (Eigen::Index i = 0; i < d; ++i) w(i) = weight(rng);
  w /= w.sum();
  return State(Algebra::full_matrix(d), {CMatrix(w.cast<cplx>().asDiagonal())});
}

}  // namespace cstar::instances
