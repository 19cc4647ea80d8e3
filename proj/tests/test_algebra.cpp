#include <doctest.h>

#include "cstar/algebra.hpp"
#include "cstar/error.hpp"
#include "cstar/instances.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace cstar;

namespace {

Element m2(const CMatrix& x) { return Element({x}); }

}  // namespace

TEST_CASE("star on small elements") {
  const Algebra alg = Algebra::full_matrix(2);
  CHECK((alg.unit().star() - alg.unit()).norm() == 0.0);

  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = cplx(0.0, 1.0);
  CMatrix dstar = CMatrix::Zero(2, 2);
  dstar(0, 0) = cplx(0.0, -1.0);
  CHECK((m2(d).star() - m2(dstar)).norm() == 0.0);

  CMatrix n = CMatrix::Zero(2, 2);
  n(0, 1) = 1.0;
  CHECK((m2(n).star() - m2(n.transpose())).norm() == 0.0);
}

TEST_CASE("basis order is block-major then row-major") {
  const Algebra alg({2, 1});
  CHECK(alg.total_dim() == 5);
  CHECK(alg.rep_dim() == 3);
  for (Eigen::Index i = 0; i < 5; ++i) {
    CHECK(fro_norm(alg.block_diagonal(alg.basis_element(i)) - oracle::unit_matrix({2, 1}, i)) == 0.0);
  }
  CHECK(alg.index_of(0, 1, 0) == 2);
  CHECK(alg.index_of(1, 0, 0) == 4);
}

TEST_CASE("coordinate operators agree with dense products") {
  gen::Gen g(17);
  for (int trial = 0; trial < 30; ++trial) {
    const Algebra alg = g.algebra();
    const Element a = g.element(alg), b = g.element(alg), x = g.element(alg);
    const oracle::CMat da = gen::dense(alg, a), db = gen::dense(alg, b), dx = gen::dense(alg, x);
    CHECK(fro_norm(gen::dense(alg, a * b) - da * db) < 1e-12 * (1 + da.norm() * db.norm()));
    const CVector sand = alg.sandwich(a, b) * alg.coords(x);
    CHECK(fro_norm(oracle::dense(alg.block_dims(), sand) - da * dx * db) < 1e-10 * (1 + da.norm() * db.norm() * dx.norm()));
    const CVector starred = alg.star_permutation() * alg.coords(x).conjugate();
    CHECK(fro_norm(oracle::dense(alg.block_dims(), starred) - dx.adjoint()) < 1e-12 * (1 + dx.norm()));
    CHECK(std::abs(alg.trace(x) - dx.trace()) < 1e-12 * (1 + dx.norm()));
  }
}

TEST_CASE("mismatched shapes are rejected") {
  const Algebra alg({2, 2});
  CHECK_THROWS_AS(alg.coords(Element({identity(2)})), Error);
  CHECK_THROWS_AS(Element({identity(2)}) * Element({identity(3)}), Error);
}

TEST_CASE("generated star algebras") {
  const Algebra alg = Algebra::full_matrix(2);
  CHECK(generated_star_algebra(alg, {alg.unit()}).dim() == 1);
  CHECK(generated_star_algebra(alg, {m2(instances::pauli_x())}).dim() == 2);
  CHECK(generated_star_algebra(alg, {m2(instances::pauli_x()), m2(instances::pauli_z())}).dim() == 4);
}

TEST_CASE("generated star algebra is closed under star and products") {
  gen::Gen g(23);
  for (int trial = 0; trial < 20; ++trial) {
    const Algebra alg = g.algebra();
    std::vector<Element> seed;
    const std::size_t k = 1 + g.index(2);
    for (std::size_t j = 0; j < k; ++j) {
      // Sparse seeds give proper subalgebras more often.
      Element e = alg.zero();
      e += cplx(g.uniform(), 0.0) * alg.basis_element(static_cast<Eigen::Index>(g.index(alg.total_dim())));
      seed.push_back(e);
    }
    const Subspace s = generated_star_algebra(alg, seed);
    CHECK(s.contains(alg.unit()));
    const auto els = s.elements();
    for (const auto& a : els) {
      CHECK(s.contains(a.star()));
      for (const auto& b : els) CHECK(s.contains(a * b));
    }
  }
}

TEST_CASE("commutants") {
  CHECK(commutant({identity(3)}).dim() == 9);

  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  CHECK(commutant({d}).dim() == 2);

  // Left multiplications of M_2 on itself: the commutant is the right
  // multiplications, four-dimensional.
  const Algebra alg = Algebra::full_matrix(2);
  std::vector<CMatrix> left;
  for (Eigen::Index i = 0; i < 4; ++i) left.push_back(alg.left_multiplication(alg.basis_element(i)));
  const Subspace c = commutant(left);
  CHECK(c.dim() == 4);
  for (Eigen::Index i = 0; i < 4; ++i) {
    CHECK(c.contains_operator(alg.right_multiplication(alg.basis_element(i))));
  }
}

TEST_CASE("commutant elements commute and the double commutant contains the set") {
  gen::Gen g(29);
  for (int trial = 0; trial < 15; ++trial) {
    const Algebra alg = g.algebra();
    const Element a = g.element(alg);
    std::vector<CMatrix> reps{alg.block_diagonal(a), alg.block_diagonal(a.star())};
    const Subspace c = commutant(reps);
    for (const auto& x : c.ops()) {
      for (const auto& r : reps) CHECK(fro_norm(x * r - r * x) <= 1e-9 * std::max(1.0, fro_norm(r)));
    }
    const Subspace cc = commutant(c.ops());
    CHECK(cc.contains_operator(identity(alg.rep_dim())));
    for (const auto& r : reps) CHECK(cc.contains_operator(r));
  }
}

TEST_CASE("random elements are deterministic and shaped") {
  const Algebra m2alg = Algebra::full_matrix(2);
  CHECK((random_element(m2alg, 0) - random_element(m2alg, 0)).norm() == 0.0);
  const Element c2 = random_element(Algebra::diagonal(2), 1);
  CHECK(c2.num_blocks() == 2);
  CHECK(c2.block(0).rows() == 1);
  CHECK(random_hermitian(Algebra({2, 2}), 4).is_hermitian());
}
