#pragma once

// Seeded generators for property tests.

#include <cstdint>
#include <random>
#include <vector>

#include "cstar/instances.hpp"
#include "oracles.hpp"

namespace gen {

using cstar::Algebra;
using cstar::CMatrix;
using cstar::cplx;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t next() { return rng_(); }
  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  CMatrix complex(Eigen::Index r, Eigen::Index c) {
    std::normal_distribution<double> n(0.0, 1.0);
    CMatrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
      for (Eigen::Index j = 0; j < c; ++j) m(i, j) = cplx(n(rng_), n(rng_));
    }
    return m;
  }

  CMatrix hermitian(Eigen::Index n) {
    const CMatrix g = complex(n, n);
    return 0.5 * (g + g.adjoint());
  }

  cstar::CVector coords(const Algebra& alg) { return complex(alg.total_dim(), 1).col(0); }
  cstar::Element element(const Algebra& alg) { return alg.element(coords(alg)); }

  /// Faithful densities with total trace one, or with the last block rank
  /// deficient (empty when it is one-dimensional and not the only block).
  std::vector<CMatrix> densities(const Algebra& alg, bool faithful = true) {
    std::vector<CMatrix> out;
    double total = 0.0;
    for (std::size_t b = 0; b < alg.num_blocks(); ++b) {
      const Eigen::Index d = alg.block_dims()[b];
      CMatrix rho;
      if (faithful || b + 1 < alg.num_blocks() || (d == 1 && alg.num_blocks() == 1)) {
        const CMatrix g = complex(d, d);
        rho = g * g.adjoint() + 0.2 * CMatrix::Identity(d, d);
      } else {
        const CMatrix g = complex(d, d - 1);
        rho = g * g.adjoint();
      }
      total += rho.trace().real();
      out.push_back(rho);
    }
    for (auto& rho : out) rho /= total;
    return out;
  }

  /// One of the algebras used across the property tests.
  Algebra algebra() {
    static const std::vector<std::vector<Eigen::Index>> shapes = {{2}, {1, 1}, {1, 1, 1}, {2, 2}, {3}, {2, 1}};
    return Algebra(shapes[index(shapes.size())]);
  }

 private:
  std::mt19937_64 rng_;
};

inline oracle::Dims dims(const Algebra& alg) { return alg.block_dims(); }

inline oracle::CMat dense(const Algebra& /*alg*/, const cstar::Element& a) {
  return oracle::block_diag(a.blocks());
}

inline oracle::CMat dense_density(const cstar::State& s) { return oracle::block_diag(s.densities()); }

}  // namespace gen
