#pragma once

// Finite-dimensional C*-algebras realized as direct sums of full matrix
// blocks M_{d_1} + ... + M_{d_k}.
//
// Coordinates: the matrix units E^{(b)}_{rs} form the canonical basis, ordered
// block-major and row-major inside a block. They are orthonormal for the
// Hilbert-Schmidt inner product tr(a* b), which is the coordinate inner
// product everywhere in the library.

#include <cstdint>
#include <optional>
#include <vector>

#include "cstar/numerics.hpp"

namespace cstar {

class Element {
 public:
  Element() = default;
  explicit Element(std::vector<CMatrix> blocks) : blocks_(std::move(blocks)) {}

  const std::vector<CMatrix>& blocks() const { return blocks_; }
  const CMatrix& block(std::size_t b) const { return blocks_.at(b); }
  CMatrix& block(std::size_t b) { return blocks_.at(b); }
  std::size_t num_blocks() const { return blocks_.size(); }

  Element star() const;
  /// Largest operator norm over the blocks (the C*-norm of the direct sum).
  double norm() const;
  bool is_hermitian(double tol = kDefaultTol) const;

  Element& operator+=(const Element& other);
  Element& operator-=(const Element& other);
  Element& operator*=(cplx s);

  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(Element a, cplx s) { return a *= s; }
  friend Element operator*(cplx s, Element a) { return a *= s; }
  friend Element operator*(const Element& a, const Element& b);

 private:
  std::vector<CMatrix> blocks_;
};

inline Element star(const Element& a) { return a.star(); }

class Algebra {
 public:
  struct Unit {
    std::size_t block;
    Eigen::Index row;
    Eigen::Index col;
  };

  explicit Algebra(std::vector<Eigen::Index> block_dims);
  static Algebra full_matrix(Eigen::Index d) { return Algebra({d}); }
  /// C^n as n one-dimensional blocks.
  static Algebra diagonal(Eigen::Index n) { return Algebra(std::vector<Eigen::Index>(n, 1)); }

  const std::vector<Eigen::Index>& block_dims() const { return dims_; }
  std::size_t num_blocks() const { return dims_.size(); }
  Eigen::Index total_dim() const { return total_; }
  /// Dimension of the direct sum as a space of column vectors (sum of d_i).
  Eigen::Index rep_dim() const;

  Element zero() const;
  Element unit() const;
  Element basis_element(Eigen::Index i) const;
  Unit unit_of(Eigen::Index i) const { return units_.at(i); }
  Eigen::Index index_of(std::size_t block, Eigen::Index row, Eigen::Index col) const;
  /// Index of x_i x_k when nonzero; products of matrix units are units or zero.
  std::optional<Eigen::Index> unit_product(Eigen::Index i, Eigen::Index k) const;
  Eigen::Index unit_star(Eigen::Index i) const;

  bool matches(const Element& a) const;
  void require(const Element& a) const;
  CVector coords(const Element& a) const;
  Element element(const CVector& c) const;

  cplx trace(const Element& a) const;
  /// Matrix of x -> a x on coordinates.
  CMatrix left_multiplication(const Element& a) const;
  /// Matrix of x -> x a on coordinates.
  CMatrix right_multiplication(const Element& a) const;
  /// Matrix of x -> l x r on coordinates.
  CMatrix sandwich(const Element& l, const Element& r) const;
  /// Permutation P with coords(a*) = P conj(coords(a)).
  CMatrix star_permutation() const;
  /// Embedding as a block-diagonal matrix of size rep_dim().
  CMatrix block_diagonal(const Element& a) const;

  bool operator==(const Algebra& other) const { return dims_ == other.dims_; }

 private:
  std::vector<Eigen::Index> dims_;
  std::vector<Eigen::Index> offsets_;
  std::vector<Unit> units_;
  Eigen::Index total_ = 0;
};

/// Linear subspace of an algebra (coordinate vectors) or of the operators on
/// C^m (row-major vectorized matrices), with a Hilbert-Schmidt orthonormal basis.
struct Subspace {
  std::optional<Algebra> algebra;
  Eigen::Index operator_dim = 0;
  CMatrix basis;  // ambient_dim x dim, orthonormal columns

  Eigen::Index ambient_dim() const { return basis.rows(); }
  Eigen::Index dim() const { return basis.cols(); }

  /// Projection residual relative to |v|.
  double membership_residual(const CVector& v) const;
  bool contains(const CVector& v, double tol = 1e-9) const { return membership_residual(v) <= tol; }
  bool contains(const Element& a, double tol = 1e-9) const;
  bool contains_operator(const CMatrix& x, double tol = 1e-9) const;
  /// Every basis vector of `other` lies in this subspace.
  bool contains(const Subspace& other, double tol = 1e-9) const;

  Element element(Eigen::Index k) const;
  CMatrix op(Eigen::Index k) const;
  std::vector<CMatrix> ops() const;
  std::vector<Element> elements() const;
};

Subspace generated_star_algebra(const Algebra& algebra, const std::vector<Element>& seed,
                                double tol = kKernelTol);
Subspace generated_star_algebra(const std::vector<CMatrix>& seed, double tol = kKernelTol);

/// Commutant of a set of m x m matrices, as a subspace of operators on C^m.
Subspace commutant(const std::vector<CMatrix>& reps, double tol = kKernelTol);

Element random_element(const Algebra& algebra, std::uint64_t seed);
Element random_hermitian(const Algebra& algebra, std::uint64_t seed);

}  // namespace cstar
