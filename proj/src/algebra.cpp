#include "cstar/algebra.hpp"

#include <functional>
#include <numeric>
#include <string>

#include "cstar/error.hpp"

namespace cstar {

Element Element::star() const {
  std::vector<CMatrix> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.push_back(b.adjoint());
  return Element(std::move(out));
}

double Element::norm() const {
  double n = 0.0;
  for (const auto& b : blocks_) n = std::max(n, op_norm(b));
  return n;
}

bool Element::is_hermitian(double tol) const {
  for (const auto& b : blocks_) {
    if (fro_norm(b - b.adjoint()) > tol * std::max(1.0, fro_norm(b))) return false;
  }
  return true;
}

namespace {
void require_same_shape(const Element& a, const Element& b) {
  if (a.num_blocks() != b.num_blocks()) {
    throw Error(ErrorKind::AlgebraMismatch, "elements have different block counts");
  }
  for (std::size_t k = 0; k < a.num_blocks(); ++k) {
    if (a.block(k).rows() != b.block(k).rows() || a.block(k).cols() != b.block(k).cols()) {
      throw Error(ErrorKind::AlgebraMismatch, "block " + std::to_string(k) + " shapes differ");
    }
  }
}
}  // namespace

Element& Element::operator+=(const Element& other) {
  require_same_shape(*this, other);
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] += other.blocks_[k];
  return *this;
}

Element& Element::operator-=(const Element& other) {
  require_same_shape(*this, other);
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] -= other.blocks_[k];
  return *this;
}

Element& Element::operator*=(cplx s) {
  for (auto& b : blocks_) b *= s;
  return *this;
}

Element operator*(const Element& a, const Element& b) {
  require_same_shape(a, b);
  std::vector<CMatrix> out;
  out.reserve(a.num_blocks());
  for (std::size_t k = 0; k < a.num_blocks(); ++k) out.push_back(a.block(k) * b.block(k));
  return Element(std::move(out));
}

Algebra::Algebra(std::vector<Eigen::Index> block_dims) : dims_(std::move(block_dims)) {
  if (dims_.empty()) throw Error(ErrorKind::ValidationError, "algebra needs at least one block");
  for (std::size_t b = 0; b < dims_.size(); ++b) {
    const Eigen::Index d = dims_[b];
    if (d < 1) throw Error(ErrorKind::ValidationError, "block dimensions must be positive");
    offsets_.push_back(total_);
    for (Eigen::Index r = 0; r < d; ++r) {
      for (Eigen::Index s = 0; s < d; ++s) units_.push_back({b, r, s});
    }
    total_ += d * d;
  }
}

Eigen::Index Algebra::rep_dim() const {
  return std::accumulate(dims_.begin(), dims_.end(), Eigen::Index{0});
}

Element Algebra::zero() const {
  std::vector<CMatrix> blocks;
  for (auto d : dims_) blocks.push_back(CMatrix::Zero(d, d));
  return Element(std::move(blocks));
}

Element Algebra::unit() const {
  std::vector<CMatrix> blocks;
  for (auto d : dims_) blocks.push_back(CMatrix::Identity(d, d));
  return Element(std::move(blocks));
}

Element Algebra::basis_element(Eigen::Index i) const {
  Element e = zero();
  const Unit& u = units_.at(i);
  e.block(u.block)(u.row, u.col) = 1.0;
  return e;
}

Eigen::Index Algebra::index_of(std::size_t block, Eigen::Index row, Eigen::Index col) const {
  return offsets_.at(block) + row * dims_.at(block) + col;
}

std::optional<Eigen::Index> Algebra::unit_product(Eigen::Index i, Eigen::Index k) const {
  const Unit& a = units_[i];
  const Unit& b = units_[k];
  if (a.block != b.block || a.col != b.row) return std::nullopt;
  return index_of(a.block, a.row, b.col);
}

Eigen::Index Algebra::unit_star(Eigen::Index i) const {
  const Unit& a = units_[i];
  return index_of(a.block, a.col, a.row);
}

bool Algebra::matches(const Element& a) const {
  if (a.num_blocks() != dims_.size()) return false;
  for (std::size_t b = 0; b < dims_.size(); ++b) {
    if (a.block(b).rows() != dims_[b] || a.block(b).cols() != dims_[b]) return false;
  }
  return true;
}

void Algebra::require(const Element& a) const {
  if (!matches(a)) throw Error(ErrorKind::AlgebraMismatch, "element shape does not match algebra");
}

CVector Algebra::coords(const Element& a) const {
  require(a);
  CVector c(total_);
  for (std::size_t b = 0; b < dims_.size(); ++b) {
    c.segment(offsets_[b], dims_[b] * dims_[b]) = vec(a.block(b));
  }
  return c;
}

Element Algebra::element(const CVector& c) const {
  if (c.size() != total_) throw Error(ErrorKind::AlgebraMismatch, "coordinate vector has wrong length");
  std::vector<CMatrix> blocks;
  for (std::size_t b = 0; b < dims_.size(); ++b) {
    blocks.push_back(unvec(c.segment(offsets_[b], dims_[b] * dims_[b]), dims_[b], dims_[b]));
  }
  return Element(std::move(blocks));
}

cplx Algebra::trace(const Element& a) const {
  require(a);
  cplx t = 0.0;
  for (const auto& b : a.blocks()) t += b.trace();
  return t;
}

CMatrix Algebra::sandwich(const Element& l, const Element& r) const {
  require(l);
  require(r);
  CMatrix m = CMatrix::Zero(total_, total_);
  for (std::size_t b = 0; b < dims_.size(); ++b) {
    // vec_r(L X R) = (L kron R^T) vec_r(X)
    m.block(offsets_[b], offsets_[b], dims_[b] * dims_[b], dims_[b] * dims_[b]) =
        kron(l.block(b), r.block(b).transpose());
  }
  return m;
}

CMatrix Algebra::left_multiplication(const Element& a) const { return sandwich(a, unit()); }

CMatrix Algebra::right_multiplication(const Element& a) const { return sandwich(unit(), a); }

CMatrix Algebra::star_permutation() const {
  CMatrix p = CMatrix::Zero(total_, total_);
  for (Eigen::Index i = 0; i < total_; ++i) p(unit_star(i), i) = 1.0;
  return p;
}

CMatrix Algebra::block_diagonal(const Element& a) const {
  require(a);
  const Eigen::Index n = rep_dim();
  CMatrix m = CMatrix::Zero(n, n);
  Eigen::Index off = 0;
  for (std::size_t b = 0; b < dims_.size(); ++b) {
    m.block(off, off, dims_[b], dims_[b]) = a.block(b);
    off += dims_[b];
  }
  return m;
}

double Subspace::membership_residual(const CVector& v) const {
  const double n = v.norm();
  if (n == 0.0) return 0.0;
  const CVector r = v - basis * (basis.adjoint() * v);
  return r.norm() / n;
}

bool Subspace::contains(const Element& a, double tol) const {
  return contains(algebra.value().coords(a), tol);
}

bool Subspace::contains_operator(const CMatrix& x, double tol) const { return contains(vec(x), tol); }

bool Subspace::contains(const Subspace& other, double tol) const {
  for (Eigen::Index k = 0; k < other.dim(); ++k) {
    if (!contains(CVector(other.basis.col(k)), tol)) return false;
  }
  return true;
}

Element Subspace::element(Eigen::Index k) const { return algebra.value().element(basis.col(k)); }

CMatrix Subspace::op(Eigen::Index k) const { return unvec(basis.col(k), operator_dim, operator_dim); }

std::vector<CMatrix> Subspace::ops() const {
  std::vector<CMatrix> out;
  for (Eigen::Index k = 0; k < dim(); ++k) out.push_back(op(k));
  return out;
}

std::vector<Element> Subspace::elements() const {
  std::vector<Element> out;
  for (Eigen::Index k = 0; k < dim(); ++k) out.push_back(element(k));
  return out;
}

namespace {

using Product = std::function<CVector(const CVector&, const CVector&)>;
using Involution = std::function<CVector(const CVector&)>;

// Appends v to the orthonormal columns of `basis` when it is not already in
// their span (relative residual above tol). Two Gram-Schmidt passes.
bool extend(CMatrix& basis, const CVector& v, double tol) {
  const double n = v.norm();
  if (n == 0.0) return false;
  CVector r = v - basis * (basis.adjoint() * v);
  r -= basis * (basis.adjoint() * r);
  const double rn = r.norm();
  if (rn <= tol * n) return false;
  basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
  basis.col(basis.cols() - 1) = r / rn;
  return true;
}

CMatrix close_star_algebra(const std::vector<CVector>& seed, const CVector& unit, const Product& mul,
                           const Involution& inv, double tol) {
  const Eigen::Index ambient = unit.size();
  CMatrix basis(ambient, 0);
  extend(basis, unit, tol);
  for (const auto& s : seed) {
    extend(basis, s, tol);
    extend(basis, inv(s), tol);
  }
  for (Eigen::Index iter = 0;; ++iter) {
    if (iter > ambient) {
      throw Error(ErrorKind::NoConvergence, "generated algebra still growing after ambient-dimension rounds");
    }
    const Eigen::Index n = basis.cols();
    bool grew = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        grew |= extend(basis, mul(basis.col(i), basis.col(j)), tol);
      }
      grew |= extend(basis, inv(basis.col(i)), tol);
    }
    if (!grew) break;
  }
  return basis;
}

}  // namespace

Subspace generated_star_algebra(const Algebra& algebra, const std::vector<Element>& seed, double tol) {
  if (seed.empty()) throw Error(ErrorKind::ValidationError, "seed must be nonempty");
  std::vector<CVector> s;
  for (const auto& e : seed) s.push_back(algebra.coords(e));
  const Product mul = [&](const CVector& x, const CVector& y) {
    return algebra.coords(algebra.element(x) * algebra.element(y));
  };
  const Involution inv = [&](const CVector& x) { return algebra.coords(algebra.element(x).star()); };
  Subspace out;
  out.algebra = algebra;
  out.basis = close_star_algebra(s, algebra.coords(algebra.unit()), mul, inv, tol);
  return out;
}

Subspace generated_star_algebra(const std::vector<CMatrix>& seed, double tol) {
  if (seed.empty()) throw Error(ErrorKind::ValidationError, "seed must be nonempty");
  const Eigen::Index m = seed.front().rows();
  std::vector<CVector> s;
  for (const auto& x : seed) {
    if (x.rows() != m || x.cols() != m) throw Error(ErrorKind::AlgebraMismatch, "seed operators differ in size");
    s.push_back(vec(x));
  }
  const Product mul = [m](const CVector& x, const CVector& y) {
    return vec(unvec(x, m, m) * unvec(y, m, m));
  };
  const Involution inv = [m](const CVector& x) { return vec(unvec(x, m, m).adjoint()); };
  Subspace out;
  out.operator_dim = m;
  out.basis = close_star_algebra(s, vec(identity(m)), mul, inv, tol);
  return out;
}

Subspace commutant(const std::vector<CMatrix>& reps, double tol) {
  if (reps.empty()) throw Error(ErrorKind::ValidationError, "commutant needs at least one operator");
  const Eigen::Index m = reps.front().rows();
  const CMatrix id = identity(m);
  CMatrix system(reps.size() * m * m, m * m);
  for (std::size_t i = 0; i < reps.size(); ++i) {
    if (reps[i].rows() != m || reps[i].cols() != m) {
      throw Error(ErrorKind::AlgebraMismatch, "commutant operators differ in size");
    }
    // vec_r(X A - A X) = (I kron A^T - A kron I) vec_r(X)
    system.middleRows(i * m * m, m * m) = kron(id, reps[i].transpose()) - kron(reps[i], id);
  }
  Subspace out;
  out.operator_dim = m;
  out.basis = null_space(system, tol);
  return out;
}

Element random_element(const Algebra& algebra, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CMatrix> blocks;
  for (auto d : algebra.block_dims()) blocks.push_back(random_complex(d, d, rng));
  return Element(std::move(blocks));
}

Element random_hermitian(const Algebra& algebra, std::uint64_t seed) {
  const Element a = random_element(algebra, seed);
  return 0.5 * (a + a.star());
}

}  // namespace cstar
