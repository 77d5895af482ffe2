#pragma once

#include "errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <limits>
#include <cstddef>
#include <string>
#include <vector>

namespace qfaeq {

template <typename Scalar> using Complex = std::complex<Scalar>;
template <typename Scalar> using CMatrixT = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar> using CVectorT = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar> using RVectorT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Cx = Complex<double>;
using CMatrix = CMatrixT<double>;
using CVector = CVectorT<double>;
using RVector = RVectorT<double>;

// Conjugate transpose. Returns an Eigen expression; materialize as needed.
template <typename Derived> auto dagger(Eigen::MatrixBase<Derived> const &a)
{
  return a.adjoint();
}

template <typename DA, typename DB>
auto mat_mul(Eigen::MatrixBase<DA> const &a, Eigen::MatrixBase<DB> const &b)
  -> Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, Eigen::Dynamic>
{
  if (a.cols() != b.rows()) {
    throw DimensionError("mat_mul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " times " +
                         std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  return a * b;
}

template <typename DA, typename DV>
auto mat_vec(Eigen::MatrixBase<DA> const &a, Eigen::MatrixBase<DV> const &v)
  -> Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, 1>
{
  if (v.cols() != 1 || a.cols() != v.rows()) {
    throw DimensionError("mat_vec: matrix has " + std::to_string(a.cols()) + " columns, vector has " +
                         std::to_string(v.rows()) + " rows");
  }
  return a * v;
}

// Frobenius inner product tr(A^dagger B).
template <typename DA, typename DB>
auto frob_inner(Eigen::MatrixBase<DA> const &a, Eigen::MatrixBase<DB> const &b) -> typename DA::Scalar
{
  if (a.rows() != b.rows() || a.cols() != b.cols()) { throw DimensionError("frob_inner: shape mismatch"); }
  return a.conjugate().cwiseProduct(b).sum();
}

template <typename Derived> auto max_abs(Eigen::MatrixBase<Derived> const &a) -> typename Derived::RealScalar
{
  return a.size() == 0 ? typename Derived::RealScalar(0) : a.cwiseAbs().maxCoeff();
}

template <typename Scalar> struct UnitarityCheck
{
  bool   unitary;
  Scalar deviation; // max |(U^dagger U - I)_ij|
};

template <typename Derived>
auto is_unitary(Eigen::MatrixBase<Derived> const &u, typename Derived::RealScalar tol)
  -> UnitarityCheck<typename Derived::RealScalar>
{
  using Real = typename Derived::RealScalar;
  if (u.rows() != u.cols()) { return {false, std::numeric_limits<Real>::infinity()}; }
  auto const n = u.rows();
  auto const dev = max_abs((u.adjoint() * u - Derived::PlainObject::Identity(n, n)).eval());
  return {dev <= tol, dev};
}

/*
 * Real isometric encoding of an n x n Hermitian matrix as an n^2 vector.
 * Row-major over the upper triangle: a diagonal entry contributes Re(H_ii),
 * an off-diagonal entry (i<j) contributes sqrt(2) Re(H_ij), sqrt(2) Im(H_ij).
 * Then dot(vec(A), vec(B)) = Re tr(A^dagger B).
 */
template <typename Derived>
auto vectorize_hermitian(Eigen::MatrixBase<Derived> const &h, typename Derived::RealScalar herm_tol = 1e-9)
  -> RVectorT<typename Derived::RealScalar>
{
  using Real = typename Derived::RealScalar;
  if (h.rows() != h.cols()) { throw DimensionError("vectorize_hermitian: matrix not square"); }
  auto const n = h.rows();
  if (n > 0) {
    auto const asym = max_abs((h - h.adjoint()).eval());
    if (asym > herm_tol) {
      throw Error("vectorize_hermitian: matrix not Hermitian (deviation " + std::to_string(asym) + ")");
    }
  }
  Real const         root2 = std::sqrt(Real(2));
  RVectorT<Real>     out(n * n);
  Eigen::Index       at = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    out[at++] = std::real(h(i, i));
    for (Eigen::Index j = i + 1; j < n; ++j) {
      out[at++] = root2 * std::real(h(i, j));
      out[at++] = root2 * std::imag(h(i, j));
    }
  }
  return out;
}

/*
 * Incrementally grown orthonormal basis of a subspace of R^d.
 *
 * try_insert projects the candidate onto the current members with modified
 * Gram-Schmidt, twice, and keeps the normalized residual only when it is
 * larger than tau_rank * (1 + |v|). Members stay orthonormal; the accepted
 * count can never exceed d, and an attempt to do so throws CapViolation.
 * With tau_rank <= 0 a zero residual passes the test; it is counted but not
 * stored, since it has no direction.
 */
template <typename Scalar> class SpanBasis
{
public:
  using Vector = RVectorT<Scalar>;

  SpanBasis(Eigen::Index dim_ambient, Scalar tau_rank)
    : dim_(dim_ambient)
    , tau_rank_(tau_rank)
  {
  }

  auto try_insert(Vector const &v) -> bool
  {
    if (v.size() != dim_) {
      throw DimensionError("SpanBasis: vector of length " + std::to_string(v.size()) + ", ambient dimension " +
                           std::to_string(dim_));
    }
    Vector r = v;
    for (int pass = 0; pass < 2; ++pass) {
      for (auto const &m : members_) { r -= m.dot(r) * m; }
    }
    Scalar const rn = r.norm();
    if (!(rn > tau_rank_ * (Scalar(1) + v.norm()))) { return false; }
    if (static_cast<Eigen::Index>(accepted_) >= dim_) {
      throw CapViolation("SpanBasis: insertion past ambient dimension " + std::to_string(dim_) + " (residual " +
                         std::to_string(rn) + ")");
    }
    ++accepted_;
    if (rn > Scalar(0)) { members_.push_back(r / rn); }
    return true;
  }

  auto size() const -> std::size_t { return accepted_; }
  auto dim_ambient() const -> Eigen::Index { return dim_; }
  auto tau_rank() const -> Scalar { return tau_rank_; }
  auto members() const -> std::vector<Vector> const & { return members_; }

private:
  Eigen::Index        dim_;
  Scalar              tau_rank_;
  std::vector<Vector> members_;
  std::size_t         accepted_ = 0;
};

} // namespace qfaeq
