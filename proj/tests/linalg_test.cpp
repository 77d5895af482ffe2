#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qfaeq/io.hpp"
#include "qfaeq/linalg.hpp"
#include "support/reference.hpp"

#include <random>

using namespace qfaeq;

namespace {
auto hadamard() -> CMatrix
{
  CMatrix h(2, 2);
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}
} // namespace

TEST_CASE("matrix basics")
{
  std::mt19937_64 rng(3);
  CMatrix const   a = haar_unitary(3, rng);
  CHECK(max_abs((mat_mul(CMatrix::Identity(3, 3), a) - a).eval()) == 0.0);
  CHECK(max_abs((CMatrix(dagger(CMatrix(dagger(a)))) - a).eval()) == 0.0);
  CHECK(frob_inner(CMatrix::Identity(4, 4), CMatrix::Identity(4, 4)) == Cx(4.0, 0.0));

  CVector v = CVector::Ones(3);
  CHECK(mat_vec(CMatrix::Identity(3, 3), v) == v);

  CHECK_THROWS_AS(mat_mul(CMatrix(2, 3), CMatrix(2, 3)), DimensionError);
  CHECK_THROWS_AS(mat_vec(CMatrix(2, 3), CVector(2)), DimensionError);
  CHECK_THROWS_AS(frob_inner(CMatrix(2, 2), CMatrix(3, 3)), DimensionError);
}

TEST_CASE("frob_inner is tr(A^dagger B)")
{
  std::mt19937_64 rng(11);
  auto const      a = haar_unitary(4, rng);
  auto const      b = haar_unitary(4, rng);
  CHECK(std::abs(frob_inner(a, b) - (a.adjoint() * b).trace()) < 1e-13);
}

TEST_CASE("is_unitary")
{
  auto const h = is_unitary(hadamard(), 1e-8);
  CHECK(h.unitary);
  CHECK(h.deviation <= 1e-15);

  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 1;
  d(1, 1) = 2;
  auto const bad = is_unitary(d, 1e-8);
  CHECK_FALSE(bad.unitary);
  CHECK(bad.deviation == doctest::Approx(3.0));

  // every permutation of 4 elements
  std::vector<int> p{0, 1, 2, 3};
  do {
    CMatrix m = CMatrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i) { m(p[i], i) = 1; }
    CHECK(is_unitary(m, 1e-12).unitary);
  } while (std::next_permutation(p.begin(), p.end()));

  CHECK_FALSE(is_unitary(CMatrix(2, 3), 1e-8).unitary);
}

TEST_CASE("vectorize_hermitian")
{
  CHECK(vectorize_hermitian(CMatrix::Zero(3, 3)).isZero());

  auto const id = vectorize_hermitian(CMatrix::Identity(2, 2));
  CHECK(id.size() == 4);
  CHECK((id.array() != 0.0).count() == 2);
  CHECK(id.maxCoeff() == 1.0);
  CHECK(id.norm() == doctest::Approx(std::sqrt(2.0)));

  CMatrix x(2, 2);
  x << 0, 1, 1, 0;
  auto const vx = vectorize_hermitian(x);
  // layout (H00, sqrt2 Re H01, sqrt2 Im H01, H11)
  CHECK(vx[0] == 0.0);
  CHECK(vx[1] == doctest::Approx(std::sqrt(2.0)));
  CHECK(vx[2] == 0.0);
  CHECK(vx[3] == 0.0);
  CHECK(vx.norm() == doctest::Approx(std::sqrt(2.0)));

  CMatrix skew(2, 2);
  skew << 0, 1, -1, 0;
  CHECK_THROWS_AS(vectorize_hermitian(skew), Error);
  CHECK_THROWS_AS(vectorize_hermitian(CMatrix(2, 3)), DimensionError);
}

TEST_CASE("vectorize_hermitian is an isometry")
{
  std::mt19937_64 rng(5);
  for (Eigen::Index n = 1; n <= 6; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      auto const a = reference::random_hermitian(n, rng);
      auto const b = reference::random_hermitian(n, rng);
      double const lhs = vectorize_hermitian(a).dot(vectorize_hermitian(b));
      double const rhs = std::real((a.adjoint() * b).trace());
      CHECK(std::abs(lhs - rhs) <= 1e-10);
    }
  }
}

TEST_CASE("SpanBasis insertion")
{
  SpanBasis<double> b(3, 1e-7);
  RVector const     e1 = RVector::Unit(3, 0), e2 = RVector::Unit(3, 1);

  CHECK(b.try_insert(RVector::Constant(3, 0.25)));

  SpanBasis<double> twice(3, 1e-7);
  CHECK(twice.try_insert(e1));
  CHECK_FALSE(twice.try_insert(e1));
  CHECK(twice.size() == 1);

  SpanBasis<double> plane(3, 1e-7);
  CHECK(plane.try_insert(e1));
  CHECK(plane.try_insert(e2));
  CHECK_FALSE(plane.try_insert((e1 + e2) / std::sqrt(2.0)));
  CHECK(plane.size() == 2);

  CHECK_FALSE(plane.try_insert(RVector::Zero(3)));
  CHECK_THROWS_AS(plane.try_insert(RVector::Zero(4)), DimensionError);

  // a non-positive threshold admits dependent vectors; they count but leave the members finite
  SpanBasis<double> loose(2, -1.0);
  CHECK(loose.try_insert(e1.head(2)));
  CHECK(loose.try_insert(e1.head(2)));
  CHECK(loose.size() == 2);
  CHECK(loose.members().size() == 1);
  CHECK(loose.members().front().allFinite());
  CHECK_THROWS_AS(loose.try_insert(e1.head(2)), CapViolation);
}

TEST_CASE("SpanBasis stays orthonormal and capped")
{
  std::mt19937_64                  rng(21);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 30; ++trial) {
    Eigen::Index const dim = 1 + trial % 9;
    SpanBasis<double>  b(dim, 1e-7);
    // low-rank stream: combinations of a few generators, plus the occasional fresh direction
    std::vector<RVector> gens;
    for (int i = 0; i < 3 * dim; ++i) {
      RVector v = RVector::Zero(dim);
      if (gens.empty() || i % 4 == 0) {
        for (Eigen::Index j = 0; j < dim; ++j) { v[j] = normal(rng); }
        gens.push_back(v);
      } else {
        for (auto const &g : gens) { v += normal(rng) * g; }
      }
      b.try_insert(v);
      auto const &m = b.members();
      for (std::size_t p = 0; p < m.size(); ++p) {
        for (std::size_t q = 0; q < m.size(); ++q) {
          CHECK(std::abs(m[p].dot(m[q]) - (p == q ? 1.0 : 0.0)) <= 1e-10);
        }
      }
    }
    CHECK(static_cast<Eigen::Index>(b.size()) <= dim);
    CHECK(b.size() <= gens.size());
  }
}

TEST_CASE("SpanBasis refuses to grow past the ambient dimension")
{
  // A negative threshold accepts every residual, which forces the cap check.
  SpanBasis<double> b(2, -1.0);
  CHECK(b.try_insert(RVector::Unit(2, 0)));
  CHECK(b.try_insert(RVector::Unit(2, 1)));
  CHECK_THROWS_AS(b.try_insert(RVector::Ones(2)), CapViolation);
  CHECK(b.size() == 2);
}

TEST_CASE("templated on scalar")
{
  Eigen::Matrix<std::complex<float>, 2, 2> h;
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0f);
  CHECK(is_unitary(h, 1e-6f).unitary);
  SpanBasis<float> b(2, 1e-4f);
  CHECK(b.try_insert(RVectorT<float>::Unit(2, 0)));
  CHECK_FALSE(b.try_insert(RVectorT<float>::Unit(2, 0) * 3.0f));
}
