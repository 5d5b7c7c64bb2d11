#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rqcm/ensemble.hpp"
#include "rqcm/errors.hpp"
#include "rqcm/linalg.hpp"

using namespace rqcm;
using namespace rqcm::linalg;

namespace {

HermitianMatrix ij2() {
  ComplexMatrix m(2, 2);
  m << 0.0, Complex(0, 1), Complex(0, -1), 0.0;
  return HermitianMatrix(m);
}

double reconstruction_residual(const HermitianMatrix& h, const HermEigen& e) {
  const ComplexMatrix r = h.matrix() * e.vectors - e.vectors * e.values.asDiagonal();
  return r.colwise().norm().maxCoeff();
}

}  // namespace

TEST_CASE("matrix types symmetrize on construction") {
  RealMatrix m(2, 2);
  m << 1.0, 2.0, 4.0, 3.0;
  const SymmetricMatrix s(m);
  CHECK(s(0, 1) == 3.0);
  CHECK(s(1, 0) == 3.0);

  ComplexMatrix c(2, 2);
  c << Complex(1, 5), Complex(0, 1), Complex(0, 1), 2.0;
  const HermitianMatrix h(c);
  CHECK(h(0, 0).imag() == 0.0);
  CHECK(h(0, 1) == std::conj(h(1, 0)));
  CHECK_THROWS_AS(SymmetricMatrix(RealMatrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("herm_eigen small cases") {
  const HermEigen e = herm_eigen(ij2());
  CHECK(e.values(0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(e.values(1) == doctest::Approx(1.0).epsilon(1e-14));

  const RealVector v = herm_eigenvalues(HermitianMatrix::identity(4));
  for (int i = 0; i < 4; ++i) CHECK(v(i) == doctest::Approx(1.0));
}

TEST_CASE("herm_eigen agrees with characteristic polynomial roots") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ComplexMatrix m = oracle::random_hermitian(6, seed);
    const HermitianMatrix h(m);
    const HermEigen e = herm_eigen(h);
    const auto ref = oracle::hermitian_spectrum(h.matrix());
    CHECK(oracle::max_abs_diff(oracle::to_vec(e.values), ref) < 1e-8);
    CHECK(reconstruction_residual(h, e) <= 1e-10 * (1.0 + op_norm(h)));
    const ComplexMatrix gram = e.vectors.adjoint() * e.vectors - ComplexMatrix::Identity(6, 6);
    CHECK(gram.cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("eigenvalues come out ascending") {
  const HermitianMatrix h(oracle::random_hermitian(12, 8));
  const RealVector v = herm_eigenvalues(h);
  for (int i = 1; i < v.size(); ++i) CHECK(v(i - 1) <= v(i));
  CHECK(lambda_min(h) == v(0));
  CHECK(lambda_max(h) == v(11));
}

TEST_CASE("sym_eigen") {
  RealVector d(2);
  d << 3.0, 1.0;
  const SymEigen e = sym_eigen(SymmetricMatrix::diagonal(d));
  CHECK(e.values(0) == doctest::Approx(1.0));
  CHECK(e.values(1) == doctest::Approx(3.0));

  RealMatrix x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  const RealVector v = sym_eigenvalues(SymmetricMatrix(x));
  CHECK(v(0) == doctest::Approx(-1.0));
  CHECK(v(1) == doctest::Approx(1.0));

  // real and complex paths must agree
  const RealMatrix a = oracle::random_real(5, 5, 3);
  const SymmetricMatrix s(a + a.transpose());
  const RealVector real_path = sym_eigenvalues(s);
  const RealVector complex_path = herm_eigenvalues(HermitianMatrix(s));
  CHECK((real_path - complex_path).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("psd_sqrt") {
  const SymmetricMatrix i4 = SymmetricMatrix::identity(4);
  CHECK((psd_sqrt(i4).matrix() - i4.matrix()).cwiseAbs().maxCoeff() < 1e-14);

  RealVector d(2);
  d << 4.0, 9.0;
  const SymmetricMatrix r = psd_sqrt(SymmetricMatrix::diagonal(d));
  CHECK(r(0, 0) == doctest::Approx(2.0));
  CHECK(r(1, 1) == doctest::Approx(3.0));
  CHECK(std::abs(r(0, 1)) < 1e-14);

  const RealMatrix a = oracle::random_real(6, 6, 11);
  const SymmetricMatrix s(a * a.transpose());
  const SymmetricMatrix root = psd_sqrt(s);
  const RealMatrix back = root.matrix() * root.matrix();
  CHECK((back - s.matrix()).norm() <= 1e-8 * (1.0 + op_norm(s)));
  CHECK(lambda_min(root) >= -1e-12);

  // scaling
  const SymmetricMatrix scaled = psd_sqrt(s * 9.0);
  CHECK((scaled.matrix() - 3.0 * root.matrix()).cwiseAbs().maxCoeff() < 1e-10);

  // tiny negative eigenvalues are clipped, large ones are errors
  RealVector dn(2);
  dn << -1e-10, 1.0;
  CHECK(psd_sqrt(SymmetricMatrix::diagonal(dn))(0, 0) == 0.0);
  dn(0) = -1e-3;
  CHECK_THROWS_AS(psd_sqrt(SymmetricMatrix::diagonal(dn)), NotPSD);
}

TEST_CASE("pinv_herm") {
  // I + iJ has eigenvalues 0 and 2: the kernel is annihilated
  const HermitianMatrix h = HermitianMatrix::identity(2) + ij2();
  const HermitianMatrix p = pinv_herm(h);
  const HermEigen e = herm_eigen(h);
  const ComplexMatrix v0 = e.vectors.col(0), v2 = e.vectors.col(1);
  CHECK((p.matrix() * v0).norm() < 1e-12);
  CHECK((p.matrix() * v2 - 0.5 * v2).norm() < 1e-12);
  CHECK((h.matrix() * p.matrix() * h.matrix() - h.matrix()).norm() < 1e-8 * h.matrix().norm());

  RealVector d(2);
  d << 2.0, 5.0;
  const HermitianMatrix pd = pinv_herm(HermitianMatrix(SymmetricMatrix::diagonal(d)));
  CHECK(pd(0, 0).real() == doctest::Approx(0.5));
  CHECK(pd(1, 1).real() == doctest::Approx(0.2));

  // full rank: plain inverse by a linear solve
  const HermitianMatrix r(oracle::random_hermitian(7, 4));
  const ComplexMatrix inv = r.matrix().fullPivLu().solve(ComplexMatrix::Identity(7, 7));
  CHECK((pinv_herm(r).matrix() - inv).cwiseAbs().maxCoeff() < 1e-8 * inv.cwiseAbs().maxCoeff());

  // pinv is an involution on the range
  CHECK((pinv_herm(p).matrix() - h.matrix()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("log_det_spd") {
  CHECK(log_det_spd(SymmetricMatrix::identity(6)) == doctest::Approx(0.0));
  RealVector d(2);
  d << std::exp(1.0), std::exp(2.0);
  CHECK(log_det_spd(SymmetricMatrix::diagonal(d)) == doctest::Approx(3.0).epsilon(1e-14));

  const RealMatrix a = oracle::random_real(8, 8, 21);
  const SymmetricMatrix s(a * a.transpose() + RealMatrix::Identity(8, 8));
  const double ref = std::log(s.matrix().determinant());
  CHECK(std::abs(log_det_spd(s) - ref) < 1e-9 * std::max(1.0, std::abs(ref)));

  d << 1.0, 0.0;
  CHECK_THROWS_AS(log_det_spd(SymmetricMatrix::diagonal(d)), NotPD);
}

TEST_CASE("real_embed") {
  const SymmetricMatrix e = real_embed(ij2());
  CHECK(e.dim() == 4);
  const RealVector v = sym_eigenvalues(e);
  CHECK(v(0) == doctest::Approx(-1.0));
  CHECK(v(1) == doctest::Approx(-1.0));
  CHECK(v(2) == doctest::Approx(1.0));
  CHECK(v(3) == doctest::Approx(1.0));

  const RealMatrix a = oracle::random_real(3, 3, 2);
  const SymmetricMatrix s(a + a.transpose());
  const SymmetricMatrix es = real_embed(HermitianMatrix(s));
  CHECK((es.matrix().topLeftCorner(3, 3) - s.matrix()).norm() == 0.0);
  CHECK((es.matrix().bottomRightCorner(3, 3) - s.matrix()).norm() == 0.0);
  CHECK(es.matrix().topRightCorner(3, 3).norm() == 0.0);

  const HermitianMatrix h(oracle::random_hermitian(5, 17));
  const RealVector hv = herm_eigenvalues(h);
  const RealVector ev = sym_eigenvalues(real_embed(h));
  for (int i = 0; i < 5; ++i) {
    CHECK(std::abs(ev(2 * i) - hv(i)) < 1e-10);
    CHECK(std::abs(ev(2 * i + 1) - hv(i)) < 1e-10);
  }
}

TEST_CASE("min_gap is the Loewner margin") {
  const HermitianMatrix a = HermitianMatrix::identity(3) * 2.0;
  const HermitianMatrix b = HermitianMatrix::identity(3);
  CHECK(min_gap(a, b) == doctest::Approx(1.0));
  CHECK(min_gap(b, a) == doctest::Approx(-1.0));
}
