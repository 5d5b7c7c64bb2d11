#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rqcm/ensemble.hpp"
#include "rqcm/errors.hpp"
#include "rqcm/extend.hpp"
#include "rqcm/spectra.hpp"

using namespace rqcm;
using namespace rqcm::extend;

namespace {

HermitianMatrix ij(int n) { return ensemble::symplectic_form(n).i_j; }

HermitianMatrix real_diag(double a, double b) {
  RealVector d(2);
  d << a, b;
  return HermitianMatrix(SymmetricMatrix::diagonal(d));
}

// lambda_min of [[p, q], [conj(q), r]]
double lmin2(double p, Complex q, double r) {
  return 0.5 * (p + r) - std::sqrt(0.25 * (p - r) * (p - r) + std::norm(q));
}

// max over a box grid of min(lambda_min(X - L), lambda_min(U - X)) for real
// symmetric X = [[a, b], [b, c]].
double grid_margin(const HermitianMatrix& lo, const HermitianMatrix& up, double step, double half_width) {
  double best = -1e300;
  const int n = static_cast<int>(std::lround(2 * half_width / step));
  for (int i = 0; i <= n; ++i) {
    const double a = -half_width + i * step;
    for (int j = 0; j <= n; ++j) {
      const double b = -half_width + j * step;
      for (int k = 0; k <= n; ++k) {
        const double c = -half_width + k * step;
        const double m1 = lmin2(a - lo(0, 0).real(), b - lo(0, 1), c - lo(1, 1).real());
        const double m2 = lmin2(up(0, 0).real() - a, up(0, 1) - b, up(1, 1).real() - c);
        best = std::max(best, std::min(m1, m2));
      }
    }
  }
  return best;
}

SolverOptions dykstra() {
  SolverOptions o;
  o.method = Method::dykstra;
  return o;
}

}  // namespace

TEST_CASE("trivial sandwiches") {
  for (const SolverOptions& opt : {SolverOptions{}, dykstra()}) {
    CAPTURE(to_string(opt.method));
    const HermitianMatrix i2 = HermitianMatrix::identity(2);
    const FeasibilityResult f = solve_sandwich({i2 * -1.0, i2, opt});
    CHECK(f.status == Status::feasible);
    REQUIRE(f.witness.has_value());
    CHECK(f.witness->matrix().cwiseAbs().maxCoeff() < 1e-8);
    CHECK(verify_witness(*f.witness, i2 * -1.0, i2, 1e-8));

    const FeasibilityResult g = solve_sandwich({i2, i2 * -1.0, opt});
    CHECK(g.status == Status::infeasible);
    CHECK(g.residual >= 2.0 - opt.tol);
    CHECK_FALSE(g.witness.has_value());
  }
  CHECK_THROWS_AS(solve_sandwich({HermitianMatrix::identity(2), HermitianMatrix::identity(3), {}}), DimensionError);
}

TEST_CASE("2x2 sandwich against an exhaustive grid") {
  const HermitianMatrix lo = ij(1);
  const HermitianMatrix up = ij(1) + real_diag(2.0, 0.0);
  const double margin = grid_margin(lo, up, 0.01, 2.0);
  CHECK(margin < -0.02);
  const FeasibilityResult r = solve_sandwich({lo, up, {}});
  CHECK(r.status == Status::infeasible);
  REQUIRE(r.dual_bound.has_value());
  CHECK(*r.dual_bound >= margin - 1e-9);  // weak duality: the bound caps every grid value

  // a family around the boundary, coarser grid
  for (double a : {0.5, 2.0, 3.0}) {
    for (double b : {-0.5, 0.0, 0.5, 1.0, 2.0}) {
      CAPTURE(a);
      CAPTURE(b);
      const HermitianMatrix u = ij(1) + real_diag(a, b);
      const double m = grid_margin(lo, u, 0.05, 2.5);
      const FeasibilityResult res = solve_sandwich({lo, u, {}});
      if (m > 0.1) CHECK(res.status == Status::feasible);
      if (m < -0.1) CHECK(res.status == Status::infeasible);
      if (res.feasible()) CHECK(verify_witness(*res.witness, lo, u, 1e-8));
    }
  }
}

TEST_CASE("sandwich residual and witness check") {
  const HermitianMatrix i2 = HermitianMatrix::identity(2);
  CHECK(sandwich_residual(SymmetricMatrix::zero(2), i2 * -1.0, i2) == 0.0);
  CHECK(sandwich_residual(SymmetricMatrix::identity(2) * 3.0, i2 * -1.0, i2) == doctest::Approx(2.0));
  CHECK_FALSE(verify_witness(SymmetricMatrix::identity(2) * 3.0, i2 * -1.0, i2, 1e-8));
}

TEST_CASE("lower bound matrix") {
  const ModeBipartition p11{1, 1};
  CHECK(lower_bound_matrix(SymmetricMatrix::identity(4), p11).matrix().cwiseAbs().maxCoeff() < 1e-14);

  RealMatrix prod = RealMatrix::Zero(6, 6);
  prod.topLeftCorner(2, 2) = RealMatrix::Identity(2, 2) * 3.0;
  prod.bottomRightCorner(4, 4) = RealMatrix::Identity(4, 4) * 1.5;
  CHECK(lower_bound_matrix(SymmetricMatrix(prod), {1, 2}).matrix().cwiseAbs().maxCoeff() < 1e-14);

  for (std::uint64_t i = 0; i < 20; ++i) {
    const QuantumCovarianceMatrix s = ensemble::sample_rqcm({4, 1.0, false}, {21, i});
    const HermitianMatrix m = lower_bound_matrix(s.matrix(), {2, 2});
    CHECK(linalg::lambda_min(m) >= -1e-8);
  }
  CHECK_THROWS_AS(lower_bound_matrix(SymmetricMatrix::zero(4), p11), NotPSD);
}

TEST_CASE("separability of known states") {
  const ModeBipartition p11{1, 1};
  CHECK(linalg::lambda_min(HermitianMatrix::identity(2) + ij(1)) == doctest::Approx(0.0).epsilon(1e-14));
  const FeasibilityResult two = is_separable(SymmetricMatrix::identity(4) * 2.0, p11);
  CHECK(two.status == Status::feasible);

  const FeasibilityResult tmsv = is_separable(oracle::two_mode_squeezed(0.5), p11);
  CHECK(tmsv.status == Status::infeasible);
  CHECK(spectra::ppt_defect(oracle::two_mode_squeezed(0.5), p11) < 0.0);

  for (const ModeBipartition& part : {ModeBipartition{1, 2}, ModeBipartition{2, 1}, ModeBipartition{1, 1}}) {
    const int n = part.modes();
    CHECK(is_separable(SymmetricMatrix::identity(2 * n), part).status == Status::feasible);
  }
}

TEST_CASE("product states are separable at any scale") {
  for (std::uint64_t i = 0; i < 5; ++i) {
    const QuantumCovarianceMatrix a = ensemble::sample_rqcm({1, 1.0, false}, {31, i});
    const QuantumCovarianceMatrix c = ensemble::sample_rqcm({2, 1.0, false}, {32, i});
    RealMatrix s = RealMatrix::Zero(6, 6);
    s.topLeftCorner(2, 2) = a.matrix().matrix();
    s.bottomRightCorner(4, 4) = c.matrix().matrix();
    const SymmetricMatrix prod(s);
    CHECK(is_separable(prod, {1, 2}).status == Status::feasible);
    CHECK(is_separable(prod * 2.0, {1, 2}).status == Status::feasible);
  }
}

TEST_CASE("upper bound for k copies") {
  const UpperBound u2 = upper_bound_k(SymmetricMatrix::identity(4), {1, 1}, 2);
  const ComplexMatrix expect = 2.0 * ComplexMatrix::Identity(2, 2) - ij(1).matrix();
  CHECK((u2.matrix.matrix() - expect).cwiseAbs().maxCoeff() < 1e-14);
  // the vacuum saturates A >= iJ, so A - iJ = I - iJ is singular
  CHECK(u2.near_singular);

  // k -> infinity: the Schur complement C - Bt (A - iJ)^- B
  const QuantumCovarianceMatrix s = ensemble::sample_rqcm({3, 1.0, false}, {41, 0});
  const ModeBipartition part{1, 2};
  const ensemble::Blocks b = ensemble::blocks(s, part);
  const HermitianMatrix a_minus = HermitianMatrix(b.a) - ij(1);
  const ComplexMatrix bc = b.b.cast<Complex>();
  const ComplexMatrix schur =
      b.c.matrix().cast<Complex>() - bc.transpose() * linalg::pinv_herm(a_minus).matrix() * bc;
  const UpperBound big = upper_bound_k(s.matrix(), part, 1000000);
  CHECK((big.matrix.matrix() - schur).cwiseAbs().maxCoeff() <= 1e-4);

  // Hermitian by construction, also before symmetrization
  const UpperBound u5 = upper_bound_k(s.matrix(), part, 5);
  CHECK((u5.matrix.matrix() - u5.matrix.matrix().adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
  const ComplexMatrix raw = 1.25 * schur - 0.25 * ij(2).matrix();
  CHECK((raw - raw.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((u5.matrix.matrix() - raw).cwiseAbs().maxCoeff() <= 1e-12);

  CHECK_THROWS_AS(upper_bound_k(s.matrix(), part, 1), DomainError);
}

TEST_CASE("k-extendability of known states") {
  const ModeBipartition p11{1, 1};
  const SymmetricMatrix two = SymmetricMatrix::identity(4) * 2.0;
  for (int k : {1, 2, 3, 5, 16, 64}) {
    CAPTURE(k);
    CHECK(is_k_extendable(two, p11, k).status == Status::feasible);
  }
  const SymmetricMatrix tmsv = oracle::two_mode_squeezed(0.5);
  CHECK(is_k_extendable(tmsv, p11, 1).status == Status::feasible);
  CHECK(is_k_extendable(tmsv, p11, 2).status == Status::infeasible);
  CHECK(is_k_extendable(SymmetricMatrix::identity(8), {2, 2}, 64).status == Status::feasible);
  CHECK_THROWS_AS(is_k_extendable(two, p11, 0), DomainError);
}

TEST_CASE("k-extendability is monotone in k") {
  const ModeBipartition p11{1, 1};
  int exceptions = 0, undecided = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const QuantumCovarianceMatrix s = ensemble::sample_rqcm({2, 1.0, false}, {51, i});
    bool prev = true;
    for (int k = 2; k <= 8; ++k) {
      const FeasibilityResult r = is_k_extendable(s, p11, k);
      if (r.status == Status::undecided) ++undecided;
      if (r.feasible()) {
        CHECK(verify_witness(*r.witness, ij(1), upper_bound_k(s.matrix(), p11, k).matrix, 1e-8));
        if (!prev) ++exceptions;
      }
      prev = r.feasible();
    }
  }
  CHECK(exceptions == 0);
  CHECK(undecided == 0);
}

TEST_CASE("Simon equivalence at one plus one modes") {
  const ModeBipartition p11{1, 1};
  int agree = 0;
  const int count = 300;
  for (std::uint64_t i = 0; i < count; ++i) {
    const QuantumCovarianceMatrix s = ensemble::sample_rqcm({2, 1.0, false}, {61, i});
    const FeasibilityResult r = is_separable(s, p11);
    const double d = spectra::ppt_defect(s, p11);
    if (r.feasible()) CHECK(d >= -1e-7);
    if (r.feasible() == (d >= -1e-8) || std::abs(d) < 1e-6) ++agree;
  }
  CHECK(agree >= 0.99 * count);
}

TEST_CASE("max extendability report") {
  const QuantumCovarianceMatrix vac = QuantumCovarianceMatrix::certify(SymmetricMatrix::identity(4));
  const ExtendabilityReport r = max_extendability(vac, {1, 1});
  CHECK(r.separable);
  CHECK(r.ppt);
  CHECK(r.max_k_at_cap);
  CHECK(r.max_k == 64);
  CHECK(r.per_k.empty());

  const QuantumCovarianceMatrix sq = QuantumCovarianceMatrix::certify(oracle::two_mode_squeezed(0.5));
  const ExtendabilityReport e = max_extendability(sq, {1, 1}, 16);
  CHECK_FALSE(e.separable);
  CHECK_FALSE(e.ppt);
  CHECK(e.max_k == 1);
  CHECK_FALSE(e.max_k_at_cap);
  REQUIRE_FALSE(e.per_k.empty());
  CHECK(e.per_k.front().k == 2);
  CHECK(e.per_k.front().status == Status::infeasible);

  // the doubling/bisection answer matches a linear scan
  for (std::uint64_t i = 0; i < 15; ++i) {
    const QuantumCovarianceMatrix s = ensemble::sample_rqcm({2, 1.0, false}, {71, i});
    const ExtendabilityReport rep = max_extendability(s, {1, 1}, 12);
    for (std::size_t j = 1; j < rep.per_k.size(); ++j) CHECK(rep.per_k[j - 1].k < rep.per_k[j].k);
    if (rep.separable) {
      CHECK(rep.max_k_at_cap);
      continue;
    }
    int linear = 1;
    while (linear < 12 && is_k_extendable(s, {1, 1}, linear + 1).feasible()) ++linear;
    CHECK(rep.max_k == linear);
    CHECK(rep.max_k_at_cap == (linear == 12));
  }
  CHECK_THROWS_AS(max_extendability(vac, {1, 1}, 1), DomainError);
}
