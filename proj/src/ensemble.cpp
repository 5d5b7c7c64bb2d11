#include "rqcm/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rqcm/errors.hpp"
#include "rqcm/spectra.hpp"

namespace rqcm {

void ModeBipartition::validate(int n) const {
  if (m < 1 || l < 1 || m + l != n) {
    throw DimensionError("bipartition " + std::to_string(m) + ":" + std::to_string(l) +
                         " is inconsistent with " + std::to_string(n) + " modes");
  }
}

QuantumCovarianceMatrix QuantumCovarianceMatrix::certify(SymmetricMatrix s, double tol,
                                                         std::optional<double> shift) {
  if (s.dim() < 2 || s.dim() % 2 != 0) {
    throw DimensionError("covariance matrix must have even dimension >= 2, got " +
                         std::to_string(s.dim()));
  }
  const double defect = spectra::qcm_defect(s);
  if (defect < -tol) throw NotPSD("S - iJ is not positive semidefinite", defect);
  const int modes = static_cast<int>(s.dim() / 2);
  return QuantumCovarianceMatrix(std::move(s), modes, defect, shift);
}

namespace ensemble {

double GoeSpec::effective_sigma() const {
  return normalized ? sigma / std::sqrt(2.0 * half_dim) : sigma;
}

void GoeSpec::validate() const {
  if (half_dim < 1) throw DimensionError("GOE half dimension must be >= 1");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("GOE sigma must be finite and > 0");
}

RealMatrix symplectic_j(int n) {
  if (n < 1) throw DimensionError("symplectic form needs n >= 1");
  RealMatrix j = RealMatrix::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    j(2 * k, 2 * k + 1) = 1.0;
    j(2 * k + 1, 2 * k) = -1.0;
  }
  return j;
}

SymplecticForm symplectic_form(int n) {
  RealMatrix j = symplectic_j(n);
  HermitianMatrix i_j(ComplexMatrix(Complex(0.0, 1.0) * j.cast<Complex>()));
  return {std::move(j), std::move(i_j)};
}

SymmetricMatrix sample_goe(const GoeSpec& spec, RngStream& rng) {
  spec.validate();
  const double sigma = spec.effective_sigma();
  const double diag_sigma = std::sqrt(2.0) * sigma;
  const Eigen::Index d = 2 * static_cast<Eigen::Index>(spec.half_dim);
  RealMatrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    g(i, i) = diag_sigma * rng.normal();
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const double x = sigma * rng.normal();
      g(i, j) = x;
      g(j, i) = x;
    }
  }
  return SymmetricMatrix(g);
}

SymmetricMatrix sample_goe(const GoeSpec& spec, RngSeed seed) {
  RngStream rng(seed);
  return sample_goe(spec, rng);
}

namespace {
int half_dim_of(const SymmetricMatrix& g) {
  if (g.dim() < 2 || g.dim() % 2 != 0) {
    throw DimensionError("expected an even-dimensional matrix, got " + std::to_string(g.dim()));
  }
  return static_cast<int>(g.dim() / 2);
}
}  // namespace

double rqcm_shift(const SymmetricMatrix& g) {
  const int n = half_dim_of(g);
  return linalg::lambda_max(symplectic_form(n).i_j - HermitianMatrix(g));
}

QuantumCovarianceMatrix rqcm_from(const SymmetricMatrix& g, ShiftRule rule) {
  double shift = rqcm_shift(g);
  if (rule == ShiftRule::clamped) shift = std::max(0.0, shift);
  return QuantumCovarianceMatrix::certify(g.shifted(shift), kQcmTol, shift);
}

QuantumCovarianceMatrix sample_rqcm(const GoeSpec& spec, RngSeed seed, ShiftRule rule) {
  return rqcm_from(sample_goe(spec, seed), rule);
}

QuantumCovarianceMatrix marginal(const QuantumCovarianceMatrix& s, int m) {
  if (m < 1 || m >= s.modes()) {
    throw DimensionError("marginal: need 1 <= m < " + std::to_string(s.modes()) + ", got " +
                         std::to_string(m));
  }
  return QuantumCovarianceMatrix::certify(
      SymmetricMatrix(s.matrix().matrix().topLeftCorner(2 * m, 2 * m)));
}

Blocks blocks(const SymmetricMatrix& s, const ModeBipartition& part) {
  if (s.dim() % 2 != 0) throw DimensionError("blocks: odd dimension");
  part.validate(static_cast<int>(s.dim() / 2));
  const Eigen::Index a = 2 * part.m;
  const Eigen::Index c = 2 * part.l;
  const RealMatrix& full = s.matrix();
  return {SymmetricMatrix(full.topLeftCorner(a, a)), full.topRightCorner(a, c),
          SymmetricMatrix(full.bottomRightCorner(c, c))};
}

Blocks blocks(const QuantumCovarianceMatrix& s, const ModeBipartition& part) {
  return blocks(s.matrix(), part);
}

SymmetricMatrix assemble(const Blocks& b) {
  const Eigen::Index a = b.a.dim();
  const Eigen::Index c = b.c.dim();
  if (b.b.rows() != a || b.b.cols() != c) throw DimensionError("assemble: off-diagonal block shape");
  RealMatrix full(a + c, a + c);
  full.topLeftCorner(a, a) = b.a.matrix();
  full.topRightCorner(a, c) = b.b;
  full.bottomLeftCorner(c, a) = b.b.transpose();
  full.bottomRightCorner(c, c) = b.c.matrix();
  return SymmetricMatrix(full);
}

SymmetricMatrix swap_subsystems(const SymmetricMatrix& s, const ModeBipartition& part) {
  const Blocks b = blocks(s, part);
  return assemble({b.c, b.b.transpose(), b.a});
}

}  // namespace ensemble
}  // namespace rqcm
