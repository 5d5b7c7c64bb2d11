#include "rqcm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rqcm/errors.hpp"

namespace rqcm {

SymmetricMatrix::SymmetricMatrix(const RealMatrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("SymmetricMatrix: matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
  data_ = (m + m.transpose()) * 0.5;
}

SymmetricMatrix SymmetricMatrix::identity(Eigen::Index dim) {
  return SymmetricMatrix(RealMatrix::Identity(dim, dim));
}

SymmetricMatrix SymmetricMatrix::zero(Eigen::Index dim) {
  return SymmetricMatrix(RealMatrix::Zero(dim, dim));
}

SymmetricMatrix SymmetricMatrix::diagonal(const RealVector& d) {
  return SymmetricMatrix(RealMatrix(d.asDiagonal()));
}

SymmetricMatrix SymmetricMatrix::operator+(const SymmetricMatrix& o) const {
  SymmetricMatrix r;
  r.data_ = data_ + o.data_;
  return r;
}

SymmetricMatrix SymmetricMatrix::operator-(const SymmetricMatrix& o) const {
  SymmetricMatrix r;
  r.data_ = data_ - o.data_;
  return r;
}

SymmetricMatrix SymmetricMatrix::operator*(double c) const {
  SymmetricMatrix r;
  r.data_ = data_ * c;
  return r;
}

SymmetricMatrix SymmetricMatrix::shifted(double c) const {
  SymmetricMatrix r = *this;
  r.data_.diagonal().array() += c;
  return r;
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("HermitianMatrix: matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
  data_ = (m + m.adjoint()) * 0.5;
  for (Eigen::Index i = 0; i < data_.rows(); ++i) data_(i, i) = data_(i, i).real();
}

HermitianMatrix::HermitianMatrix(const SymmetricMatrix& s) {
  data_ = s.matrix().cast<Complex>();
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index dim) {
  return HermitianMatrix(SymmetricMatrix::identity(dim));
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const {
  HermitianMatrix r;
  r.data_ = data_ + o.data_;
  return r;
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& o) const {
  HermitianMatrix r;
  r.data_ = data_ - o.data_;
  return r;
}

HermitianMatrix HermitianMatrix::operator*(double c) const {
  HermitianMatrix r;
  r.data_ = data_ * c;
  return r;
}

HermitianMatrix HermitianMatrix::shifted(double c) const {
  HermitianMatrix r = *this;
  r.data_.diagonal().array() += c;
  return r;
}

SymmetricMatrix HermitianMatrix::real_part() const { return SymmetricMatrix(data_.real()); }

namespace linalg {
namespace {

template <typename Matrix>
auto solve(const Matrix& m, int options) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, options);
  if (es.info() != Eigen::Success) {
    double residual = std::nan("");
    if (options & Eigen::ComputeEigenvectors) {
      residual = (m * es.eigenvectors() - es.eigenvectors() * es.eigenvalues().asDiagonal()).norm();
    }
    throw ConvergenceError("eigensolver did not converge (dim " + std::to_string(m.rows()) +
                           ", residual " + std::to_string(residual) + ")");
  }
  return es;
}

void require_nonempty(Eigen::Index dim, const char* what) {
  if (dim < 1) throw DimensionError(std::string(what) + ": empty matrix");
}

}  // namespace

HermEigen herm_eigen(const HermitianMatrix& h) {
  require_nonempty(h.dim(), "herm_eigen");
  auto es = solve(h.matrix(), Eigen::ComputeEigenvectors);
  return {es.eigenvalues(), es.eigenvectors()};
}

SymEigen sym_eigen(const SymmetricMatrix& s) {
  require_nonempty(s.dim(), "sym_eigen");
  auto es = solve(s.matrix(), Eigen::ComputeEigenvectors);
  return {es.eigenvalues(), es.eigenvectors()};
}

RealVector herm_eigenvalues(const HermitianMatrix& h) {
  require_nonempty(h.dim(), "herm_eigenvalues");
  return solve(h.matrix(), Eigen::EigenvaluesOnly).eigenvalues();
}

RealVector sym_eigenvalues(const SymmetricMatrix& s) {
  require_nonempty(s.dim(), "sym_eigenvalues");
  return solve(s.matrix(), Eigen::EigenvaluesOnly).eigenvalues();
}

double lambda_min(const HermitianMatrix& h) { return herm_eigenvalues(h)(0); }
double lambda_max(const HermitianMatrix& h) {
  const RealVector v = herm_eigenvalues(h);
  return v(v.size() - 1);
}
double lambda_min(const SymmetricMatrix& s) { return sym_eigenvalues(s)(0); }
double lambda_max(const SymmetricMatrix& s) {
  const RealVector v = sym_eigenvalues(s);
  return v(v.size() - 1);
}

double op_norm(const HermitianMatrix& h) {
  const RealVector v = herm_eigenvalues(h);
  return std::max(std::abs(v(0)), std::abs(v(v.size() - 1)));
}

double op_norm(const SymmetricMatrix& s) {
  const RealVector v = sym_eigenvalues(s);
  return std::max(std::abs(v(0)), std::abs(v(v.size() - 1)));
}

SymmetricMatrix psd_sqrt(const SymmetricMatrix& s, double tol) {
  const SymEigen eig = sym_eigen(s);
  if (eig.values(0) < -tol) throw NotPSD("psd_sqrt: matrix is not positive semidefinite", eig.values(0));
  const RealVector roots = eig.values.cwiseMax(0.0).cwiseSqrt();
  return SymmetricMatrix(eig.vectors * roots.asDiagonal() * eig.vectors.transpose());
}

HermitianMatrix pinv_herm(const HermitianMatrix& h, double rel_cutoff) {
  const HermEigen eig = herm_eigen(h);
  const double scale = eig.values.cwiseAbs().maxCoeff();
  RealVector inv = RealVector::Zero(eig.values.size());
  for (Eigen::Index k = 0; k < inv.size(); ++k) {
    const double lam = eig.values(k);
    if (std::abs(lam) > rel_cutoff * scale) inv(k) = 1.0 / lam;
  }
  return HermitianMatrix(ComplexMatrix(eig.vectors * inv.asDiagonal() * eig.vectors.adjoint()));
}

double log_det_spd(const SymmetricMatrix& s) {
  const RealVector v = sym_eigenvalues(s);
  if (v(0) <= 0.0) throw NotPD("log_det_spd: matrix is not positive definite", v(0));
  return v.array().log().sum();
}

SymmetricMatrix real_embed(const HermitianMatrix& h) {
  const Eigen::Index d = h.dim();
  RealMatrix out(2 * d, 2 * d);
  const RealMatrix re = h.matrix().real();
  const RealMatrix im = h.matrix().imag();
  out.topLeftCorner(d, d) = re;
  out.topRightCorner(d, d) = -im;
  out.bottomLeftCorner(d, d) = im;
  out.bottomRightCorner(d, d) = re;
  return SymmetricMatrix(out);
}

double min_gap(const HermitianMatrix& upper, const HermitianMatrix& lower) {
  if (upper.dim() != lower.dim()) throw DimensionError("min_gap: dimension mismatch");
  return lambda_min(upper - lower);
}

}  // namespace linalg
}  // namespace rqcm
