#pragma once

// Dense spectral kernel: Hermitian / real-symmetric eigendecomposition and the
// matrix functions built on it. Every other module goes through here for
// lambda_min / lambda_max, square roots and pseudo-inverses.

#include <complex>
#include <Eigen/Dense>

namespace rqcm {

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using Complex = std::complex<double>;

/// Real symmetric matrix. Symmetry is exact: the constructor stores (M + M^T) / 2.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(const RealMatrix& m);

  static SymmetricMatrix identity(Eigen::Index dim);
  static SymmetricMatrix zero(Eigen::Index dim);
  static SymmetricMatrix diagonal(const RealVector& d);

  Eigen::Index dim() const noexcept { return data_.rows(); }
  const RealMatrix& matrix() const noexcept { return data_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return data_(i, j); }

  SymmetricMatrix operator+(const SymmetricMatrix& o) const;
  SymmetricMatrix operator-(const SymmetricMatrix& o) const;
  SymmetricMatrix operator*(double c) const;
  /// this + c * I
  SymmetricMatrix shifted(double c) const;

 private:
  RealMatrix data_;
};

/// Complex Hermitian matrix. Stores (M + M^*) / 2 with the diagonal made real.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& m);
  explicit HermitianMatrix(const SymmetricMatrix& s);

  static HermitianMatrix identity(Eigen::Index dim);

  Eigen::Index dim() const noexcept { return data_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return data_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return data_(i, j); }

  HermitianMatrix operator+(const HermitianMatrix& o) const;
  HermitianMatrix operator-(const HermitianMatrix& o) const;
  HermitianMatrix operator*(double c) const;
  HermitianMatrix shifted(double c) const;

  /// Entrywise real part; real symmetric because H is Hermitian.
  SymmetricMatrix real_part() const;

 private:
  ComplexMatrix data_;
};

/// Eigenvalues ascending, eigenvectors in matching columns.
template <typename Matrix>
struct EigenDecomposition {
  RealVector values;
  Matrix vectors;
};

using HermEigen = EigenDecomposition<ComplexMatrix>;
using SymEigen = EigenDecomposition<RealMatrix>;

namespace linalg {

inline constexpr double kDefaultPsdTol = 1e-8;
inline constexpr double kDefaultPinvCutoff = 1e-10;

HermEigen herm_eigen(const HermitianMatrix& h);
SymEigen sym_eigen(const SymmetricMatrix& s);

/// Ascending eigenvalues only; cheaper than a full decomposition.
RealVector herm_eigenvalues(const HermitianMatrix& h);
RealVector sym_eigenvalues(const SymmetricMatrix& s);

double lambda_min(const HermitianMatrix& h);
double lambda_max(const HermitianMatrix& h);
double lambda_min(const SymmetricMatrix& s);
double lambda_max(const SymmetricMatrix& s);

/// Largest |eigenvalue|.
double op_norm(const HermitianMatrix& h);
double op_norm(const SymmetricMatrix& s);

/// Symmetric PSD square root. Eigenvalues in [-tol, 0) are clipped to zero;
/// anything below -tol throws NotPSD.
SymmetricMatrix psd_sqrt(const SymmetricMatrix& s, double tol = kDefaultPsdTol);

/// Moore-Penrose pseudo-inverse through the spectrum. Eigenvalues with
/// |lambda| <= rel_cutoff * max|lambda| are treated as zero.
HermitianMatrix pinv_herm(const HermitianMatrix& h, double rel_cutoff = kDefaultPinvCutoff);

/// log det of a symmetric positive definite matrix as a sum of log-eigenvalues.
double log_det_spd(const SymmetricMatrix& s);

/// [[Re H, -Im H], [Im H, Re H]]; spectrum of H with every multiplicity doubled.
SymmetricMatrix real_embed(const HermitianMatrix& h);

/// lambda_min(upper - lower); nonnegative iff lower <= upper in Loewner order.
double min_gap(const HermitianMatrix& upper, const HermitianMatrix& lower);

}  // namespace linalg
}  // namespace rqcm
