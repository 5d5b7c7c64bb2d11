#include "rqcm/spectra.hpp"

#include <string>

#include "rqcm/errors.hpp"

namespace rqcm {

const char* to_string(SpectrumKind kind) {
  switch (kind) {
    case SpectrumKind::ordinary: return "ordinary";
    case SpectrumKind::symplectic: return "symplectic";
    case SpectrumKind::ppt_defect: return "ppt_defect";
  }
  return "unknown";
}

namespace spectra {

SpectralSample spectrum(const QuantumCovarianceMatrix& s) {
  return {linalg::sym_eigenvalues(s.matrix()), SpectrumKind::ordinary, false};
}

SpectralSample symplectic_spectrum(const SymmetricMatrix& s, double tol) {
  if (s.dim() < 2 || s.dim() % 2 != 0) throw DimensionError("symplectic_spectrum: odd dimension");
  const Eigen::Index n = s.dim() / 2;
  const RealMatrix root = linalg::psd_sqrt(s, tol).matrix();
  // sqrt(S) J sqrt(S) is real antisymmetric, so i * that is Hermitian and
  // similar to iJS when S > 0.
  const RealMatrix k = root * ensemble::symplectic_j(static_cast<int>(n)) * root;
  const HermitianMatrix h(ComplexMatrix(Complex(0.0, 1.0) * k.cast<Complex>()));
  const RealVector all = linalg::herm_eigenvalues(h);

  SpectralSample out{all.tail(n), SpectrumKind::symplectic, false};
  for (Eigen::Index i = 0; i < n; ++i) {
    if (out.values(i) < kSymplecticFloor) {
      out.values(i) = 0.0;
      out.degenerate = true;
    }
  }
  return out;
}

SpectralSample symplectic_spectrum(const QuantumCovarianceMatrix& s) {
  return symplectic_spectrum(s.matrix());
}

double log_purity(const SymmetricMatrix& s) { return -0.5 * linalg::log_det_spd(s); }

double log_purity(const QuantumCovarianceMatrix& s) { return log_purity(s.matrix()); }

double purity_rate(const QuantumCovarianceMatrix& s) { return -log_purity(s) / s.modes(); }

HermitianMatrix partial_transpose_form(const ModeBipartition& part) {
  const int n = part.modes();
  RealMatrix k = ensemble::symplectic_j(n);
  k.bottomRightCorner(2 * part.l, 2 * part.l) *= -1.0;
  return HermitianMatrix(ComplexMatrix(Complex(0.0, 1.0) * k.cast<Complex>()));
}

double ppt_defect(const SymmetricMatrix& s, const ModeBipartition& part) {
  if (s.dim() % 2 != 0) throw DimensionError("ppt_defect: odd dimension");
  part.validate(static_cast<int>(s.dim() / 2));
  return linalg::lambda_min(HermitianMatrix(s) + partial_transpose_form(part));
}

double ppt_defect(const QuantumCovarianceMatrix& s, const ModeBipartition& part) {
  return ppt_defect(s.matrix(), part);
}

double qcm_defect(const SymmetricMatrix& s) {
  if (s.dim() < 2 || s.dim() % 2 != 0) throw DimensionError("qcm_defect: odd dimension");
  const int n = static_cast<int>(s.dim() / 2);
  return linalg::lambda_min(HermitianMatrix(s) - ensemble::symplectic_form(n).i_j);
}

}  // namespace spectra
}  // namespace rqcm
