#pragma once

// Observables of a covariance matrix: ordinary and symplectic spectra,
// purity, and the PPT / Heisenberg defects.

#include "rqcm/ensemble.hpp"
#include "rqcm/linalg.hpp"

namespace rqcm {

enum class SpectrumKind { ordinary, symplectic, ppt_defect };

const char* to_string(SpectrumKind kind);

struct SpectralSample {
  RealVector values;  ///< ascending
  SpectrumKind kind = SpectrumKind::ordinary;
  /// Set when a symplectic value fell below kSymplecticFloor and was reported as 0.
  bool degenerate = false;
};

namespace spectra {

inline constexpr double kSymplecticFloor = 1e-8;

SpectralSample spectrum(const QuantumCovarianceMatrix& s);

/// Positive half of the spectrum of sqrt(S) iJ sqrt(S): exactly n values.
SpectralSample symplectic_spectrum(const QuantumCovarianceMatrix& s);
/// Same for any PSD S (within tol) of even dimension.
SpectralSample symplectic_spectrum(const SymmetricMatrix& s, double tol = linalg::kDefaultPsdTol);

/// log(mu) = -log(det S) / 2.
double log_purity(const SymmetricMatrix& s);
double log_purity(const QuantumCovarianceMatrix& s);
/// -log(mu) / n.
double purity_rate(const QuantumCovarianceMatrix& s);

/// i (J_{2m} (+) -J_{2l}).
HermitianMatrix partial_transpose_form(const ModeBipartition& part);

/// lambda_min(S + i (J_{2m} (+) -J_{2l})); the state is PPT iff this is >= -tol.
double ppt_defect(const SymmetricMatrix& s, const ModeBipartition& part);
double ppt_defect(const QuantumCovarianceMatrix& s, const ModeBipartition& part);

/// lambda_min(S - iJ_{2n}).
double qcm_defect(const SymmetricMatrix& s);

}  // namespace spectra
}  // namespace rqcm
