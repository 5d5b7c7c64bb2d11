#pragma once

// Sampling of GOE matrices and of random quantum covariance matrices (GOE
// draws shifted by lambda_max(iJ - G) so that S - iJ is PSD and singular),
// plus the symplectic form and block/marginal extraction.

#include <optional>
#include <utility>

#include "rqcm/linalg.hpp"
#include "rqcm/rng.hpp"

namespace rqcm {

/// Tolerance used to certify S >= iJ; the SDP precision used throughout.
inline constexpr double kQcmTol = 1e-8;

/// Split n = m + l of the modes; A is the first 2m x 2m block.
struct ModeBipartition {
  int m = 1;
  int l = 1;

  int modes() const noexcept { return m + l; }
  /// Throws DimensionError unless m, l >= 1 and m + l == n.
  void validate(int n) const;

  friend bool operator==(const ModeBipartition&, const ModeBipartition&) = default;
};

/// A 2n x 2n real symmetric S with lambda_min(S - iJ) >= -kQcmTol.
class QuantumCovarianceMatrix {
 public:
  /// Recomputes the QCM defect and throws NotPSD if S is not a covariance
  /// matrix within tol. `shift` records the identity shift used to build S,
  /// when there was one.
  static QuantumCovarianceMatrix certify(SymmetricMatrix s, double tol = kQcmTol,
                                         std::optional<double> shift = std::nullopt);

  const SymmetricMatrix& matrix() const noexcept { return s_; }
  int modes() const noexcept { return modes_; }
  /// lambda_min(S - iJ), computed at construction.
  double qcm_defect() const noexcept { return defect_; }
  std::optional<double> shift() const noexcept { return shift_; }

 private:
  QuantumCovarianceMatrix(SymmetricMatrix s, int modes, double defect, std::optional<double> shift)
      : s_(std::move(s)), modes_(modes), defect_(defect), shift_(shift) {}

  SymmetricMatrix s_;
  int modes_;
  double defect_;
  std::optional<double> shift_;
};

namespace ensemble {

struct GoeSpec {
  int half_dim = 1;   ///< n; the matrix is 2n x 2n
  double sigma = 1.0; ///< off-diagonal standard deviation
  bool normalized = false;

  /// sigma, or sigma / sqrt(2n) for the normalized ensemble.
  double effective_sigma() const;
  void validate() const;
};

/// Which shift turns a GOE draw into a covariance matrix. `always` adds
/// lambda_max(iJ - G) even when it is negative; `clamped` adds max(0, .).
enum class ShiftRule { always, clamped };

struct SymplecticForm {
  RealMatrix j;        ///< real antisymmetric J_{2n}, J^2 = -I
  HermitianMatrix i_j; ///< Hermitian iJ_{2n}, spectrum {-1, +1}
};

/// Direct sum of n copies of [[0, 1], [-1, 0]].
SymplecticForm symplectic_form(int n);
RealMatrix symplectic_j(int n);

/// Independent N(0, 2 sigma^2) diagonal and N(0, sigma^2) upper-triangular
/// entries, drawn row by row from the upper triangle.
SymmetricMatrix sample_goe(const GoeSpec& spec, RngStream& rng);
SymmetricMatrix sample_goe(const GoeSpec& spec, RngSeed seed);

/// lambda_max(iJ - G).
double rqcm_shift(const SymmetricMatrix& g);

/// S_G = G + lambda_max(iJ - G) I (or the clamped variant).
QuantumCovarianceMatrix rqcm_from(const SymmetricMatrix& g, ShiftRule rule = ShiftRule::always);

QuantumCovarianceMatrix sample_rqcm(const GoeSpec& spec, RngSeed seed,
                                    ShiftRule rule = ShiftRule::always);

/// Top-left 2m x 2m block, 1 <= m < n.
QuantumCovarianceMatrix marginal(const QuantumCovarianceMatrix& s, int m);

struct Blocks {
  SymmetricMatrix a; ///< 2m x 2m
  RealMatrix b;      ///< 2m x 2l
  SymmetricMatrix c; ///< 2l x 2l
};

Blocks blocks(const SymmetricMatrix& s, const ModeBipartition& part);
Blocks blocks(const QuantumCovarianceMatrix& s, const ModeBipartition& part);

/// Reassembles [A B; B^T C].
SymmetricMatrix assemble(const Blocks& blocks);

/// Moves the last l modes in front of the first m: the bipartition (m, l)
/// of S becomes (l, m) of the result.
SymmetricMatrix swap_subsystems(const SymmetricMatrix& s, const ModeBipartition& part);

}  // namespace ensemble
}  // namespace rqcm
