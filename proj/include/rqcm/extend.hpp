#pragma once

// Entanglement decisions for bipartite Gaussian states, all reduced to one
// question: is there a real symmetric X with L <= X <= U (Hermitian L, U)?
//
//   separable     : Bt (A + iJ)^- B  <=  theta  <=  C + iJ
//   k-extendable  : iJ  <=  Delta  <=  k/(k-1) [C - Bt (A - iJ)^- B] - iJ/(k-1)
//
// Extendability is always with respect to the second subsystem; use
// ensemble::swap_subsystems to test the first one.

#include <optional>
#include <vector>

#include "rqcm/ensemble.hpp"
#include "rqcm/linalg.hpp"

namespace rqcm::extend {

enum class Status { feasible, infeasible, undecided };
const char* to_string(Status status);

/// barrier: path-following on  max t  s.t.  X - L >= tI, U - X >= tI, with a
///   checked dual certificate for infeasibility. Handles bounds whose gap
///   U - L is singular, which is the generic case for the ensemble.
/// dykstra: cyclic projections; only reliable when the feasible set has
///   interior.
enum class Method { barrier, dykstra };
const char* to_string(Method method);

struct SolverOptions {
  Method method = Method::barrier;
  double tol = 1e-8;             ///< allowed violation of either LMI
  int max_iterations = 5000;     ///< Newton steps or Dykstra cycles
  double stall_tol = 1e-10;      ///< Dykstra: movement below which a violated problem is infeasible
  double rel_cutoff = linalg::kDefaultPinvCutoff;
};

struct SandwichProblem {
  HermitianMatrix lower;
  HermitianMatrix upper;
  SolverOptions options;
};

struct FeasibilityResult {
  Status status = Status::undecided;
  std::optional<SymmetricMatrix> witness;  ///< present iff feasible
  double residual = 0.0;                   ///< total violation at the best iterate
  int iterations = 0;
  /// Barrier only: certified upper bound on max_X min(lambda_min(X - L),
  /// lambda_min(U - X)). Infeasible results carry a bound below -tol.
  std::optional<double> dual_bound;
  /// Set by the callers that build L, U through a pseudo-inverse when the
  /// inverted matrix had eigenvalues below the cutoff.
  bool near_singular = false;

  bool feasible() const noexcept { return status == Status::feasible; }
};

/// max(0, -lambda_min(X - L)) + max(0, -lambda_min(U - X)): what is left of
/// the upper violation once X is lifted onto {X >= L}. At least
/// -lambda_min(U - L) for any X.
double sandwich_residual(const SymmetricMatrix& x, const HermitianMatrix& lower,
                         const HermitianMatrix& upper);

/// Independent post-hoc check of a witness with fresh eigendecompositions.
bool verify_witness(const SymmetricMatrix& x, const HermitianMatrix& lower,
                    const HermitianMatrix& upper, double tol);

/// Dispatches on problem.options.method. Both methods start from Re((L + U) / 2)
/// and only report feasible after verify_witness.
FeasibilityResult solve_sandwich(const SandwichProblem& problem);

/// Cyclic Dykstra projections onto {H >= L}, {H <= U} and the real symmetric
/// subspace.
FeasibilityResult solve_sandwich_dykstra(const SandwichProblem& problem);
FeasibilityResult solve_sandwich_barrier(const SandwichProblem& problem);

/// Bt (A + iJ_{2m})^- B. Throws NotPSD if A + iJ has an eigenvalue below -1e-6.
HermitianMatrix lower_bound_matrix(const SymmetricMatrix& s, const ModeBipartition& part,
                                   double rel_cutoff = linalg::kDefaultPinvCutoff);

FeasibilityResult is_separable(const SymmetricMatrix& s, const ModeBipartition& part,
                               const SolverOptions& options = {});
FeasibilityResult is_separable(const QuantumCovarianceMatrix& s, const ModeBipartition& part,
                               const SolverOptions& options = {});

struct UpperBound {
  HermitianMatrix matrix;
  bool near_singular = false;  ///< A - iJ had eigenvalues at or below the cutoff
};

/// k/(k-1) (C - Bt (A - iJ)^- B) - iJ_{2l} / (k-1), for k >= 2.
UpperBound upper_bound_k(const SymmetricMatrix& s, const ModeBipartition& part, int k,
                         double rel_cutoff = linalg::kDefaultPinvCutoff);

/// k = 1 is feasible by convention.
FeasibilityResult is_k_extendable(const SymmetricMatrix& s, const ModeBipartition& part, int k,
                                  const SolverOptions& options = {});
FeasibilityResult is_k_extendable(const QuantumCovarianceMatrix& s, const ModeBipartition& part,
                                  int k, const SolverOptions& options = {});

struct KProbe {
  int k;
  Status status;
  double residual;
};

struct ExtendabilityReport {
  bool separable = false;
  Status separability_status = Status::undecided;
  double separability_residual = 0.0;
  int k_cap = 64;
  /// Largest k found extendable; equals k_cap when max_k_at_cap is set.
  int max_k = 1;
  /// True when the state is extendable at k_cap ("max_k >= k_cap").
  bool max_k_at_cap = false;
  std::vector<KProbe> per_k;  ///< ascending in k
  bool ppt = false;
  double ppt_defect = 0.0;
  /// Some probe was undecided and was counted as infeasible.
  bool undecided = false;
};

/// Separability, PPT and the largest extendable k in [2, k_cap] by doubling
/// then bisection. Separable states are reported as max_k >= k_cap without
/// a per-k search.
ExtendabilityReport max_extendability(const QuantumCovarianceMatrix& s, const ModeBipartition& part,
                                      int k_cap = 64, const SolverOptions& options = {});

}  // namespace rqcm::extend
