#include "rqcm/extend.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rqcm/errors.hpp"
#include "rqcm/spectra.hpp"

namespace rqcm::extend {

namespace {

constexpr double kBoundPsdTol = 1e-6;
constexpr int kMaxCenteringSteps = 40;
constexpr double kDecrementFloor = 1e-13;

// Frobenius projection onto {H : H >= floor}.
ComplexMatrix project_above(const ComplexMatrix& h, const ComplexMatrix& floor) {
  const HermEigen e = linalg::herm_eigen(HermitianMatrix(ComplexMatrix(h - floor)));
  if (e.values.minCoeff() >= 0.0) return h;
  const RealVector clipped = e.values.cwiseMax(0.0);
  return floor + e.vectors * clipped.asDiagonal() * e.vectors.adjoint();
}

// Frobenius projection onto {H : H <= ceil}.
ComplexMatrix project_below(const ComplexMatrix& h, const ComplexMatrix& ceil) {
  const HermEigen e = linalg::herm_eigen(HermitianMatrix(ComplexMatrix(ceil - h)));
  if (e.values.minCoeff() >= 0.0) return h;
  const RealVector clipped = e.values.cwiseMax(0.0);
  return ceil - e.vectors * clipped.asDiagonal() * e.vectors.adjoint();
}

struct Pinv {
  HermitianMatrix matrix;
  double lambda_min;
  bool truncated;
};

Pinv pinv_flagged(const HermitianMatrix& h, double rel_cutoff) {
  const HermEigen e = linalg::herm_eigen(h);
  const double scale = e.values.cwiseAbs().maxCoeff();
  const double cut = rel_cutoff * scale;
  RealVector inv(e.values.size());
  bool truncated = false;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    if (std::abs(e.values[i]) <= cut) {
      inv[i] = 0.0;
      truncated = true;
    } else {
      inv[i] = 1.0 / e.values[i];
    }
  }
  ComplexMatrix m = e.vectors * inv.asDiagonal() * e.vectors.adjoint();
  return {HermitianMatrix(m), e.values.size() ? e.values.minCoeff() : 0.0, truncated};
}

HermitianMatrix congruence(const RealMatrix& b, const HermitianMatrix& p) {
  const ComplexMatrix bc = b.cast<Complex>();
  return HermitianMatrix(ComplexMatrix(bc.transpose() * p.matrix() * bc));
}

}  // namespace

const char* to_string(Method method) {
  return method == Method::barrier ? "barrier" : "dykstra";
}

const char* to_string(Status status) {
  switch (status) {
    case Status::feasible: return "feasible";
    case Status::infeasible: return "infeasible";
    case Status::undecided: return "undecided";
  }
  return "unknown";
}

double sandwich_residual(const SymmetricMatrix& x, const HermitianMatrix& lower,
                         const HermitianMatrix& upper) {
  const HermitianMatrix hx(x);
  const double below = linalg::lambda_min(hx - lower);
  const double above = linalg::lambda_min(upper - hx);
  return std::max(0.0, -below) + std::max(0.0, -above);
}

bool verify_witness(const SymmetricMatrix& x, const HermitianMatrix& lower,
                    const HermitianMatrix& upper, double tol) {
  if (x.dim() != lower.dim() || x.dim() != upper.dim()) return false;
  if (!x.matrix().allFinite()) return false;
  const HermitianMatrix hx(x);
  const HermEigen lo = linalg::herm_eigen(hx - lower);
  const HermEigen hi = linalg::herm_eigen(upper - hx);
  return lo.values.minCoeff() >= -tol && hi.values.minCoeff() >= -tol;
}

FeasibilityResult solve_sandwich(const SandwichProblem& problem) {
  const Eigen::Index d = problem.lower.dim();
  if (d != problem.upper.dim()) {
    throw DimensionError("sandwich bounds differ in size: " + std::to_string(d) + " vs " +
                         std::to_string(problem.upper.dim()));
  }
  if (d == 0) throw DimensionError("sandwich problem of dimension 0");
  if (problem.options.method == Method::dykstra) return solve_sandwich_dykstra(problem);
  return solve_sandwich_barrier(problem);
}

FeasibilityResult solve_sandwich_dykstra(const SandwichProblem& problem) {
  const auto& opt = problem.options;
  const Eigen::Index d = problem.lower.dim();
  if (d != problem.upper.dim() || d == 0) throw DimensionError("sandwich bounds must share a positive size");

  const ComplexMatrix& lo = problem.lower.matrix();
  const ComplexMatrix& hi = problem.upper.matrix();

  FeasibilityResult result;
  ComplexMatrix x = (0.5 * (lo + hi)).real().cast<Complex>();
  {
    const SymmetricMatrix x0(RealMatrix(x.real()));
    result.residual = sandwich_residual(x0, problem.lower, problem.upper);
    if (verify_witness(x0, problem.lower, problem.upper, opt.tol)) {
      result.status = Status::feasible;
      result.witness = x0;
      return result;
    }
  }

  ComplexMatrix p1 = ComplexMatrix::Zero(d, d);
  ComplexMatrix p2 = ComplexMatrix::Zero(d, d);
  ComplexMatrix p3 = ComplexMatrix::Zero(d, d);
  double best = result.residual;

  for (int it = 1; it <= opt.max_iterations; ++it) {
    const ComplexMatrix prev = x;

    ComplexMatrix y = project_above(x + p1, lo);
    p1 += x - y;
    x = y;

    y = project_below(x + p2, hi);
    p2 += x - y;
    x = y;

    y = (x + p3).real().cast<Complex>();
    p3 += x - y;
    x = y;

    const SymmetricMatrix xr(RealMatrix(x.real()));
    const double residual = sandwich_residual(xr, problem.lower, problem.upper);
    best = std::min(best, residual);
    result.iterations = it;
    result.residual = residual;

    if (verify_witness(xr, problem.lower, problem.upper, opt.tol)) {
      result.status = Status::feasible;
      result.witness = xr;
      return result;
    }
    const double movement = (x - prev).norm();
    if (movement < opt.stall_tol && residual > 10.0 * opt.tol) {
      result.status = Status::infeasible;
      result.residual = best;
      return result;
    }
  }
  result.status = Status::undecided;
  result.residual = best;
  return result;
}

namespace {

// Coordinates of a real symmetric d x d matrix: x_k multiplies E_k, which is
// e_a e_a^T on the diagonal and e_a e_b^T + e_b e_a^T off it.
struct SymCoords {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> ab;

  explicit SymCoords(Eigen::Index d) {
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index b = a; b < d; ++b) ab.emplace_back(a, b);
  }
  Eigen::Index size() const { return static_cast<Eigen::Index>(ab.size()); }

  RealMatrix assemble(const RealVector& x, Eigen::Index d) const {
    RealMatrix m(d, d);
    for (Eigen::Index k = 0; k < size(); ++k) {
      const auto [a, b] = ab[k];
      m(a, b) = m(b, a) = x[k];
    }
    return m;
  }
  RealVector coords(const RealMatrix& m) const {
    RealVector x(size());
    for (Eigen::Index k = 0; k < size(); ++k) x[k] = m(ab[k].first, ab[k].second);
    return x;
  }
  // tr(M E_k) for Hermitian M.
  double trace_with(const ComplexMatrix& m, Eigen::Index k) const {
    const auto [a, b] = ab[k];
    return a == b ? m(a, a).real() : 2.0 * m(a, b).real();
  }
};

// Inverse and log-determinant of a Hermitian matrix, or nothing if it is not
// positive definite.
std::optional<std::pair<ComplexMatrix, double>> inverse_pd(const ComplexMatrix& a) {
  Eigen::LLT<ComplexMatrix> llt(a);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const ComplexMatrix& factor = llt.matrixLLT();
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < factor.rows(); ++i) {
    const double l = factor(i, i).real();
    if (!(l > 0.0)) return std::nullopt;
    logdet += 2.0 * std::log(l);
  }
  ComplexMatrix inv = llt.solve(ComplexMatrix::Identity(a.rows(), a.cols()));
  return std::make_pair(std::move(inv), logdet);
}

// tr(P E_j P E_k), summed over the one or two outer products in each E.
void add_hessian_block(const SymCoords& c, const ComplexMatrix& p, RealMatrix& h) {
  const Eigen::Index n = c.size();
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto [a, b] = c.ab[j];
    for (Eigen::Index k = j; k < n; ++k) {
      const auto [cc, dd] = c.ab[k];
      // E_j = e_a e_b^T (+ e_b e_a^T), E_k = e_c e_d^T (+ e_d e_c^T);
      // tr(P e_a e_b^T P e_c e_d^T) = P_da P_bc.
      Complex s = p(dd, a) * p(b, cc);
      if (a != b) s += p(dd, b) * p(a, cc);
      if (cc != dd) {
        s += p(cc, a) * p(b, dd);
        if (a != b) s += p(cc, b) * p(a, dd);
      }
      h(j, k) += s.real();
    }
  }
}

struct BarrierPoint {
  RealVector x;
  double t = 0.0;
  ComplexMatrix p, q;  // (X - L - tI)^-1, (U - X - tI)^-1
  double value = 0.0;  // -tau t - log det - log det
};

std::optional<BarrierPoint> evaluate(const SymCoords& c, const ComplexMatrix& lo,
                                     const ComplexMatrix& hi, const RealVector& x, double t,
                                     double tau) {
  const Eigen::Index d = lo.rows();
  const ComplexMatrix xm = c.assemble(x, d).cast<Complex>();
  const ComplexMatrix shift = t * ComplexMatrix::Identity(d, d);
  auto a1 = inverse_pd(xm - lo - shift);
  if (!a1) return std::nullopt;
  auto a2 = inverse_pd(hi - xm - shift);
  if (!a2) return std::nullopt;
  BarrierPoint pt;
  pt.x = x;
  pt.t = t;
  pt.p = std::move(a1->first);
  pt.q = std::move(a2->first);
  pt.value = -tau * t - a1->second - a2->second;
  return pt;
}

// Upper bound on the optimal margin t* from the barrier's dual estimate
// Z1 = P / tau, Z2 = Q / tau, repaired so that Re Z1 = Re Z2 holds exactly.
// Weak duality then gives t* <= (tr Z2 U - tr Z1 L) / (tr Z1 + tr Z2)
// whenever both repaired matrices are PSD.
std::optional<double> dual_bound(const BarrierPoint& pt, const ComplexMatrix& lo,
                                 const ComplexMatrix& hi) {
  const ComplexMatrix diff = (pt.p - pt.q).real().cast<Complex>();
  const ComplexMatrix z1 = pt.p - 0.5 * diff;
  const ComplexMatrix z2 = pt.q + 0.5 * diff;
  if (linalg::lambda_min(HermitianMatrix(z1)) < 0.0) return std::nullopt;
  if (linalg::lambda_min(HermitianMatrix(z2)) < 0.0) return std::nullopt;
  const double scale = z1.trace().real() + z2.trace().real();
  if (!(scale > 0.0)) return std::nullopt;
  return ((z2 * hi).trace().real() - (z1 * lo).trace().real()) / scale;
}

}  // namespace

FeasibilityResult solve_sandwich_barrier(const SandwichProblem& problem) {
  const auto& opt = problem.options;
  const Eigen::Index d = problem.lower.dim();
  if (d != problem.upper.dim() || d == 0) throw DimensionError("sandwich bounds must share a positive size");

  const ComplexMatrix& lo = problem.lower.matrix();
  const ComplexMatrix& hi = problem.upper.matrix();
  const SymCoords coords(d);
  const Eigen::Index nx = coords.size();
  const double nu = 2.0 * static_cast<double>(d);

  FeasibilityResult result;
  const SymmetricMatrix x0 = HermitianMatrix(ComplexMatrix(0.5 * (lo + hi))).real_part();
  const HermitianMatrix hx0(x0);
  const double slack0 =
      std::min(linalg::lambda_min(hx0 - problem.lower), linalg::lambda_min(problem.upper - hx0));
  result.residual = sandwich_residual(x0, problem.lower, problem.upper);

  auto accept = [&](const SymmetricMatrix& x) {
    const double r = sandwich_residual(x, problem.lower, problem.upper);
    result.residual = std::min(result.residual, r);
    if (verify_witness(x, problem.lower, problem.upper, opt.tol)) {
      result.status = Status::feasible;
      result.witness = x;
      result.residual = r;
      return true;
    }
    return false;
  };
  if (accept(x0)) return result;

  const double scale = 1.0 + linalg::op_norm(problem.upper - problem.lower);
  double tau = nu / scale;
  auto pt = evaluate(coords, lo, hi, coords.coords(x0.matrix()), slack0 - 0.5 * scale, tau);
  if (!pt) throw NumericalError("barrier start point is not strictly feasible");

  RealMatrix h(nx + 1, nx + 1);
  RealVector g(nx + 1);
  int steps = 0;
  while (steps < opt.max_iterations) {
    // Centering at the current tau. Newton converges in a handful of steps;
    // past that the decrement is at the rounding floor of the barrier value.
    for (int inner = 0; inner < kMaxCenteringSteps; ++inner) {
      if (steps >= opt.max_iterations) break;
      const ComplexMatrix p2 = pt->p * pt->p;
      const ComplexMatrix q2 = pt->q * pt->q;
      for (Eigen::Index k = 0; k < nx; ++k) {
        g[k] = coords.trace_with(pt->q, k) - coords.trace_with(pt->p, k);
        h(k, nx) = coords.trace_with(q2, k) - coords.trace_with(p2, k);
      }
      g[nx] = -tau + pt->p.trace().real() + pt->q.trace().real();
      h(nx, nx) = p2.trace().real() + q2.trace().real();
      h.topLeftCorner(nx, nx).setZero();
      add_hessian_block(coords, pt->p, h);
      add_hessian_block(coords, pt->q, h);
      const RealMatrix hs = h.selfadjointView<Eigen::Upper>();
      Eigen::LDLT<RealMatrix> ldlt(hs);
      const RealVector step = ldlt.solve(-g);
      const double decrement = -g.dot(step);
      ++steps;
      if (!step.allFinite()) break;
      const double floor = kDecrementFloor * std::max(1.0, std::abs(pt->value));
      if (decrement < floor) break;

      double alpha = 1.0;
      std::optional<BarrierPoint> next;
      for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
        next = evaluate(coords, lo, hi, pt->x + alpha * step.head(nx), pt->t + alpha * step[nx], tau);
        if (next && next->value <= pt->value - 0.25 * alpha * decrement) break;
        next.reset();
      }
      if (!next) break;
      pt = std::move(next);
      if (pt->t >= -opt.tol) {
        if (accept(SymmetricMatrix(coords.assemble(pt->x, d)))) {
          result.iterations = steps;
          return result;
        }
      }
      if (decrement < 1e3 * floor) break;
    }

    result.iterations = steps;
    const SymmetricMatrix xc(coords.assemble(pt->x, d));
    if (accept(xc)) return result;
    if (const auto bound = dual_bound(*pt, lo, hi)) {
      result.dual_bound = std::min(result.dual_bound.value_or(*bound), *bound);
      if (*bound < -opt.tol) {
        result.status = Status::infeasible;
        return result;
      }
    }
    if (nu / tau < 1e-3 * opt.tol) break;
    pt->value -= 9.0 * tau * pt->t;
    tau *= 10.0;
  }
  result.status = Status::undecided;
  return result;
}

HermitianMatrix lower_bound_matrix(const SymmetricMatrix& s, const ModeBipartition& part,
                                   double rel_cutoff) {
  part.validate(static_cast<int>(s.dim() / 2));
  const ensemble::Blocks bl = ensemble::blocks(s, part);
  const HermitianMatrix a_plus = HermitianMatrix(bl.a) + ensemble::symplectic_form(part.m).i_j;
  const Pinv inv = pinv_flagged(a_plus, rel_cutoff);
  if (inv.lambda_min < -kBoundPsdTol) throw NotPSD("A + iJ is not positive semidefinite", inv.lambda_min);
  return congruence(bl.b, inv.matrix);
}

FeasibilityResult is_separable(const SymmetricMatrix& s, const ModeBipartition& part,
                               const SolverOptions& options) {
  const HermitianMatrix lower = lower_bound_matrix(s, part, options.rel_cutoff);
  const ensemble::Blocks bl = ensemble::blocks(s, part);
  const HermitianMatrix upper = HermitianMatrix(bl.c) + ensemble::symplectic_form(part.l).i_j;
  return solve_sandwich({lower, upper, options});
}

FeasibilityResult is_separable(const QuantumCovarianceMatrix& s, const ModeBipartition& part,
                               const SolverOptions& options) {
  return is_separable(s.matrix(), part, options);
}

UpperBound upper_bound_k(const SymmetricMatrix& s, const ModeBipartition& part, int k,
                         double rel_cutoff) {
  if (k < 2) throw DomainError("upper_bound_k needs k >= 2, got " + std::to_string(k));
  part.validate(static_cast<int>(s.dim() / 2));
  const ensemble::Blocks bl = ensemble::blocks(s, part);
  const HermitianMatrix a_minus = HermitianMatrix(bl.a) - ensemble::symplectic_form(part.m).i_j;
  const Pinv inv = pinv_flagged(a_minus, rel_cutoff);
  const HermitianMatrix schur = HermitianMatrix(bl.c) - congruence(bl.b, inv.matrix);
  const double kk = static_cast<double>(k);
  const HermitianMatrix ij = ensemble::symplectic_form(part.l).i_j;
  return {schur * (kk / (kk - 1.0)) - ij * (1.0 / (kk - 1.0)), inv.truncated};
}

FeasibilityResult is_k_extendable(const SymmetricMatrix& s, const ModeBipartition& part, int k,
                                  const SolverOptions& options) {
  if (k < 1) throw DomainError("k must be >= 1, got " + std::to_string(k));
  if (k == 1) {
    part.validate(static_cast<int>(s.dim() / 2));
    FeasibilityResult trivial;
    trivial.status = Status::feasible;
    trivial.witness = ensemble::blocks(s, part).c;
    return trivial;
  }
  const UpperBound ub = upper_bound_k(s, part, k, options.rel_cutoff);
  FeasibilityResult r = solve_sandwich({ensemble::symplectic_form(part.l).i_j, ub.matrix, options});
  r.near_singular = ub.near_singular;
  return r;
}

FeasibilityResult is_k_extendable(const QuantumCovarianceMatrix& s, const ModeBipartition& part,
                                  int k, const SolverOptions& options) {
  return is_k_extendable(s.matrix(), part, k, options);
}

ExtendabilityReport max_extendability(const QuantumCovarianceMatrix& s, const ModeBipartition& part,
                                      int k_cap, const SolverOptions& options) {
  if (k_cap < 2) throw DomainError("k_cap must be >= 2, got " + std::to_string(k_cap));
  part.validate(s.modes());

  ExtendabilityReport report;
  report.k_cap = k_cap;
  report.ppt_defect = spectra::ppt_defect(s, part);
  report.ppt = report.ppt_defect >= -options.tol;

  const FeasibilityResult sep = is_separable(s, part, options);
  report.separability_status = sep.status;
  report.separability_residual = sep.residual;
  report.separable = sep.feasible();
  if (sep.status == Status::undecided) report.undecided = true;
  if (report.separable) {
    report.max_k = k_cap;
    report.max_k_at_cap = true;
    return report;
  }

  auto probe = [&](int k) {
    const FeasibilityResult r = is_k_extendable(s, part, k, options);
    report.per_k.push_back({k, r.status, r.residual});
    if (r.status == Status::undecided) report.undecided = true;
    return r.feasible();
  };

  // Doubling: good is the largest k known feasible, bad the smallest known not.
  int good = 1;
  int bad = k_cap + 1;
  for (int k = 2;; k *= 2) {
    const int kk = std::min(k, k_cap);
    if (probe(kk)) {
      good = kk;
      if (kk == k_cap) break;
    } else {
      bad = kk;
      break;
    }
  }
  while (bad - good > 1) {
    const int mid = good + (bad - good) / 2;
    if (probe(mid)) good = mid;
    else bad = mid;
  }
  std::sort(report.per_k.begin(), report.per_k.end(),
            [](const KProbe& a, const KProbe& b) { return a.k < b.k; });
  report.max_k = good;
  report.max_k_at_cap = good == k_cap;
  return report;
}

}  // namespace rqcm::extend
