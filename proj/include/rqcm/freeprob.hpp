#pragma once

// Large-n limit laws of the ensemble.
//
//  * mu_sigma = Bernoulli(+-1) boxplus SC_sigma: limit of the spectrum of
//    iJ - G / sqrt(2n). Edges +-R(sigma), and a gap (-L, L) for sigma < 1.
//  * SC_{R(sigma), sigma}: limit spectrum of the normalized covariance matrix.
//  * Bernoulli boxtimes SC_{R(sigma), sigma}: limit of the eigenvalues of iJS,
//    whose non-negative half is the symplectic spectrum, supported on
//    [1, sqrt(F(sigma))].
//
// Densities of the two free convolutions come from a cubic equation for the
// Cauchy transform, solved in closed form and inverted with Stieltjes'
// formula slightly above the real axis.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rqcm/cubic.hpp"
#include "rqcm/quadrature.hpp"

namespace rqcm::freeprob {

/// Offset above the real axis for Stieltjes inversion (Richardson-refined).
inline constexpr double kStieltjesEps = 1e-7;
inline constexpr double kQuadTol = 1e-6;

/// Union of closed intervals, ascending and disjoint.
struct Support {
  std::vector<std::pair<double, double>> intervals;

  double lo() const { return intervals.front().first; }
  double hi() const { return intervals.back().second; }
  bool contains(double x, double slack = 0.0) const;
};

enum class CurveKind { mu, eigen, symplectic, marginal, semicircle };
const char* to_string(CurveKind kind);

struct DensityCurve {
  CurveKind kind = CurveKind::semicircle;
  double sigma = 0.0;
  std::vector<double> grid;
  std::vector<double> density;
  Support support;
  /// Mass over the support by adaptive quadrature of the exact density.
  double total_mass = 0.0;

  /// Trapezoid rule over the grid.
  double trapezoid_mass() const;
  /// Linear interpolation on the grid, zero outside it.
  double operator()(double x) const;
};

struct EdgeSet {
  double sigma = 0.0;
  double r = 0.0;
  std::optional<double> l;  ///< present iff sigma < 1
  double sqrt_f = 0.0;
};

double semicircle_density(double center, double sigma, double x);

/// Right edge of mu_sigma, and the shift of the normalized ensemble.
double edge_r(double sigma);
/// Inner edge of mu_sigma; only defined for 0 < sigma < 1 (DomainError otherwise).
double edge_l(double sigma);
/// Right edge sqrt(F(sigma)) of the limiting symplectic spectrum.
double edge_sqrt_f(double sigma);
EdgeSet edges(double sigma);

/// sigma^4 g^3 - 2 sigma^2 z g^2 + (z^2 - 1 + sigma^2) g - z.
CubicCoeffs mu_sigma_cubic(double sigma, Complex z);
/// z sigma^4 g^3 - sigma^2 (2 z^2 + sigma^2) g^2 + z (z^2 + 2 sigma^2 - m^2) g - z^2.
CubicCoeffs bernoulli_times_semicircle_cubic(double center, double sigma, Complex z);

Support mu_sigma_support(double sigma);
double mu_sigma_density(double sigma, double x);

Support symplectic_support(double sigma);
/// Density of the symplectic eigenvalues: twice the density of
/// Bernoulli boxtimes SC_{R(sigma), sigma} on x > 0.
double symplectic_limit_density(double sigma, double x);

/// Integral of log(x) against SC_{R(sigma), sigma}.
double purity_rate_ld(double sigma);
/// Mean symplectic eigenvalue in the limit.
double energy_per_mode(double sigma);

/// Limit spectrum of the first t*n modes: SC_{R(sigma), sqrt(t) sigma}.
double theoretical_marginal_density(double sigma, double t, double x);

/// Mass of a density over a support, integrating each interval with
/// square-root edge substitution.
double support_mass(const Integrand& f, const Support& support, double tol = kQuadTol);

/// Samples a curve on `points` equally spaced nodes spanning the support.
DensityCurve mu_sigma_curve(double sigma, int points);
DensityCurve eigen_curve(double sigma, int points);
DensityCurve symplectic_curve(double sigma, int points);
DensityCurve marginal_curve(double sigma, double t, int points);
DensityCurve semicircle_curve(double center, double sigma, int points);

}  // namespace rqcm::freeprob
