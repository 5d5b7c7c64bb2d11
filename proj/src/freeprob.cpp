#include "rqcm/freeprob.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rqcm/errors.hpp"
#include "rqcm/quadrature.hpp"

namespace rqcm::freeprob {

namespace {

void require_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("sigma must be finite and > 0, got " + std::to_string(sigma));
  }
}

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 2) throw DomainError("a density curve needs at least 2 grid points");
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) grid[i] = lo + (hi - lo) * i / (points - 1);
  grid.back() = hi;
  return grid;
}

DensityCurve sample_curve(CurveKind kind, double sigma, const Integrand& f, Support support,
                          int points) {
  DensityCurve curve;
  curve.kind = kind;
  curve.sigma = sigma;
  curve.grid = linspace(support.lo(), support.hi(), points);
  curve.density.reserve(curve.grid.size());
  for (double x : curve.grid) curve.density.push_back(std::max(0.0, f(x)));
  curve.total_mass = support_mass(f, support);
  curve.support = std::move(support);
  return curve;
}

}  // namespace

bool Support::contains(double x, double slack) const {
  return std::any_of(intervals.begin(), intervals.end(), [&](const auto& iv) {
    return x >= iv.first - slack && x <= iv.second + slack;
  });
}

const char* to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::mu: return "mu";
    case CurveKind::eigen: return "eigen";
    case CurveKind::symplectic: return "symplectic";
    case CurveKind::marginal: return "marginal";
    case CurveKind::semicircle: return "semicircle";
  }
  return "unknown";
}

double DensityCurve::trapezoid_mass() const {
  double mass = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    mass += 0.5 * (density[i] + density[i - 1]) * (grid[i] - grid[i - 1]);
  }
  return mass;
}

double DensityCurve::operator()(double x) const {
  if (grid.empty() || x < grid.front() || x > grid.back()) return 0.0;
  const auto it = std::upper_bound(grid.begin(), grid.end(), x);
  if (it == grid.end()) return density.back();
  const std::size_t hi = static_cast<std::size_t>(it - grid.begin());
  const std::size_t lo = hi - 1;
  const double w = (x - grid[lo]) / (grid[hi] - grid[lo]);
  return (1.0 - w) * density[lo] + w * density[hi];
}

double semicircle_density(double center, double sigma, double x) {
  require_sigma(sigma);
  const double u = x - center;
  const double r2 = 4.0 * sigma * sigma - u * u;
  if (r2 <= 0.0) return 0.0;
  return std::sqrt(r2) / (2.0 * std::numbers::pi * sigma * sigma);
}

double edge_r(double sigma) {
  require_sigma(sigma);
  const double q = std::sqrt(8.0 + sigma * sigma);
  return (1.0 + sigma / 4.0 * (q - sigma)) * std::sqrt(1.0 + sigma / 2.0 * (q + sigma));
}

double edge_l(double sigma) {
  require_sigma(sigma);
  if (sigma >= 1.0) {
    throw DomainError("edge_l is only defined for sigma < 1 (single-interval support beyond), got " +
                      std::to_string(sigma));
  }
  const double q = std::sqrt(8.0 + sigma * sigma);
  return (1.0 - sigma / 4.0 * (q + sigma)) * std::sqrt(1.0 - sigma / 2.0 * (q - sigma));
}

double edge_sqrt_f(double sigma) {
  require_sigma(sigma);
  const double s = sigma;
  const double s2 = s * s, s3 = s2 * s, s4 = s2 * s2, s5 = s4 * s, s6 = s3 * s3;
  const double q = std::sqrt(s2 + 8.0);
  const double inner = -4096.0 * s6 + 78336.0 * s4 + 49152.0 * s2 + 4096.0 * q * s +
                       4096.0 * q * s5 + 33280.0 * q * s3 + 1024.0;
  const double f = 0.5 - s4 / 8.0 + 4.0 * s2 + q * s + q * s3 / 8.0 + std::sqrt(inner) / 64.0;
  return std::sqrt(f);
}

EdgeSet edges(double sigma) {
  EdgeSet e;
  e.sigma = sigma;
  e.r = edge_r(sigma);
  if (sigma < 1.0) e.l = edge_l(sigma);
  e.sqrt_f = edge_sqrt_f(sigma);
  return e;
}

CubicCoeffs mu_sigma_cubic(double sigma, Complex z) {
  const double s2 = sigma * sigma;
  return {Complex(s2 * s2, 0.0), -2.0 * s2 * z, z * z - 1.0 + s2, -z};
}

CubicCoeffs bernoulli_times_semicircle_cubic(double center, double sigma, Complex z) {
  const double s2 = sigma * sigma;
  return {z * s2 * s2, -s2 * (2.0 * z * z + s2), z * (z * z + 2.0 * s2 - center * center), -z * z};
}

Support mu_sigma_support(double sigma) {
  const double r = edge_r(sigma);
  if (sigma < 1.0) {
    const double l = edge_l(sigma);
    return {{{-r, -l}, {l, r}}};
  }
  return {{{-r, r}}};
}

double mu_sigma_density(double sigma, double x) {
  require_sigma(sigma);
  const CubicFamily family = [sigma](Complex z) { return mu_sigma_cubic(sigma, z); };
  return stieltjes_density(family, x, kStieltjesEps, 1.0 + sigma);
}

Support symplectic_support(double sigma) { return {{{1.0, edge_sqrt_f(sigma)}}}; }

double symplectic_limit_density(double sigma, double x) {
  require_sigma(sigma);
  if (x < 0.0) throw DomainError("symplectic_limit_density needs x >= 0");
  const double center = edge_r(sigma);
  const CubicFamily family = [sigma, center](Complex z) {
    return bernoulli_times_semicircle_cubic(center, sigma, z);
  };
  return 2.0 * stieltjes_density(family, x, kStieltjesEps, 1.0 + sigma + center);
}

double support_mass(const Integrand& f, const Support& support, double tol) {
  double mass = 0.0;
  const double per = tol / static_cast<double>(support.intervals.size());
  for (const auto& [lo, hi] : support.intervals) mass += integrate_sqrt_edges(f, lo, hi, per);
  return mass;
}

double purity_rate_ld(double sigma) {
  const double r = edge_r(sigma);
  const Integrand f = [r, sigma](double x) { return std::log(x) * semicircle_density(r, sigma, x); };
  return integrate_sqrt_edges(f, r - 2.0 * sigma, r + 2.0 * sigma, 1e-9);
}

double energy_per_mode(double sigma) {
  const Integrand f = [sigma](double x) { return x * symplectic_limit_density(sigma, x); };
  return support_mass(f, symplectic_support(sigma), 1e-6);
}

double theoretical_marginal_density(double sigma, double t, double x) {
  if (!(t > 0.0 && t <= 1.0)) throw DomainError("marginal fraction t must lie in (0, 1]");
  return semicircle_density(edge_r(sigma), std::sqrt(t) * sigma, x);
}

DensityCurve mu_sigma_curve(double sigma, int points) {
  return sample_curve(CurveKind::mu, sigma, [sigma](double x) { return mu_sigma_density(sigma, x); },
                      mu_sigma_support(sigma), points);
}

DensityCurve eigen_curve(double sigma, int points) {
  const double r = edge_r(sigma);
  return sample_curve(CurveKind::eigen, sigma,
                      [r, sigma](double x) { return semicircle_density(r, sigma, x); },
                      {{{r - 2.0 * sigma, r + 2.0 * sigma}}}, points);
}

DensityCurve symplectic_curve(double sigma, int points) {
  return sample_curve(CurveKind::symplectic, sigma,
                      [sigma](double x) { return symplectic_limit_density(sigma, x); },
                      symplectic_support(sigma), points);
}

DensityCurve marginal_curve(double sigma, double t, int points) {
  if (!(t > 0.0 && t <= 1.0)) throw DomainError("marginal fraction t must lie in (0, 1]");
  const double r = edge_r(sigma);
  const double width = std::sqrt(t) * sigma;
  return sample_curve(CurveKind::marginal, sigma,
                      [sigma, t](double x) { return theoretical_marginal_density(sigma, t, x); },
                      {{{r - 2.0 * width, r + 2.0 * width}}}, points);
}

DensityCurve semicircle_curve(double center, double sigma, int points) {
  return sample_curve(CurveKind::semicircle, sigma,
                      [center, sigma](double x) { return semicircle_density(center, sigma, x); },
                      {{{center - 2.0 * sigma, center + 2.0 * sigma}}}, points);
}

}  // namespace rqcm::freeprob
