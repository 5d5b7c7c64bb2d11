#include "rqcm/cubic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "rqcm/errors.hpp"

namespace rqcm::freeprob {

Complex eval_cubic(const CubicCoeffs& p, Complex g) {
  return ((p[0] * g + p[1]) * g + p[2]) * g + p[3];
}

namespace {

Complex eval_derivative(const CubicCoeffs& p, Complex g) {
  return (3.0 * p[0] * g + 2.0 * p[1]) * g + p[2];
}

// Aberth-Ehrlich simultaneous refinement. Cardano alone loses the small
// roots to cancellation when the roots span many orders of magnitude.
void polish(const CubicCoeffs& p, std::array<Complex, 3>& roots) {
  for (int it = 0; it < 60; ++it) {
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
      const Complex dp = eval_derivative(p, roots[k]);
      if (std::abs(dp) == 0.0) continue;
      const Complex w = eval_cubic(p, roots[k]) / dp;
      Complex repulsion(0.0, 0.0);
      for (int j = 0; j < 3; ++j) {
        if (j != k && roots[j] != roots[k]) repulsion += 1.0 / (roots[k] - roots[j]);
      }
      const Complex step = w / (1.0 - w * repulsion);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
      roots[k] -= step;
      worst = std::max(worst, std::abs(step) / std::max(std::abs(roots[k]), 1e-300));
    }
    if (worst < 1e-15) break;
  }
}

constexpr double kInf = std::numeric_limits<double>::infinity();

std::array<Complex, 3> quadratic_roots(Complex a, Complex b, Complex c) {
  if (std::abs(a) == 0.0) {
    if (std::abs(b) == 0.0) return {Complex(kInf, 0), Complex(kInf, 0), Complex(kInf, 0)};
    return {-c / b, Complex(kInf, 0), Complex(kInf, 0)};
  }
  const Complex disc = std::sqrt(b * b - 4.0 * a * c);
  // Pick the sign that avoids cancellation.
  const Complex q = -0.5 * (std::real(std::conj(b) * disc) >= 0.0 ? b + disc : b - disc);
  if (std::abs(q) == 0.0) return {Complex(0, 0), Complex(0, 0), Complex(kInf, 0)};
  return {q / a, c / q, Complex(kInf, 0)};
}

}  // namespace

std::array<Complex, 3> cubic_roots(const CubicCoeffs& p) {
  const double lower = std::max({std::abs(p[1]), std::abs(p[2]), std::abs(p[3])});
  if (std::abs(p[0]) <= 1e-300 || std::abs(p[0]) < 1e-14 * lower) {
    return quadratic_roots(p[1], p[2], p[3]);
  }
  const Complex a = p[0], b = p[1], c = p[2], d = p[3];
  const Complex d0 = b * b - 3.0 * a * c;
  const Complex d1 = 2.0 * b * b * b - 9.0 * a * b * c + 27.0 * a * a * d;
  const Complex root = std::sqrt(d1 * d1 - 4.0 * d0 * d0 * d0);
  Complex big = (std::abs(d1 + root) >= std::abs(d1 - root)) ? d1 + root : d1 - root;
  std::array<Complex, 3> out;
  if (std::abs(big) == 0.0) {
    // Triple root.
    out.fill(-b / (3.0 * a));
    return out;
  }
  const Complex cc = std::pow(0.5 * big, 1.0 / 3.0);
  const Complex xi(-0.5, std::sqrt(3.0) / 2.0);
  Complex rot(1.0, 0.0);
  for (int k = 0; k < 3; ++k) {
    const Complex ck = rot * cc;
    out[k] = -(b + ck + d0 / ck) / (3.0 * a);
    rot *= xi;
  }
  polish(p, out);
  return out;
}

namespace {

struct Pick {
  Complex root;
  double nearest;
  double second;
};

Pick nearest_root(const CubicFamily& family, Complex z, Complex previous) {
  const std::array<Complex, 3> roots = cubic_roots(family(z));
  std::array<double, 3> dist;
  for (int k = 0; k < 3; ++k) {
    dist[k] = std::isfinite(std::abs(roots[k])) ? std::abs(roots[k] - previous)
                                                 : std::numeric_limits<double>::infinity();
  }
  int best = 0;
  for (int k = 1; k < 3; ++k) {
    if (dist[k] < dist[best]) best = k;
  }
  double second = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    if (k != best) second = std::min(second, dist[k]);
  }
  return {roots[best], dist[best], second};
}

void check_half_plane(Complex g, double x) {
  if (!(g.imag() <= 1e-6 * (1.0 + std::abs(g)))) {
    throw NumericalError("branch selection failed at x = " + std::to_string(x) +
                         ": tracked root has Im g = " + std::to_string(g.imag()));
  }
}

// One continuation step from (y_from, g) to y_to, subdividing geometrically
// whenever the nearest root is not clearly closer than the runner-up.
Complex step_to(const CubicFamily& family, double x, double y_from, double y_to, Complex g,
                int depth = 0) {
  const Pick pick = nearest_root(family, Complex(x, y_to), g);
  if (pick.nearest <= 0.25 * pick.second || depth >= 40) return pick.root;
  const double y_mid = std::sqrt(y_from * y_to);
  const Complex g_mid = step_to(family, x, y_from, y_mid, g, depth + 1);
  return step_to(family, x, y_mid, y_to, g_mid, depth + 1);
}

}  // namespace

Complex track_cauchy_root(const CubicFamily& family, double x, double eps, double scale) {
  constexpr double kShrink = 0.8;
  double y = 1e3 * (1.0 + scale + std::abs(x));
  Complex g = nearest_root(family, Complex(x, y), 1.0 / Complex(x, y)).root;
  while (y > eps) {
    const double next = std::max(eps, y * kShrink);
    g = step_to(family, x, y, next, g);
    y = next;
  }
  check_half_plane(g, x);
  return g;
}

double stieltjes_density(const CubicFamily& family, double x, double eps, double scale) {
  const Complex g1 = track_cauchy_root(family, x, eps, scale);
  const Complex g2 = step_to(family, x, eps, 0.5 * eps, g1);
  check_half_plane(g2, x);
  const double d1 = -g1.imag() / std::numbers::pi;
  const double d2 = -g2.imag() / std::numbers::pi;
  return std::max(0.0, 2.0 * d2 - d1);
}

}  // namespace rqcm::freeprob
