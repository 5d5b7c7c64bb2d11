#pragma once

#include <array>
#include <complex>
#include <functional>

namespace rqcm::freeprob {

using Complex = std::complex<double>;

/// Coefficients {a, b, c, d} of a g^3 + b g^2 + c g + d.
using CubicCoeffs = std::array<Complex, 4>;

/// All three roots of a cubic with complex coefficients (closed-form Cardano,
/// then Aberth-Ehrlich refinement on the original polynomial). If the leading
/// coefficient vanishes relative to the others the missing roots are returned
/// as infinities.
std::array<Complex, 3> cubic_roots(const CubicCoeffs& p);

Complex eval_cubic(const CubicCoeffs& p, Complex g);

/// The cubic satisfied by a Cauchy transform, as a function of z.
using CubicFamily = std::function<CubicCoeffs(Complex z)>;

/// Follows the root that behaves like 1/z at infinity from z = x + iY (Y
/// large) down to z = x + i*eps, always picking the root nearest to the
/// previous one. The physical branch is analytic in the upper half plane, so
/// it never collides with the other sheets along the way.
/// Throws NumericalError if the tracked root leaves the lower half plane.
Complex track_cauchy_root(const CubicFamily& family, double x, double eps, double scale);

/// -Im g(x + i0) / pi, with g from track_cauchy_root evaluated at eps and
/// eps/2 and combined by Richardson extrapolation. Clamped at zero.
double stieltjes_density(const CubicFamily& family, double x, double eps, double scale);

}  // namespace rqcm::freeprob
