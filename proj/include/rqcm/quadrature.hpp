#pragma once

#include <functional>

namespace rqcm::freeprob {

using Integrand = std::function<double(double)>;

/// Adaptive Simpson on [a, b] to absolute tolerance tol.
double adaptive_simpson(const Integrand& f, double a, double b, double tol, int max_depth = 50);

/// Integral of f over [a, b] when f has square-root behaviour at both ends:
/// the halves are mapped through x = a + u^2 and x = b - u^2, which turns the
/// endpoint singularities of the derivative into smooth integrands.
double integrate_sqrt_edges(const Integrand& f, double a, double b, double tol);

}  // namespace rqcm::freeprob
