#include "rqcm/quadrature.hpp"

#include <cmath>

namespace rqcm::freeprob {

namespace {

struct Panel {
  double a, fa, m, fm, b, fb, whole;
};

double simpson(double a, double fa, double fm, double b, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double recurse(const Integrand& f, const Panel& p, double tol, int depth) {
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(p.a, p.fa, flm, p.m, p.fm);
  const double right = simpson(p.m, p.fm, frm, p.b, p.fb);
  const double delta = left + right - p.whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return recurse(f, {p.a, p.fa, lm, flm, p.m, p.fm, left}, 0.5 * tol, depth - 1) +
         recurse(f, {p.m, p.fm, rm, frm, p.b, p.fb, right}, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const Integrand& f, double a, double b, double tol, int max_depth) {
  if (a == b) return 0.0;
  // Seed with four panels so that integrands vanishing at the three
  // initial nodes are not mistaken for zero.
  double total = 0.0;
  constexpr int kPanels = 4;
  const double h = (b - a) / kPanels;
  for (int k = 0; k < kPanels; ++k) {
    const double lo = a + k * h;
    const double hi = (k + 1 == kPanels) ? b : lo + h;
    const double mid = 0.5 * (lo + hi);
    const double flo = f(lo), fmid = f(mid), fhi = f(hi);
    total += recurse(f, {lo, flo, mid, fmid, hi, fhi, simpson(lo, flo, fmid, hi, fhi)},
                     tol / kPanels, max_depth);
  }
  return total;
}

double integrate_sqrt_edges(const Integrand& f, double a, double b, double tol) {
  const double mid = 0.5 * (a + b);
  const double half = std::sqrt(mid - a);
  const Integrand left = [&](double u) { return 2.0 * u * f(a + u * u); };
  const Integrand right = [&](double u) { return 2.0 * u * f(b - u * u); };
  return adaptive_simpson(left, 0.0, half, 0.5 * tol) + adaptive_simpson(right, 0.0, half, 0.5 * tol);
}

}  // namespace rqcm::freeprob
