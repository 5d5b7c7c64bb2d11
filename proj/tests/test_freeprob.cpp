#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rqcm/errors.hpp"
#include "rqcm/freeprob.hpp"

using namespace rqcm;
using namespace rqcm::freeprob;
using std::numbers::pi;

namespace {

// The explicit sigma = 1 symplectic density, with real cube roots.
double closed_form_sigma1(double x) {
  const double inner = -16 * std::pow(x, 6) + 264 * std::pow(x, 4) - 237 * x * x - 11;
  const double a = -8 * std::pow(x, 6) + 510 * std::pow(x, 4) + 3 * (9 * std::sqrt(inner) + 73) * x * x + 8;
  const double c = std::cbrt(a);
  return (-4 * std::pow(x, 4) - 73 * x * x + c * c - 4) / (2 * std::sqrt(3.0) * pi * x * c);
}

// Plain composite Simpson, used as an oracle independent of the adaptive code.
template <typename F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("cubic roots") {
  // (g - 1)(g - 2i)(g + 3) expanded
  const Complex r1 = 1.0, r2 = Complex(0, 2), r3 = -3.0;
  const CubicCoeffs p{1.0, -(r1 + r2 + r3), r1 * r2 + r1 * r3 + r2 * r3, -r1 * r2 * r3};
  const auto roots = cubic_roots(p);
  for (Complex r : {r1, r2, r3}) {
    double best = 1e300;
    for (Complex g : roots) best = std::min(best, std::abs(g - r));
    CHECK(best < 1e-12);
  }
  // triple root
  const auto t = cubic_roots({1.0, -3.0, 3.0, -1.0});
  for (Complex g : t) CHECK(std::abs(g - 1.0) < 1e-5);
  CHECK(std::abs(eval_cubic(p, r2)) < 1e-12);
}

TEST_CASE("adaptive quadrature") {
  CHECK(adaptive_simpson([](double x) { return std::exp(x); }, 0, 1, 1e-10) ==
        doctest::Approx(std::exp(1.0) - 1).epsilon(1e-10));
  const double half_disc = integrate_sqrt_edges([](double x) { return std::sqrt(1 - x * x); }, -1, 1, 1e-10);
  CHECK(half_disc == doctest::Approx(pi / 2).epsilon(1e-9));
}

TEST_CASE("semicircle density") {
  CHECK(semicircle_density(0, 1, 0) == doctest::Approx(1 / pi));
  CHECK(semicircle_density(0, 1, 2) == 0.0);
  CHECK(semicircle_density(0, 1, -2) == 0.0);
  CHECK(semicircle_density(0, 1, 2.5) == 0.0);
  const double m = integrate_sqrt_edges([](double x) { return semicircle_density(0.7, 1.3, x); }, 0.7 - 2.6,
                                        0.7 + 2.6, 1e-9);
  CHECK(m == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("edges R and L") {
  CHECK(edge_r(1.0) == doctest::Approx(1.5 * std::sqrt(3.0)).epsilon(1e-12));
  CHECK(edge_r(1.0) == doctest::Approx(2.598076211).epsilon(1e-9));
  const double s = 0.01;
  CHECK(std::abs(edge_r(s) - (1 + std::sqrt(2.0) * s + s * s / 4)) <= 1e-5);
  CHECK(edge_l(0.5) == doctest::Approx(0.3690087298).epsilon(1e-9));
  CHECK(edge_l(0.9) == doctest::Approx(0.0341400536).epsilon(1e-8));
  CHECK_THROWS_AS(edge_l(1.0), DomainError);
  CHECK_THROWS_AS(edge_l(1.5), DomainError);
  CHECK_THROWS_AS(edge_r(-1.0), DomainError);

  const EdgeSet e = edges(0.5);
  CHECK(e.l.has_value());
  CHECK((0 < *e.l && *e.l < e.r));
  CHECK(e.sqrt_f >= 1.0);
  CHECK_FALSE(edges(2.0).l.has_value());
}

TEST_CASE("edge sqrt F") {
  CHECK(edge_sqrt_f(1.0) == doctest::Approx(3.942616978).epsilon(1e-9));
  CHECK(edge_sqrt_f(1.0) == doctest::Approx(std::sqrt(9 * std::sqrt(3.0) / 2 + 31.0 / 4)).epsilon(1e-12));
  CHECK(std::abs(edge_sqrt_f(0.01) - (1 + 2 * std::sqrt(2.0) * 0.01)) <= 1e-3);
  const double surd = std::sqrt(11.0 / 2 + 5 * std::sqrt(5.0) / 2);
  CHECK(surd == doctest::Approx(3.33019).epsilon(1e-5));
  CHECK(edge_sqrt_f(100.0) / 100.0 == doctest::Approx(surd).epsilon(0.01));
}

TEST_CASE("mu_sigma density") {
  // small sigma: the Bernoulli transform z / (z^2 - 1) solves the cubic
  const Complex z(0.3, 0.2);
  const auto p = mu_sigma_cubic(1e-8, z);
  CHECK(std::abs(eval_cubic(p, z / (z * z - 1.0))) < 1e-12);

  const Support s1 = mu_sigma_support(1.0);
  CHECK(s1.intervals.size() == 1);
  CHECK(s1.hi() == doctest::Approx(edge_r(1.0)));
  for (double x : {-2.5, -1.0, 0.0, 0.5, 2.0, 2.59}) CHECK(mu_sigma_density(1.0, x) > 0.0);
  CHECK(mu_sigma_density(1.0, 2.6) < 1e-6);
  CHECK(support_mass([](double x) { return mu_sigma_density(1.0, x); }, s1) == doctest::Approx(1.0).epsilon(1e-3));

  const Support s5 = mu_sigma_support(0.5);
  CHECK(s5.intervals.size() == 2);
  for (double x : {0.0, 0.1, 0.2, 0.3, 0.36}) CHECK(mu_sigma_density(0.5, x) < 1e-6);
  CHECK(mu_sigma_density(0.5, 1.0) > 0.1);
  CHECK(support_mass([](double x) { return mu_sigma_density(0.5, x); }, s5) == doctest::Approx(1.0).epsilon(1e-3));

  // edges and phase transition
  for (double sig : {0.3, 1.0, 3.0}) {
    CHECK(mu_sigma_density(sig, edge_r(sig) + 1e-3) < 1e-6);
    CHECK(mu_sigma_density(sig, -edge_r(sig) - 1e-3) < 1e-6);
  }
  CHECK(mu_sigma_density(0.99, 0.0) < 1e-6);
  CHECK(mu_sigma_density(1.01, 0.0) > 1e-3);
}

TEST_CASE("Cauchy branch at infinity") {
  const double sig = 0.7;
  const auto fam = [sig](Complex z) { return mu_sigma_cubic(sig, z); };
  const Complex g = track_cauchy_root(fam, 1000.0, 1.0, 1.0);
  CHECK(g.imag() < 0.0);
  CHECK(std::abs(Complex(1000.0, 1.0) * g - 1.0) < 1e-3);
}

TEST_CASE("symplectic limit density") {
  const Support s = symplectic_support(1.0);
  CHECK(s.lo() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(s.hi() == doctest::Approx(3.94262).epsilon(1e-3 / 3.94262));

  for (int i = 1; i <= 20; ++i) {
    const double x = 1.0 + (edge_sqrt_f(1.0) - 1.0) * i / 21.0;
    CHECK(symplectic_limit_density(1.0, x) == doctest::Approx(closed_form_sigma1(x)).epsilon(1e-6));
  }
  for (double sig : {0.5, 1.0, 10.0}) {
    const Support sp = symplectic_support(sig);
    const double mass = support_mass([sig](double x) { return symplectic_limit_density(sig, x); }, sp);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(symplectic_limit_density(sig, edge_sqrt_f(sig) + 1e-3) < 1e-6);
    CHECK(symplectic_limit_density(sig, 0.99) < 1e-6);
  }
  CHECK_THROWS_AS(symplectic_limit_density(1.0, -1.0), DomainError);
}

TEST_CASE("purity rate LD") {
  CHECK(purity_rate_ld(1.0) == doctest::Approx(0.865668379).epsilon(1e-6));
  CHECK(purity_rate_ld(1.0) == doctest::Approx(0.865668).epsilon(1e-4 / 0.865668));
  CHECK(purity_rate_ld(0.01) <= 0.02);
  CHECK(purity_rate_ld(0.01) >= 0.0);
  for (double sig : {0.1, 0.5, 1.0, 4.0}) {
    CHECK(purity_rate_ld(sig) <= std::log(edge_r(sig)));
    // Simpson oracle on the semicircle substitution x = R + 2 sigma cos(theta)
    const double r = edge_r(sig);
    const double ref = simpson(
        [&](double th) {
          const double x = r + 2 * sig * std::cos(th);
          return std::log(x) * 2 * std::pow(std::sin(th), 2) / pi;
        },
        0.0, pi, 2000);
    CHECK(purity_rate_ld(sig) == doctest::Approx(ref).epsilon(1e-8));
  }
}

TEST_CASE("energy per mode") {
  CHECK(energy_per_mode(1.0) == doctest::Approx(2.49289).epsilon(1e-3 / 2.49289));
  CHECK(energy_per_mode(1.0) == doctest::Approx(2.492893598).epsilon(1e-6));
  for (double sig : {0.3, 1.0, 5.0}) {
    CHECK(energy_per_mode(sig) <= edge_sqrt_f(sig));
    CHECK(energy_per_mode(sig) >= 1.0);
  }
}

TEST_CASE("marginal density") {
  const double r = edge_r(1.0);
  CHECK(theoretical_marginal_density(1.0, 1.0, 2.0) == doctest::Approx(semicircle_density(r, 1.0, 2.0)));
  CHECK(theoretical_marginal_density(1.0, 0.25, r) == doctest::Approx(semicircle_density(0, 0.5, 0)));
  CHECK(theoretical_marginal_density(1.0, 0.25, r - 1.001) == 0.0);
  CHECK(theoretical_marginal_density(1.0, 0.25, r + 1.001) == 0.0);
  CHECK(theoretical_marginal_density(1.0, 0.25, r - 0.999) > 0.0);
  const DensityCurve c = marginal_curve(1.0, 0.25, 101);
  CHECK(c.support.lo() == doctest::Approx(r - 1.0).epsilon(1e-3));
  CHECK(c.support.hi() == doctest::Approx(r + 1.0).epsilon(1e-3));
  CHECK_THROWS_AS(theoretical_marginal_density(1.0, 0.0, 1.0), DomainError);
}

TEST_CASE("density curves") {
  for (const DensityCurve& c : {mu_sigma_curve(0.5, 401), eigen_curve(1.0, 401), symplectic_curve(1.0, 401),
                                marginal_curve(2.0, 0.5, 401), semicircle_curve(0.0, 1.0, 401)}) {
    CHECK(c.grid.size() == 401);
    CHECK(c.total_mass == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(c.trapezoid_mass() == doctest::Approx(1.0).epsilon(1e-2));
    for (std::size_t i = 0; i < c.grid.size(); ++i) {
      CHECK(c.density[i] >= 0.0);
      if (i) CHECK(c.grid[i] > c.grid[i - 1]);
      if (c.density[i] > 1e-9) CHECK(c.support.contains(c.grid[i], 1e-12));
    }
  }
  const DensityCurve sc = semicircle_curve(0.0, 1.0, 5);
  CHECK(sc(0.0) == doctest::Approx(1 / pi));
  CHECK(sc(3.0) == 0.0);
}
