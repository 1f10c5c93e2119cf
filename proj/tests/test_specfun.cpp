#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "ptwig/quadrature.hpp"
#include "ptwig/specfun.hpp"

using namespace ptwig;

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;
}

TEST_CASE("hermite polynomial basics") {
  CHECK(hermite_poly(0, 1.7) == 1.0);
  CHECK(hermite_poly(3, 1.0) == doctest::Approx(-4.0).epsilon(1e-14));
  // recurrence vs the explicit coefficient sum
  for (int n : {4, 7, 10, 14}) {
    for (double x : {-2.3, 0.3, 1.9}) {
      const double ref = oracles::hermite_by_coefficients(n, x);
      CHECK(hermite_poly(n, x) ==
            doctest::Approx(ref).epsilon(1e-11));
    }
  }
  CHECK_THROWS_AS(hermite_poly(-1, 0.0), std::domain_error);
  CHECK_THROWS_AS(hermite_poly(101, 0.0), std::domain_error);
  CHECK_THROWS_AS(hermite_poly(10, 20.5), std::domain_error);
}

TEST_CASE("oscillator eigenfunctions") {
  CHECK(oscillator_eigenfunction(0, 0.0) ==
        doctest::Approx(std::pow(std::numbers::pi, -0.25)).epsilon(1e-15));
  CHECK(oscillator_eigenfunction(1, 0.0) == 0.0);
  // normalization of u_7 by quadrature
  std::vector<double> u;
  auto f = [&](double x) {
    const double v = oscillator_eigenfunction(7, x);
    return v * v;
  };
  const double norm = integrate_adaptive(f, -20.0, 20.0, 1e-13);
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
  // no overflow at the domain edge
  CHECK(std::isfinite(oscillator_eigenfunction(100, 15.0)));
}

TEST_CASE("orthonormality under Gauss quadrature") {
  for (int n : {0, 3, 11, 30}) {
    for (int m : {0, 3, 11, 30}) {
      auto f = [&](double x) {
        return oscillator_eigenfunction(n, x) * oscillator_eigenfunction(m, x);
      };
      const double v = integrate_adaptive(f, -20.0, 20.0, 1e-12);
      CHECK(std::abs(v - (n == m ? 1.0 : 0.0)) < 1e-9);
    }
  }
}

TEST_CASE("log_gamma, pochhammer, double factorial") {
  // product recursion from Gamma(1/2) = sqrt(pi)
  double ref = std::log(kSqrtPi);
  for (double z = 0.5; z < 7.4; z += 1.0) ref += std::log(z);
  CHECK(log_gamma(7.5) == doctest::Approx(ref).epsilon(1e-14));
  CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(log_gamma(-3.0), std::domain_error);

  CHECK(pochhammer(3.7, 0) == 1.0);
  CHECK(pochhammer(0.5, 3) == doctest::Approx(15.0 / 8.0).epsilon(1e-15));
  CHECK(pochhammer(0.5, 3) ==
        doctest::Approx(double_factorial(2 * 3 - 1) / 8.0).epsilon(1e-15));

  CHECK(double_factorial(-1) == 1.0);
  CHECK(double_factorial(0) == 1.0);
  CHECK(double_factorial(7) == 105.0);
  CHECK(double_factorial(8) == 384.0);
}

TEST_CASE("lauricella terminating sum") {
  CHECK(lauricella_fa2({3.3, 0, 0, 0.5, 1.5}) == 1.0);
  CHECK(lauricella_fa2({1.5, 1, 0, 0.5, 0.5}) ==
        doctest::Approx(-2.0).epsilon(1e-14));

  SUBCASE("rational oracle agreement") {
    // the worked example: a = (eps+1)/2 at eps = 1.3
    const LauricellaArgs ex{(1.3 + 1.0) / 2.0, 2, 1, 0.5, 0.5};
    CHECK(lauricella_fa2(ex) ==
          doctest::Approx(lauricella_fa2_exact(ex)).epsilon(1e-14));

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> aval(0.3, 4.0);
    std::uniform_int_distribution<int> rs(0, 18);
    std::uniform_int_distribution<int> cpick(0, 1);
    for (int trial = 0; trial < 40; ++trial) {
      const LauricellaArgs args{aval(rng), rs(rng), rs(rng),
                                cpick(rng) ? 0.5 : 1.5,
                                cpick(rng) ? 0.5 : 1.5};
      const double exact = lauricella_fa2_exact(args);
      const double fast = lauricella_fa2(args);
      CHECK(std::abs(fast - exact) <=
            1e-12 * std::max(1.0, std::abs(exact)));
    }
  }

  SUBCASE("rational oracle at the truncation corner") {
    // the regime where the naive double sum loses ~30 digits
    for (double eps : {1.42207, 2.0}) {
      const LauricellaArgs args{(eps + 1.0) / 2.0, 35, 35, 0.5, 0.5};
      const double exact = lauricella_fa2_exact(args);
      const double fast = lauricella_fa2(args);
      CHECK(std::abs(fast - exact) <=
            1e-11 * std::max(1.0, std::abs(exact)));
    }
  }

  CHECK_THROWS_AS(lauricella_fa2({1.0, -1, 0, 0.5, 0.5}), std::domain_error);
  CHECK_THROWS_AS(lauricella_fa2({1.0, 61, 0, 0.5, 0.5}), std::domain_error);
  CHECK_THROWS_AS(lauricella_fa2({1.0, 0, 0, -0.5, 0.5}), std::domain_error);
}

TEST_CASE("half-line Hermite product integrals") {
  CHECK(erdelyi_halfline(0, 0, 2.0) ==
        doctest::Approx(kSqrtPi / 4.0).epsilon(1e-14));
  // the (0,1,1) value is sqrt(pi)/2, confirmed by the quadrature oracle
  const double direct = oracles::erdelyi_halfline_quad(0, 1, 1.0);
  CHECK(direct == doctest::Approx(kSqrtPi / 2.0).epsilon(1e-12));
  CHECK(erdelyi_halfline(0, 1, 1.0) ==
        doctest::Approx(kSqrtPi / 2.0).epsilon(1e-13));

  SUBCASE("closed form vs quadrature") {
    for (auto [mu, nu] : {std::pair{4, 2}, {7, 3}, {10, 10}, {13, 2}}) {
      for (double eps : {0.5, 1.42207, 2.7}) {
        const double closed = erdelyi_halfline(mu, nu, eps);
        const double quad = oracles::erdelyi_halfline_quad(mu, nu, eps);
        CHECK(std::abs(closed - quad) <=
              1e-10 * std::max(1.0, std::abs(quad)));
      }
    }
  }

  SUBCASE("symmetry in (mu, nu)") {
    for (auto [mu, nu] : {std::pair{3, 8}, {5, 2}, {12, 7}})
      CHECK(erdelyi_halfline(mu, nu, 1.7) == erdelyi_halfline(nu, mu, 1.7));
  }

  SUBCASE("parity identity across the origin") {
    for (int n : {0, 2, 5, 13, 21, 30}) {
      for (int m : {1, 3, 8, 30}) {
        for (double eps : {0.5, 1.0, 1.7, 2.0, 3.0}) {
          const double neg = oracles::erdelyi_negative_halfline_quad(n, m, eps);
          const double sign = ((n % 2 + m % 2) % 2 == 0) ? 1.0 : -1.0;
          const double pos = erdelyi_halfline(n, m, eps);
          CHECK(std::abs(neg - sign * pos) <=
                1e-10 * std::max(1.0, std::abs(pos)));
        }
      }
    }
  }

  SUBCASE("even eps reduces to ladder-operator moments") {
    // full-line Gaussian moments: same parity pairs carry the even weight
    for (int k : {1, 2}) {
      const int power = 2 * k;
      const auto xpow = oracles::position_power_matrix(power, 14);
      for (int n : {0, 2, 5, 9}) {
        for (int m : {n, n + 2, n + 2 * k}) {
          if (m >= 14 || (n + m) % 2 == 1) continue;
          const double inv_norm =
              std::exp(0.5 * (std::lgamma(n + 1.0) + std::lgamma(m + 1.0) +
                              (n + m) * std::numbers::ln2 +
                              0.5 * std::log(std::numbers::pi)));
          const double fullline = xpow(m, n) * inv_norm;
          CHECK(std::abs(erdelyi_halfline(n, m, power) - 0.5 * fullline) <=
                1e-10 * std::max(1.0, std::abs(fullline)));
        }
      }
    }
  }

  CHECK_THROWS_AS(erdelyi_halfline(0, 0, 0.0), std::domain_error);
  CHECK_THROWS_AS(erdelyi_halfline(0, 0, -1.0), std::domain_error);
}
