#include "ptwig/hamiltonian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ptwig/quadrature.hpp"
#include "ptwig/specfun.hpp"

namespace ptwig {

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;

// sqrt((2r)!)/(2^r r!) and sqrt((2r+1)!)/(2^r r!) as stable products; these
// carry the basis normalization into the half-line prefactors without the
// ~1e-13 noise a difference of large lgamma values would leave behind.
double even_norm_ratio(int r) {
  double g = 1.0;
  for (int j = 1; j <= r; ++j) g *= std::sqrt((2.0 * j - 1.0) / (2.0 * j));
  return g;
}
double odd_norm_ratio(int s) {
  double h = 1.0;
  for (int j = 1; j <= s; ++j) h *= std::sqrt((2.0 * j + 1.0) / (2.0 * j));
  return h;
}
}  // namespace

std::complex<double> potential_eval(const PotentialSpec& spec, double x) {
  if (x == 0.0) return {0.0, 0.0};
  const double half_arg = 0.5 * spec.epsilon * std::numbers::pi;
  const double mag = -std::pow(std::abs(x), spec.epsilon);
  const double im = x > 0.0 ? std::sin(half_arg) : -std::sin(half_arg);
  return {mag * std::cos(half_arg), mag * im};
}

std::complex<double> potential_derivative(const PotentialSpec& spec,
                                          double x) {
  if (x == 0.0)
    throw std::domain_error("potential_derivative: not defined at x = 0");
  const double half_arg = 0.5 * spec.epsilon * std::numbers::pi;
  const double mag =
      -spec.epsilon * std::pow(std::abs(x), spec.epsilon - 1.0);
  const double sgn = x > 0.0 ? 1.0 : -1.0;
  return {mag * sgn * std::cos(half_arg), mag * std::sin(half_arg)};
}

double kinetic_element(int n, int m) {
  if (n < 0 || m < 0)
    throw std::domain_error("kinetic_element: negative index");
  if (m == n) return (2.0 * n + 1.0) / 4.0;
  if (m == n - 2) return -std::sqrt(n * (n - 1.0)) / 4.0;
  if (m == n + 2) return -std::sqrt((n + 1.0) * (n + 2.0)) / 4.0;
  return 0.0;
}

std::complex<double> potential_element_closed(int n, int m, double eps) {
  if (!(eps > 0.0))
    throw std::domain_error("potential_element_closed: eps must be positive");
  if (n < 0 || m < 0 || n > 100 || m > 100)
    throw std::domain_error("potential_element_closed: index out of range");
  if (n % 2 == 1 && m % 2 == 0) std::swap(n, m);

  const int r = n / 2;
  const int s = m / 2;
  const double sign = ((r + s) % 2 == 0) ? 1.0 : -1.0;
  const double half_arg = 0.5 * eps * std::numbers::pi;

  double pref, gamma_arg;
  LauricellaArgs fa{0.0, r, s, 0.0, 0.0};
  bool same_parity;
  if (n % 2 == 0 && m % 2 == 0) {
    pref = even_norm_ratio(r) * even_norm_ratio(s) / (2.0 * kSqrtPi);
    gamma_arg = 0.5 * (eps + 1.0);
    fa.c1 = fa.c2 = 0.5;
    same_parity = true;
  } else if (n % 2 == 0) {
    pref = even_norm_ratio(r) * odd_norm_ratio(s) / std::sqrt(2.0 * std::numbers::pi);
    gamma_arg = 0.5 * (eps + 2.0);
    fa.c1 = 0.5;
    fa.c2 = 1.5;
    same_parity = false;
  } else {
    pref = odd_norm_ratio(r) * odd_norm_ratio(s) / kSqrtPi;
    gamma_arg = 0.5 * (eps + 3.0);
    fa.c1 = fa.c2 = 1.5;
    same_parity = true;
  }
  fa.a = gamma_arg;
  const double core =
      sign * pref * std::tgamma(gamma_arg) * lauricella_fa2(fa);
  // Splitting the full-line integral at 0 and folding the mirror half back
  // with the Hermite parity pairs the even combination with cos and the odd
  // one with i sin; the overall minus is the potential's.
  if (same_parity) return {-core * std::cos(half_arg), 0.0};
  return {0.0, -core * std::sin(half_arg)};
}

std::complex<double> potential_element_quad(int n, int m, double eps) {
  if (!(eps > 0.0))
    throw std::domain_error("potential_element_quad: eps must be positive");
  if (n < 0 || m < 0 || n > 100 || m > 100)
    throw std::domain_error("potential_element_quad: index out of range");
  const double X = 12.0 + std::sqrt(static_cast<double>(n + m));
  const PotentialSpec spec{eps};
  std::vector<double> u;
  auto integrand = [&](double x) -> std::complex<double> {
    const int top = std::max(n, m);
    oscillator_eigenfunctions(top + 1, x, u);
    return u[n] * u[m] * 0.5 * potential_eval(spec, x);
  };
  // split at 0: |x|^eps has unbounded higher derivatives there
  const auto lo = integrate_adaptive_complex(integrand, -X, 0.0, 5e-13);
  const auto hi = integrate_adaptive_complex(integrand, 0.0, X, 5e-13);
  return lo + hi;
}

HamiltonianMatrix assemble(double eps, int n_max) {
  if (n_max < 8 || n_max > 100)
    throw std::domain_error("assemble: n_max must be in [8, 100]");
  if (!(eps > 0.0)) throw std::domain_error("assemble: eps must be positive");
  HamiltonianMatrix h;
  h.epsilon = eps;
  h.n_max = n_max;
  h.entries.resize(n_max, n_max);
  for (int n = 0; n < n_max; ++n) {
    for (int m = n; m < n_max; ++m) {
      const std::complex<double> v =
          kinetic_element(n, m) + potential_element_closed(n, m, eps);
      h.entries(m, n) = v;
      h.entries(n, m) = v;  // shared value keeps M = M^T exact
    }
  }
  return h;
}

}  // namespace ptwig
