#pragma once

#include <vector>

namespace ptwig {

// Terminating two-variable Lauricella F_A at unit arguments,
//   F_A(a; -r, -s; c1, c2; 1, 1)
//     = sum_{i1<=r, i2<=s} (a)_{i1+i2} (-r)_{i1} (-s)_{i2}
//                          / [(c1)_{i1} (c2)_{i2} i1! i2!].
struct LauricellaArgs {
  double a;
  int r;
  int s;
  double c1;
  double c2;
};

// n-th physicists' Hermite polynomial by the three-term recurrence.
// Domain-checked: n <= 100 and |x| <= 20 keep every intermediate finite.
double hermite_poly(int n, double x);

// Normalized oscillator eigenfunction u_n(x) = (2^n n! sqrt(pi))^{-1/2}
// H_n(x) e^{-x^2/2}, evaluated by the normalized recurrence so nothing
// overflows up to n = 100.
double oscillator_eigenfunction(int n, double x);

// u_0..u_{n_max-1} at one point in a single recurrence pass.
void oscillator_eigenfunctions(int n_max, double x, std::vector<double>& out);

double log_gamma(double z);          // z > 0
double pochhammer(double a, int k);  // rising factorial, k >= 0
double double_factorial(int k);      // k >= -1, (-1)!! = 1

double lauricella_fa2(const LauricellaArgs& args);

// Exact-rational evaluation of the defining double sum (test oracle; the
// double arguments are taken as the binary rationals they are).
double lauricella_fa2_exact(const LauricellaArgs& args);

// Half-line Hermite-product integral
//   integral_0^inf e^{-x^2} H_mu(x) H_nu(x) x^eps dx,  eps > 0,
// by the parity-resolved closed forms (Gamma prefactor times terminating
// Lauricella sum). Symmetric in (mu, nu).
double erdelyi_halfline(int mu, int nu, double eps);

}  // namespace ptwig
