#pragma once

#include <Eigen/Dense>

namespace ptwig::oracles {

// H_n(x) from the explicit coefficient sum
//   H_n(x) = sum_k (-1)^k n! / (k! (n-2k)!) (2x)^{n-2k};
// cancels badly past n ~ 20, exact enough below that to check the
// recurrence.
double hermite_by_coefficients(int n, double x);

// <m| x^power |n> on a Fock basis of size n via ladder-operator matrix
// powers, built in a buffer basis large enough that truncation cannot bleed
// into the returned block.
Eigen::MatrixXd position_power_matrix(int power, int n);

// integral_0^inf e^{-x^2} H_mu H_nu x^eps dx by adaptive quadrature on
// [0, 12 + sqrt(mu+nu)], absolute tolerance 1e-13 on the normalized
// integrand (result scaled back).
double erdelyi_halfline_quad(int mu, int nu, double eps);

// same integral over (-inf, 0]
double erdelyi_negative_halfline_quad(int mu, int nu, double eps);

}  // namespace ptwig::oracles
