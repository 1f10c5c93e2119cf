#pragma once

#include <Eigen/Dense>
#include <complex>

namespace ptwig {

// Family potential V_eps(x) = -(ix)^eps with the branch fixed so that
//   x > 0:  -|x|^eps [cos(eps pi/2) + i sin(eps pi/2)]
//   x = 0:   0
//   x < 0:  conjugate of the x > 0 value at |x|.
// PT structure: V(-x) = conj(V(x)). At eps = 2 this is +x^2.
struct PotentialSpec {
  double epsilon;
};

std::complex<double> potential_eval(const PotentialSpec& spec, double x);

// d/dx of the potential away from the origin (used for the xi -> 0 limit of
// the flow integrand).
std::complex<double> potential_derivative(const PotentialSpec& spec, double x);

// <m| -1/2 d^2/dx^2 |n> in the oscillator basis.
double kinetic_element(int n, int m);

// <m| V_eps(x)/2 |n>: real for equal parity (through cos), purely imaginary
// for opposite parity (through sin). Closed form via the half-line
// Hermite-product integrals.
std::complex<double> potential_element_closed(int n, int m, double eps);

// Same element by adaptive quadrature of u_m V/2 u_n over [-X, X],
// X = 12 + sqrt(n+m). Independent cross-check of the closed form.
std::complex<double> potential_element_quad(int n, int m, double eps);

// Dense truncated matrix of H(eps) = -1/2 d^2/dx^2 + V_eps(x)/2 on the
// first n_max Fock states. Complex symmetric; Hermitian only at even eps.
struct HamiltonianMatrix {
  double epsilon = 0.0;
  int n_max = 0;
  Eigen::MatrixXcd entries;
};

HamiltonianMatrix assemble(double eps, int n_max);

}  // namespace ptwig
