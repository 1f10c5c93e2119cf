#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace ptwig {

// Thrown when an iterative refinement (quadrature panels, trapezoid step
// halving, domain growth) fails to reach its tolerance within its budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Adaptive panel integration with an embedded Gauss(7)/Kronrod(15) error
// estimate and interval bisection. Absolute tolerance; deterministic
// left-to-right panel order.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol, int max_depth = 64);

std::complex<double> integrate_adaptive_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    double abs_tol, int max_depth = 64);

// Nodes/weights of an n-point Gauss-Legendre rule on [-1, 1], computed by
// Newton iteration on the Legendre recurrence.
void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights);

}  // namespace ptwig
