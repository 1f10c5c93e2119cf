#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ptwig/quadrature.hpp"
#include "ptwig/specfun.hpp"

namespace ptwig::oracles {

double hermite_by_coefficients(int n, double x) {
  if (n < 0 || n > 40)
    throw std::domain_error("coefficient oracle only sane for n <= 40");
  double sum = 0.0;
  for (int k = 0; k <= n / 2; ++k) {
    const double coeff =
        std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                 std::lgamma(n - 2.0 * k + 1.0));
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    sum += sign * coeff * std::pow(2.0 * x, n - 2 * k);
  }
  return sum;
}

Eigen::MatrixXd position_power_matrix(int power, int n) {
  const int big = n + 2 * power + 2;
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(big, big);
  for (int i = 0; i + 1 < big; ++i) {
    x(i, i + 1) = std::sqrt((i + 1.0) / 2.0);
    x(i + 1, i) = x(i, i + 1);
  }
  Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(big, big);
  for (int k = 0; k < power; ++k) acc = acc * x;
  return acc.topLeftCorner(n, n);
}

namespace {
double halfline(int mu, int nu, double eps, bool negative) {
  // integrate the normalized product u_mu u_nu |x|^eps and scale back by
  // 1/(N_mu N_nu) afterward so nothing overflows inside the integrand
  const double X = 12.0 + std::sqrt(static_cast<double>(mu + nu));
  std::vector<double> u;
  auto f = [&](double x) {
    oscillator_eigenfunctions(std::max(mu, nu) + 1, x, u);
    return u[mu] * u[nu] * std::pow(std::abs(x), eps);
  };
  // 1/(N_mu N_nu) = sqrt(2^{mu+nu} mu! nu! pi)
  const double scale =
      std::exp(0.5 * (std::lgamma(mu + 1.0) + std::lgamma(nu + 1.0) +
                      (mu + nu) * std::numbers::ln2 +
                      std::log(std::numbers::pi)));
  const double raw = negative
                         ? integrate_adaptive(f, -X, 0.0, 1e-13)
                         : integrate_adaptive(f, 0.0, X, 1e-13);
  return raw * scale;
}
}  // namespace

double erdelyi_halfline_quad(int mu, int nu, double eps) {
  return halfline(mu, nu, eps, false);
}

double erdelyi_negative_halfline_quad(int mu, int nu, double eps) {
  return halfline(mu, nu, eps, true);
}

}  // namespace ptwig::oracles
