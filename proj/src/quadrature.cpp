#include "ptwig/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace ptwig {
namespace {

// 15-point Kronrod abscissae/weights and the embedded 7-point Gauss weights
// (QUADPACK dqk15 constants, 80-digit Fullerton values).
constexpr double kXgk[8] = {0.991455371120812639206854697526329,
                            0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926,
                            0.741531185599394439863864773280788,
                            0.586087235467691130294144838258730,
                            0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245,
                            0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970,
                            0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518,
                            0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550,
                            0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649,
                            0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082,
                           0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975,
                           0.417959183673469387755102040816327};

template <typename Scalar>
struct PanelResult {
  Scalar integral;
  double error;
};

template <typename Scalar, typename Fn>
PanelResult<Scalar> gk15(const Fn& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  Scalar fv1[7], fv2[7];
  const Scalar fc = f(c);
  Scalar resg = fc * kWg[3];
  Scalar resk = fc * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    fv1[j] = f(c - dx);
    fv2[j] = f(c + dx);
    resk += kWgk[j] * (fv1[j] + fv2[j]);
    if (j % 2 == 1) resg += kWg[j / 2] * (fv1[j] + fv2[j]);
  }
  return {resk * h, std::abs((resk - resg) * h)};
}

template <typename Scalar, typename Fn>
Scalar adaptive(const Fn& f, double a, double b, double abs_tol,
                int max_depth) {
  struct Panel {
    double a, b;
    int depth;
  };
  // Explicit stack, leftmost interval processed first, so accepted panels
  // accumulate in a fixed left-to-right order.
  std::vector<Panel> stack{{a, b, 0}};
  Scalar total{};
  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();
    auto r = gk15<Scalar>(f, p.a, p.b);
    const double local_tol = abs_tol * (p.b - p.a) / (b - a);
    // width floor: around an integrable endpoint singularity the panels can
    // shrink until the abscissae degenerate; the residual there is O(|f| w)
    const bool degenerate =
        p.b - p.a < 1e-14 * (std::abs(p.a) + std::abs(p.b) + 1.0);
    if (r.error <= std::max(local_tol, 1e-300) || degenerate) {
      total += r.integral;
      continue;
    }
    if (p.depth >= max_depth)
      throw ConvergenceError("adaptive quadrature: panel refinement exhausted");
    const double m = 0.5 * (p.a + p.b);
    stack.push_back({m, p.b, p.depth + 1});
    stack.push_back({p.a, m, p.depth + 1});
  }
  return total;
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol, int max_depth) {
  if (!(b > a)) return 0.0;
  return adaptive<double>(f, a, b, abs_tol, max_depth);
}

std::complex<double> integrate_adaptive_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    double abs_tol, int max_depth) {
  if (!(b > a)) return {0.0, 0.0};
  return adaptive<std::complex<double>>(f, a, b, abs_tol, max_depth);
}

void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-based starting guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[n - 1 - i] = weights[i];
  }
}

}  // namespace ptwig
