#include "ptwig/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ptwig/jet.hpp"
#include "ptwig/quadrature.hpp"
#include "ptwig/specfun.hpp"
#include "ptwig/summation.hpp"

namespace ptwig {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;
using Cplx = std::complex<double>;

Cplx flow_potential(const PotentialSpec& spec, double x) {
  return 0.5 * potential_eval(spec, x);
}
Cplx flow_potential_derivative(const PotentialSpec& spec, double x) {
  return 0.5 * potential_derivative(spec, x);
}
double flow_im(const PotentialSpec& spec, double x) {
  return flow_potential(spec, x).imag();
}

// ---------------------------------------------------------------------------
// Closed-form cross-Wigner machinery.
//
// For k = l + d, d >= 0:
//   W_{kl} = (-1)^l / pi * sqrt(l!/k!) * (sqrt(2)(x+ip))^d
//            * e^{-r^2} L_l^d(2 r^2),   r^2 = x^2 + p^2,
// and W_{lk} = conj(W_{kl}). The Laguerre recurrence runs with the combined
// factor sqrt(2^d) r^d e^{-r^2} folded into the seed and an explicit binary
// exponent carried along, so deep tails underflow to 0 instead of tripping
// through inf * 0.

struct ScaledPair {
  double cur;   // L_l * 2^-e (times the folded seed)
  double prev;  // L_{l-1} on the same exponent
  int e;
  void renorm() {
    const double a = std::max(std::abs(cur), std::abs(prev));
    if (a > 1e150) {
      cur = std::ldexp(cur, -500);
      prev = std::ldexp(prev, -500);
      e += 500;
    } else if (a != 0.0 && a < 1e-150) {
      cur = std::ldexp(cur, 500);
      prev = std::ldexp(prev, 500);
      e -= 500;
    }
  }
};

// Visits every (l, d) pair with l + d < n_eff, calling
//   visit(l, d, W_{l+d,l})
// in a fixed (d outer, l inner) order. l_max_for(d) may trim the l range;
// return -1 to skip the whole diagonal.
template <typename Visit, typename LMax>
void cross_wigner_sweep(int n_eff, double x, double p, const Visit& visit,
                        const LMax& l_max_for) {
  const double r2 = x * x + p * p;
  const double z = 2.0 * r2;
  const double theta = std::atan2(p, x);
  const double beta = r2 > 0.0 ? 0.5 * kLn2 + 0.5 * std::log(r2) : 0.0;
  for (int d = 0; d < n_eff; ++d) {
    if (d > 0 && r2 == 0.0) break;  // u^d kills every off-diagonal at origin
    const int l_hi = std::min(l_max_for(d), n_eff - 1 - d);
    if (l_hi < 0) continue;
    const double g = -r2 + d * beta;
    const int e0 = static_cast<int>(std::lround(g / kLn2));
    ScaledPair t{std::exp(g - e0 * kLn2), 0.0, e0};
    const Cplx phase = d > 0 ? std::polar(1.0, d * theta) : Cplx(1.0, 0.0);
    double s = std::exp(-0.5 * std::lgamma(d + 1.0));  // sqrt(l!/(l+d)!)
    double sign = 1.0;                                 // (-1)^l
    for (int l = 0; l <= l_hi; ++l) {
      const double mag = std::ldexp(t.cur * s, t.e);
      visit(l, d, sign / kPi * mag * phase);
      const double next =
          ((2.0 * l + 1.0 + d - z) * t.cur - (l + d) * t.prev) / (l + 1.0);
      t.prev = t.cur;
      t.cur = next;
      t.renorm();
      s *= std::sqrt((l + 1.0) / (l + 1.0 + d));
      sign = -sign;
    }
  }
}

int effective_length(const Eigen::VectorXcd& c, double rel_tol = 1e-16) {
  double amax = 0.0;
  for (int i = 0; i < c.size(); ++i) amax = std::max(amax, std::abs(c(i)));
  int n_eff = 0;
  for (int i = 0; i < c.size(); ++i)
    if (std::abs(c(i)) > rel_tol * amax) n_eff = i + 1;
  return n_eff;
}

// One node of W_psi = sum conj(c_k) c_l W_{kl}; both orders of every pair are
// accumulated so the imaginary residue is a genuine roundoff diagnostic.
Cplx wigner_state_node(const Eigen::VectorXcd& c, int n_eff, double x,
                       double p, double pair_skip = 0.0) {
  KahanSumComplex acc;
  auto l_max_for = [&](int d) {
    if (pair_skip <= 0.0) return n_eff - 1;
    int hi = -1;
    for (int l = 0; l + d < n_eff; ++l)
      if (std::abs(c(l + d)) * std::abs(c(l)) >= pair_skip) hi = l;
    return hi;
  };
  cross_wigner_sweep(
      n_eff, x, p,
      [&](int l, int d, Cplx w) {
        const int k = l + d;
        if (pair_skip > 0.0 && std::abs(c(k)) * std::abs(c(l)) < pair_skip)
          return;
        acc.add(std::conj(c(k)) * c(l) * w);
        if (d > 0) acc.add(std::conj(c(l)) * c(k) * std::conj(w));
      },
      l_max_for);
  return acc.value();
}

void check_norm(const Eigen::VectorXcd& coeffs, const char* where) {
  if (std::abs(coeffs.norm() - 1.0) > 1e-8)
    throw std::invalid_argument(std::string(where) +
                                ": coefficient vector is not unit norm");
}

}  // namespace

void validate_grid(const PhaseGrid& grid) {
  if (!(grid.x_max > grid.x_min) || !(grid.p_max > grid.p_min))
    throw std::invalid_argument("PhaseGrid: empty extent");
  if (grid.nx < 33 || grid.np < 33)
    throw std::invalid_argument("PhaseGrid: node counts must be >= 33");
  if (grid.nx % 2 == 0 || grid.np % 2 == 0)
    throw std::invalid_argument("PhaseGrid: node counts must be odd");
}

std::complex<double> cross_wigner_fock(int k, int l, double x, double p) {
  if (k < 0 || l < 0 || k > 100 || l > 100)
    throw std::domain_error("cross_wigner_fock: index out of range");
  const bool swapped = k < l;
  if (swapped) std::swap(k, l);
  Cplx out{0.0, 0.0};
  cross_wigner_sweep(
      k + 1, x, p,
      [&](int ll, int dd, Cplx w) {
        if (ll == l && dd == k - l) out = w;
      },
      [&](int d) { return d == k - l ? l : -1; });
  return swapped ? std::conj(out) : out;
}

Eigen::MatrixXd wigner_values(const Eigen::VectorXcd& coeffs,
                              const std::vector<double>& xs,
                              const std::vector<double>& ps,
                              double* max_imag_residue) {
  const int n_eff = effective_length(coeffs);
  Eigen::MatrixXd out(xs.size(), ps.size());
  double resid = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    for (size_t j = 0; j < ps.size(); ++j) {
      const Cplx w = wigner_state_node(coeffs, n_eff, xs[i], ps[j]);
      resid = std::max(resid, std::abs(w.imag()));
      out(i, j) = w.real();
    }
  }
  if (max_imag_residue) *max_imag_residue = resid;
  return out;
}

WignerField wigner_from_coeffs(const Eigen::VectorXcd& coeffs,
                               const PhaseGrid& grid,
                               std::complex<double> energy) {
  validate_grid(grid);
  check_norm(coeffs, "wigner_from_coeffs");
  std::vector<double> xs(grid.nx), ps(grid.np);
  for (int i = 0; i < grid.nx; ++i) xs[i] = grid.x(i);
  for (int j = 0; j < grid.np; ++j) ps[j] = grid.p(j);
  WignerField field;
  field.grid = grid;
  field.energy = energy;
  field.values = wigner_values(coeffs, xs, ps, &field.max_imag_residue);
  if (field.max_imag_residue > 1e-12)
    throw std::runtime_error(
        "wigner_from_coeffs: imaginary residue " +
        std::to_string(field.max_imag_residue) +
        " exceeds 1e-12; coefficient vector or closed form is inconsistent");
  return field;
}

std::complex<double> wigner_quad_cross(const Eigen::VectorXcd& bra,
                                       const Eigen::VectorXcd& ket, double x,
                                       double p) {
  const double Xi = 2.0 * (std::abs(x) + 14.0);
  std::vector<double> u;
  const int nb = static_cast<int>(bra.size());
  const int nk = static_cast<int>(ket.size());
  auto psi = [&](const Eigen::VectorXcd& c, int n, double y, bool conj) {
    oscillator_eigenfunctions(n, y, u);
    Cplx s{0.0, 0.0};
    for (int i = 0; i < n; ++i) s += (conj ? std::conj(c(i)) : c(i)) * u[i];
    return s;
  };
  auto f = [&](double xi) {
    return psi(bra, nb, x + 0.5 * xi, true) * psi(ket, nk, x - 0.5 * xi, false) *
           std::polar(1.0, xi * p) / (2.0 * kPi);
  };
  int n = 256;
  double h = 2.0 * Xi / n;
  KahanSumComplex tsum;
  tsum.add(0.5 * (f(-Xi) + f(Xi)));
  for (int i = 1; i < n; ++i) tsum.add(f(-Xi + i * h));
  Cplx prev = tsum.value() * h;
  for (int round = 0; round < 11; ++round) {
    // midpoint refinement halves the step reusing previous nodes
    KahanSumComplex mids;
    for (int i = 0; i < n; ++i) mids.add(f(-Xi + (i + 0.5) * h));
    const Cplx cur = 0.5 * prev + 0.5 * h * mids.value();
    n *= 2;
    h *= 0.5;
    if (std::abs(cur - prev) < 1e-10) return cur;
    prev = cur;
  }
  throw ConvergenceError("wigner_quad: trapezoid refinement did not settle");
}

double wigner_quad(const Eigen::VectorXcd& coeffs, double x, double p) {
  check_norm(coeffs, "wigner_quad");
  return wigner_quad_cross(coeffs, coeffs, x, p).real();
}

Eigen::MatrixXd jx_field(const WignerField& w) {
  Eigen::MatrixXd jx(w.grid.nx, w.grid.np);
  for (int j = 0; j < w.grid.np; ++j) jx.col(j) = w.grid.p(j) * w.values.col(j);
  return jx;
}

namespace {

// xi-panel set for the J_p integral: boundaries at the difference-quotient
// kinks xi = +-2x, geometric grading into each kink, Gauss-Legendre 16 on
// every panel.
struct XiRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

void push_panels(std::vector<double>& edges, double a, double b,
                 bool grade_left, bool grade_right, double w_max,
                 double w_min) {
  if (b - a <= w_min * 2.0) {
    edges.push_back(b);
    return;
  }
  double lo = a, hi = b;
  std::vector<double> left, right;
  if (grade_left) {
    double w = w_min;
    while (lo + w < 0.5 * (a + b) && w < w_max) {
      left.push_back(lo + w);
      lo += w;
      w *= 2.0;
    }
  }
  if (grade_right) {
    double w = w_min;
    while (hi - w > 0.5 * (a + b) && w < w_max) {
      right.push_back(hi - w);
      hi -= w;
      w *= 2.0;
    }
  }
  for (double e : left) edges.push_back(e);
  const int mid = std::max(1, static_cast<int>(std::ceil((hi - lo) / w_max)));
  for (int i = 1; i <= mid; ++i) edges.push_back(lo + (hi - lo) * i / mid);
  for (auto it = right.rbegin(); it != right.rend(); ++it)
    edges.push_back(*it);
  if (edges.back() != b) edges.push_back(b);
}

XiRule build_xi_rule(double x, double Xi, double w_max) {
  static std::vector<double> gl_x, gl_w;
  if (gl_x.empty()) gauss_legendre(16, gl_x, gl_w);

  std::vector<double> breaks{-Xi};
  const double k = 2.0 * std::abs(x);
  if (k > 1e-12 && k < Xi) {
    breaks.push_back(-k);
    breaks.push_back(0.0);
    breaks.push_back(k);
  } else {
    breaks.push_back(0.0);
  }
  breaks.push_back(Xi);

  std::vector<double> edges{breaks.front()};
  const double w_min = w_max / 64.0;
  for (size_t s = 0; s + 1 < breaks.size(); ++s) {
    const bool gl = std::abs(std::abs(breaks[s]) - k) < 1e-14 && k > 1e-12;
    const bool gr = std::abs(std::abs(breaks[s + 1]) - k) < 1e-14 && k > 1e-12;
    push_panels(edges, breaks[s], breaks[s + 1], gl, gr, w_max, w_min);
  }

  XiRule rule;
  for (size_t e = 0; e + 1 < edges.size(); ++e) {
    const double c = 0.5 * (edges[e] + edges[e + 1]);
    const double hw = 0.5 * (edges[e + 1] - edges[e]);
    for (int i = 0; i < 16; ++i) {
      rule.nodes.push_back(c + hw * gl_x[i]);
      rule.weights.push_back(hw * gl_w[i]);
    }
  }
  return rule;
}

// J_p row at fixed x for every p in ps.
void jp_row(const Eigen::VectorXcd& coeffs, const PotentialSpec& spec,
            double x, const std::vector<double>& ps, const XiRule& rule,
            std::vector<Cplx>& out) {
  const int n = static_cast<int>(coeffs.size());
  const Cplx vx = flow_potential(spec, x);
  std::vector<double> u;
  auto psi = [&](double y, bool conj) {
    oscillator_eigenfunctions(n, y, u);
    Cplx s{0.0, 0.0};
    for (int i = 0; i < n; ++i) s += (conj ? std::conj(coeffs(i)) : coeffs(i)) * u[i];
    return s;
  };
  out.assign(ps.size(), Cplx{0.0, 0.0});
  const double p0 = ps.front();
  const double dp = ps.size() > 1 ? ps[1] - ps[0] : 0.0;
  for (size_t q = 0; q < rule.nodes.size(); ++q) {
    const double xi = rule.nodes[q];
    Cplx bracket;
    if (std::abs(xi) < 1e-6) {
      bracket = x == 0.0 ? Cplx{0.0, 0.0}
                         : Cplx{-flow_potential_derivative(spec, x).real(), 0.0};
    } else {
      bracket = (flow_potential(spec, x - 0.5 * xi) - vx) / xi -
                (std::conj(flow_potential(spec, x + 0.5 * xi)) - std::conj(vx)) / xi;
    }
    const Cplx g = psi(x + 0.5 * xi, true) * psi(x - 0.5 * xi, false) *
                   bracket * (rule.weights[q] / (2.0 * kPi));
    Cplx phase = std::polar(1.0, xi * p0);
    const Cplx step = std::polar(1.0, xi * dp);
    for (size_t j = 0; j < ps.size(); ++j) {
      out[j] += g * phase;
      phase *= step;
    }
  }
}

}  // namespace

Eigen::MatrixXd jp_field(const Eigen::VectorXcd& coeffs,
                         const PotentialSpec& potential,
                         const PhaseGrid& grid) {
  validate_grid(grid);
  check_norm(coeffs, "jp_field");
  std::vector<double> ps(grid.np);
  for (int j = 0; j < grid.np; ++j) ps[j] = grid.p(j);
  Eigen::MatrixXd jp(grid.nx, grid.np);
  std::vector<Cplx> row, row_fine;
  for (int i = 0; i < grid.nx; ++i) {
    const double x = grid.x(i);
    if (x == 0.0) {
      jp.row(i).setZero();  // PT antisymmetry zeroes the kernel identically
      continue;
    }
    const double Xi = 2.0 * (std::abs(x) + 14.0);
    double w_max = 0.5;
    jp_row(coeffs, potential, x, ps, build_xi_rule(x, Xi, w_max), row);
    bool settled = false;
    for (int round = 0; round < 4 && !settled; ++round) {
      w_max *= 0.5;
      jp_row(coeffs, potential, x, ps, build_xi_rule(x, Xi, w_max), row_fine);
      double delta = 0.0;
      for (size_t j = 0; j < ps.size(); ++j)
        delta = std::max(delta, std::abs(row_fine[j] - row[j]));
      row.swap(row_fine);
      settled = delta <= 1e-10;
    }
    if (!settled)
      throw ConvergenceError("jp_field: xi quadrature did not settle at x = " +
                             std::to_string(x));
    for (size_t j = 0; j < ps.size(); ++j) {
      if (std::abs(row[j].imag()) > 1e-10)
        throw std::runtime_error("jp_field: non-real current component");
      jp(i, j) = row[j].real();
    }
  }
  return jp;
}

namespace {

constexpr int kJetCap = 6;
using CJet = Jet<Cplx, kJetCap>;

// W and its p-derivatives through order kJetCap-1 at one node, by running
// the closed form in truncated Taylor arithmetic.
void wigner_p_jet(const Eigen::VectorXcd& c, int n_eff, double x, double p,
                  double derivs[kJetCap]) {
  if (x * x + p * p > 200.0)
    throw std::domain_error("jp_series: node outside r^2 <= 200");
  const CJet pj = CJet::variable(Cplx(p, 0.0));
  const CJet r2 = pj * pj + CJet::constant(Cplx(x * x, 0.0));
  const CJet eg = exp(-r2);
  const CJet z = r2 * 2.0;
  CJet u = CJet::constant(Cplx(x, 0.0));
  u.c[0] += Cplx(0.0, 1.0) * p;
  u.c[1] = Cplx(0.0, 1.0);
  Jet<Cplx, kJetCap> acc{};
  CJet upow = CJet::constant(Cplx(1.0, 0.0));
  for (int d = 0; d < n_eff; ++d) {
    if (d > 0) upow = upow * u;
    double s = std::exp(-0.5 * std::lgamma(d + 1.0) + 0.5 * d * kLn2);
    double sign = 1.0;
    CJet lm{}, lc = CJet::constant(Cplx(1.0, 0.0));
    for (int l = 0; l + d < n_eff; ++l) {
      const int k = l + d;
      const Cplx cw = std::conj(c(k)) * c(l) * (sign * s / kPi);
      if (std::abs(cw) > 1e-300) {
        const CJet w = upow * eg * lc * cw;
        for (int t = 0; t < kJetCap; ++t) {
          acc.c[t] += w.c[t];
          if (d > 0) acc.c[t] += std::conj(w.c[t]);  // mirrored (l,k) term
        }
      }
      const CJet next =
          (lc * (CJet::constant(Cplx(2.0 * l + 1.0 + d, 0.0)) - z) -
           lm * Cplx(l + d, 0.0)) *
          Cplx(1.0 / (l + 1.0), 0.0);
      lm = lc;
      lc = next;
      s *= std::sqrt((l + 1.0) / (l + 1.0 + d));
      sign = -sign;
    }
  }
  for (int t = 0; t < kJetCap; ++t) {
    if (std::abs(acc.c[t].imag()) > 1e-9)
      throw std::runtime_error("jp_series: non-real Wigner jet");
    double fact = 1.0;
    for (int j = 2; j <= t; ++j) fact *= j;
    derivs[t] = acc.c[t].real() * fact;
  }
}

}  // namespace

Eigen::MatrixXd jp_series(const Eigen::VectorXcd& coeffs,
                          const PotentialSpec& potential,
                          const PhaseGrid& grid, int j_max) {
  validate_grid(grid);
  check_norm(coeffs, "jp_series");
  const double eps = potential.epsilon;
  const double rounded = std::round(eps);
  if (std::abs(eps - rounded) > 1e-12 || static_cast<long>(rounded) % 2 != 0 ||
      rounded <= 0.0)
    throw std::domain_error(
        "jp_series: potential must have even integer epsilon");
  if (j_max < 1 || j_max > kJetCap)
    throw std::domain_error("jp_series: j_max out of range");
  const int two_k = static_cast<int>(rounded);
  // V_flow = -(-1)^{eps/2} x^eps / 2, derivatives analytic
  const double lead = -(two_k / 2 % 2 == 0 ? 1.0 : -1.0) * 0.5;
  auto v_deriv = [&](int j, double x) {
    if (j > two_k) return 0.0;
    double cjf = lead;
    for (int i = 0; i < j; ++i) cjf *= two_k - i;
    return cjf * std::pow(x, two_k - j);
  };

  const int n_eff = effective_length(coeffs);
  Eigen::MatrixXd jp(grid.nx, grid.np);
  double wd[kJetCap];
  for (int i = 0; i < grid.nx; ++i) {
    const double x = grid.x(i);
    for (int j = 0; j < grid.np; ++j) {
      wigner_p_jet(coeffs, n_eff, x, grid.p(j), wd);
      double total = 0.0;
      double factorial = 1.0;
      for (int term = 1; term <= j_max; ++term) {
        factorial *= term;
        if (term % 2 == 0) continue;  // real V: even-j brackets vanish
        const int m = (term - 1) / 2;
        const double unit = (m % 2 == 0) ? 1.0 : -1.0;  // (-i)^{term-1}, real
        total += -unit / (factorial * std::ldexp(1.0, term)) * 2.0 *
                 v_deriv(term, x) * wd[term - 1];
      }
      jp(i, j) = total;
    }
  }
  return jp;
}

FlowField flow_field(const WignerField& w, const Eigen::VectorXcd& coeffs,
                     const PotentialSpec& potential) {
  FlowField f;
  f.grid = w.grid;
  f.jx = jx_field(w);
  f.jp = jp_field(coeffs, potential, w.grid);
  f.norm = (f.jx.array().square() + f.jp.array().square()).sqrt();
  return f;
}

namespace {

// 4th-order first derivative along the rows (axis = 0) or columns (axis = 1).
Eigen::MatrixXd derivative4(const Eigen::MatrixXd& f, double h, int axis) {
  const int n = axis == 0 ? static_cast<int>(f.rows()) : static_cast<int>(f.cols());
  const int m = axis == 0 ? static_cast<int>(f.cols()) : static_cast<int>(f.rows());
  if (n < 5) throw std::invalid_argument("derivative4: too few nodes");
  Eigen::MatrixXd out(f.rows(), f.cols());
  auto at = [&](int i, int j) -> double {
    return axis == 0 ? f(i, j) : f(j, i);
  };
  auto set = [&](int i, int j, double v) {
    if (axis == 0)
      out(i, j) = v;
    else
      out(j, i) = v;
  };
  const double c = 1.0 / (12.0 * h);
  for (int j = 0; j < m; ++j) {
    set(0, j,
        c * (-25.0 * at(0, j) + 48.0 * at(1, j) - 36.0 * at(2, j) +
             16.0 * at(3, j) - 3.0 * at(4, j)));
    set(1, j,
        c * (-3.0 * at(0, j) - 10.0 * at(1, j) + 18.0 * at(2, j) -
             6.0 * at(3, j) + at(4, j)));
    for (int i = 2; i < n - 2; ++i)
      set(i, j,
          c * (-at(i + 2, j) + 8.0 * at(i + 1, j) - 8.0 * at(i - 1, j) +
               at(i - 2, j)));
    set(n - 2, j,
        -c * (-3.0 * at(n - 1, j) - 10.0 * at(n - 2, j) + 18.0 * at(n - 3, j) -
              6.0 * at(n - 4, j) + at(n - 5, j)));
    set(n - 1, j,
        -c * (-25.0 * at(n - 1, j) + 48.0 * at(n - 2, j) - 36.0 * at(n - 3, j) +
              16.0 * at(n - 4, j) - 3.0 * at(n - 5, j)));
  }
  return out;
}

}  // namespace

ContinuityResidual continuity_residual(const WignerField& w,
                                       const FlowField& flow,
                                       const PotentialSpec& potential) {
  const auto& g = w.grid;
  if (flow.grid.nx != g.nx || flow.grid.np != g.np ||
      flow.grid.x_min != g.x_min || flow.grid.p_min != g.p_min ||
      flow.grid.x_max != g.x_max || flow.grid.p_max != g.p_max)
    throw std::invalid_argument("continuity_residual: grid mismatch");
  validate_grid(g);
  const Eigen::MatrixXd djx = derivative4(flow.jx, g.hx(), 0);
  const Eigen::MatrixXd djp = derivative4(flow.jp, g.hp(), 1);
  const double dwdt = 2.0 * w.energy.imag();
  ContinuityResidual out;
  out.residual.resize(g.nx, g.np);
  for (int i = 0; i < g.nx; ++i) {
    const double src = 2.0 * flow_im(potential, g.x(i));
    for (int j = 0; j < g.np; ++j)
      out.residual(i, j) =
          dwdt * w.values(i, j) + djx(i, j) + djp(i, j) - src * w.values(i, j);
  }
  out.interior_max = 0.0;
  for (int i = 2; i < g.nx - 2; ++i)
    for (int j = 2; j < g.np - 2; ++j)
      out.interior_max = std::max(out.interior_max, std::abs(out.residual(i, j)));
  return out;
}

namespace {

// Simpson weights along one axis; n odd.
std::vector<double> simpson_weights(int n, double h) {
  std::vector<double> w(n, h / 3.0);
  for (int i = 1; i < n - 1; ++i) w[i] *= (i % 2 == 1) ? 4.0 : 2.0;
  return w;
}

// integral over x of |x|^eps * G(x) + smooth(x), where G and smooth are
// sampled on a symmetric grid with x = 0 at an even Simpson index. The two
// Simpson cell pairs touching the origin integrate |x|^eps exactly against
// the quadratic interpolant of G (the kink would otherwise cap the whole
// composite rule near O(h^{2+eps})).
double line_integral_kink(const std::vector<double>& xs,
                          const std::vector<double>& g,
                          const std::vector<double>& smooth, double eps) {
  const int n = static_cast<int>(xs.size());
  const double h = xs[1] - xs[0];
  int i0 = -1;
  for (int i = 0; i < n; ++i)
    if (xs[i] == 0.0) i0 = i;
  KahanSum acc;
  auto f_at = [&](int i) {
    return std::pow(std::abs(xs[i]), eps) * g[i] + smooth[i];
  };
  for (int i = 0; i + 2 < n; i += 2) {
    const bool central = i0 >= 0 && (i == i0 || i + 2 == i0);
    if (!central) {
      acc.add(h / 3.0 * (f_at(i) + 4.0 * f_at(i + 1) + f_at(i + 2)));
      continue;
    }
    // product rule for the kink part, plain Simpson for the smooth part
    const double m0 = std::pow(2.0 * h, eps + 1.0) / (eps + 1.0);
    const double m1 = std::pow(2.0 * h, eps + 2.0) / (eps + 2.0);
    const double m2 = std::pow(2.0 * h, eps + 3.0) / (eps + 3.0);
    const double w_near = (m2 - 3.0 * h * m1 + 2.0 * h * h * m0) / (2.0 * h * h);
    const double w_mid = -(m2 - 2.0 * h * m1) / (h * h);
    const double w_far = (m2 - h * m1) / (2.0 * h * h);
    double kink;
    if (i == i0)  // cells [0, 2h]
      kink = w_near * g[i] + w_mid * g[i + 1] + w_far * g[i + 2];
    else  // cells [-2h, 0]
      kink = w_far * g[i] + w_mid * g[i + 1] + w_near * g[i + 2];
    acc.add(kink +
            h / 3.0 * (smooth[i] + 4.0 * smooth[i + 1] + smooth[i + 2]));
  }
  return acc.value();
}

}  // namespace

Eigen::MatrixXd flux_density(const WignerField& w,
                             const PotentialSpec& potential) {
  Eigen::MatrixXd d(w.grid.nx, w.grid.np);
  for (int i = 0; i < w.grid.nx; ++i)
    d.row(i) = 2.0 * flow_im(potential, w.grid.x(i)) * w.values.row(i);
  return d;
}

double flux(const WignerField& w, const PotentialSpec& potential) {
  const auto& g = w.grid;
  validate_grid(g);
  double boundary = 0.0;
  for (int i = 0; i < g.nx; ++i)
    boundary = std::max({boundary, std::abs(w.values(i, 0)),
                         std::abs(w.values(i, g.np - 1))});
  for (int j = 0; j < g.np; ++j)
    boundary = std::max({boundary, std::abs(w.values(0, j)),
                         std::abs(w.values(g.nx - 1, j))});
  if (boundary >= 1e-10)
    throw std::invalid_argument(
        "flux: grid does not cover the state's support, boundary max |W| = " +
        std::to_string(boundary));

  const auto wp = simpson_weights(g.np, g.hp());
  const double q = std::sin(0.5 * potential.epsilon * kPi) * 0.5;
  std::vector<double> xs(g.nx), gk(g.nx), smooth(g.nx, 0.0);
  for (int i = 0; i < g.nx; ++i) {
    xs[i] = g.x(i);
    KahanSum row;
    for (int j = 0; j < g.np; ++j) row.add(wp[j] * w.values(i, j));
    // 2 W ImV = |x|^eps * (-2 q sgn(x)) * W
    gk[i] = -2.0 * q * (xs[i] > 0.0 ? 1.0 : (xs[i] < 0.0 ? -1.0 : 0.0)) *
            row.value();
  }
  return line_integral_kink(xs, gk, smooth, potential.epsilon);
}

CirculationResult circulation(const Eigen::VectorXcd& coeffs,
                              std::complex<double> energy,
                              const PotentialSpec& potential, double r_init,
                              bool include_dwdt) {
  if (!(r_init >= 5.0))
    throw std::domain_error("circulation: R_init must be >= 5");
  check_norm(coeffs, "circulation");
  const double q = std::sin(0.5 * potential.epsilon * kPi) * 0.5;
  const double im_e = energy.imag();
  const double eps = potential.epsilon;

  // One Simpson evaluation on [-R, R]^2 with P panels per axis (P % 4 == 0):
  // p-direction integrated first (W marginal), kink-corrected x line after.
  auto simpson_value = [&](double R, int P) {
    const int n = P + 1;
    const double h = 2.0 * R / P;
    std::vector<double> xs(n), ps(n);
    for (int i = 0; i < n; ++i) xs[i] = -R + i * h;
    xs[P / 2] = 0.0;
    for (int j = 0; j < n; ++j) ps[j] = -R + j * h;
    const Eigen::MatrixXd w = wigner_values(coeffs, xs, ps, nullptr);
    const auto wp = simpson_weights(n, h);
    std::vector<double> gk(n), smooth(n);
    for (int i = 0; i < n; ++i) {
      KahanSum row;
      for (int j = 0; j < n; ++j) row.add(wp[j] * w(i, j));
      const double marg = row.value();
      gk[i] = -2.0 * q * (xs[i] > 0.0 ? 1.0 : (xs[i] < 0.0 ? -1.0 : 0.0)) * marg;
      smooth[i] = include_dwdt ? -2.0 * im_e * marg : 0.0;
    }
    return line_integral_kink(xs, gk, smooth, eps);
  };

  // Density loop: Simpson with doubling panel counts, Richardson-accelerated
  // (the h^4, h^6, ... error terms cancel up the table).
  auto density_converged = [&](double R) {
    int P = 4 * std::max(2, static_cast<int>(std::lround(R / 0.2)));
    std::vector<double> prev_row;
    for (int level = 0; level < 6; ++level) {
      std::vector<double> row{simpson_value(R, P)};
      for (size_t j = 0; j < prev_row.size(); ++j) {
        const double denom = std::pow(4.0, j + 2) - 1.0;
        row.push_back(row[j] + (row[j] - prev_row[j]) / denom);
      }
      if (!prev_row.empty() &&
          std::abs(row.back() - prev_row.back()) <= 1e-9)
        return row.back();
      prev_row = std::move(row);
      P *= 2;
    }
    throw ConvergenceError("circulation: density refinement did not settle");
  };

  CirculationResult res;
  res.epsilon = potential.epsilon;
  double R = r_init;
  double prev = 0.0;
  bool have_prev = false;
  while (true) {
    const double v = density_converged(R);
    res.growth_history.emplace_back(R, v);
    if (have_prev && std::abs(v - prev) <= 1e-8) {
      res.value = v;
      res.r_final = R;
      return res;
    }
    prev = v;
    have_prev = true;
    R += 2.0;
    if (R > 40.0)
      throw ConvergenceError(
          "circulation: domain growth did not converge by R = 40");
  }
}

SymmetryReport symmetry_diagnostics(const WignerField& a,
                                    const WignerField* b) {
  const auto& g = a.grid;
  auto symmetric = [](double lo, double hi) {
    return std::abs(lo + hi) <= 1e-12 * std::max(1.0, std::abs(hi));
  };
  if (!symmetric(g.x_min, g.x_max) || !symmetric(g.p_min, g.p_max))
    throw std::invalid_argument(
        "symmetry_diagnostics: grid must be symmetric about the origin");
  SymmetryReport rep;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.np; ++j) {
      rep.x_defect = std::max(
          rep.x_defect, std::abs(a.values(i, j) - a.values(g.nx - 1 - i, j)));
      rep.p_defect = std::max(
          rep.p_defect, std::abs(a.values(i, j) - a.values(i, g.np - 1 - j)));
    }
  if (b) {
    const auto& gb = b->grid;
    if (gb.nx != g.nx || gb.np != g.np || gb.x_min != g.x_min ||
        gb.p_min != g.p_min)
      throw std::invalid_argument("symmetry_diagnostics: grid mismatch");
    double m = 0.0;
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.np; ++j)
        m = std::max(m,
                     std::abs(b->values(i, j) - a.values(g.nx - 1 - i, j)));
    rep.mirror_defect = m;
  }
  return rep;
}

}  // namespace ptwig
