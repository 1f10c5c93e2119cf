#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "ptwig/hamiltonian.hpp"

namespace ptwig {

// Inclusive-endpoint phase-space grid. Node counts must be odd and >= 33 so
// symmetric grids carry (0, 0) as a node and composite Simpson applies.
struct PhaseGrid {
  double x_min = -5.0, x_max = 5.0;
  double p_min = -5.0, p_max = 5.0;
  int nx = 201, np = 201;

  double hx() const { return (x_max - x_min) / (nx - 1); }
  double hp() const { return (p_max - p_min) / (np - 1); }
  double x(int i) const { return x_min + i * hx(); }
  double p(int j) const { return p_min + j * hp(); }
};

void validate_grid(const PhaseGrid& grid);

// values(i, j) = W(x_i, p_j); energy is the source state's eigenvalue (its
// imaginary part carries dW/dt = 2 Im(E) W for the t = 0 snapshot).
struct WignerField {
  PhaseGrid grid;
  Eigen::MatrixXd values;
  std::complex<double> energy{0.0, 0.0};
  double max_imag_residue = 0.0;
};

struct FlowField {
  PhaseGrid grid;
  Eigen::MatrixXd jx;
  Eigen::MatrixXd jp;
  Eigen::MatrixXd norm;  // sqrt(jx^2 + jp^2)
};

// Cross-Wigner (Moyal) kernel of basis states,
//   (1/2pi) integral u_k(x + xi/2) u_l(x - xi/2) e^{i xi p} d(xi),
// in closed Laguerre form; cross(k, l) = conj(cross(l, k)).
std::complex<double> cross_wigner_fock(int k, int l, double x, double p);

// W node values for an arbitrary coefficient vector at given abscissae;
// returns the worst |Im| residue of the full complex pair sum.
Eigen::MatrixXd wigner_values(const Eigen::VectorXcd& coeffs,
                              const std::vector<double>& xs,
                              const std::vector<double>& ps,
                              double* max_imag_residue = nullptr);

// Full field on a grid. Aborts (throws) if the imaginary residue exceeds
// 1e-12 -- that means a coefficient or closed-form bug, not roundoff.
WignerField wigner_from_coeffs(const Eigen::VectorXcd& coeffs,
                               const PhaseGrid& grid,
                               std::complex<double> energy = {0.0, 0.0});

// Direct trapezoid quadrature of the defining integral, step-halved until
// the value moves < 1e-10. Oracle for the closed form.
double wigner_quad(const Eigen::VectorXcd& coeffs, double x, double p);
std::complex<double> wigner_quad_cross(const Eigen::VectorXcd& bra,
                                       const Eigen::VectorXcd& ket, double x,
                                       double p);

// J_x = (p/m) W with m = 1.
Eigen::MatrixXd jx_field(const WignerField& w);

// J_p by the full xi-integral (difference-quotient kernel), valid for any
// eps including the non-analytic |x|^eps cases.
Eigen::MatrixXd jp_field(const Eigen::VectorXcd& coeffs,
                         const PotentialSpec& potential,
                         const PhaseGrid& grid);

// J_p by the derivative series, truncated at j_max. Requires even integer
// eps (polynomial potential; the series terminates at j = eps).
Eigen::MatrixXd jp_series(const Eigen::VectorXcd& coeffs,
                          const PotentialSpec& potential,
                          const PhaseGrid& grid, int j_max);

FlowField flow_field(const WignerField& w, const Eigen::VectorXcd& coeffs,
                     const PotentialSpec& potential);

// Pointwise defect of dW/dt + dJx/dx + dJp/dp = 2 Im(V) W with
// dW/dt = 2 Im(E) W, via 4th-order stencils (one-sided at the edges).
struct ContinuityResidual {
  Eigen::MatrixXd residual;
  double interior_max = 0.0;  // max norm away from the one-sided border
};

ContinuityResidual continuity_residual(const WignerField& w,
                                       const FlowField& flow,
                                       const PotentialSpec& potential);

// Source density 2 W Im(V) and its Simpson integral (flux per unit time
// through the enclosing surface). The grid must cover the state's support.
Eigen::MatrixXd flux_density(const WignerField& w,
                             const PotentialSpec& potential);
double flux(const WignerField& w, const PotentialSpec& potential);

struct CirculationResult {
  double epsilon = 0.0;
  int state_index = -1;
  double r_final = 0.0;
  double value = 0.0;
  std::vector<std::pair<double, double>> growth_history;  // (R, value)
};

// Circulation of (-J_p, J_x) around the boundary of [-R, R]^2 as the area
// integral of 2 W Im(V) (minus 2 Im(E) W when include_dwdt), with domain
// growth until the value stops moving.
CirculationResult circulation(const Eigen::VectorXcd& coeffs,
                              std::complex<double> energy,
                              const PotentialSpec& potential, double r_init,
                              bool include_dwdt = false);

struct SymmetryReport {
  double x_defect = 0.0;                // max |W(x,p) - W(-x,p)|
  double p_defect = 0.0;                // max |W(x,p) - W(x,-p)|
  std::optional<double> mirror_defect;  // max |W_b(x,p) - W_a(-x,p)|
};

SymmetryReport symmetry_diagnostics(const WignerField& a,
                                    const WignerField* b = nullptr);

}  // namespace ptwig
