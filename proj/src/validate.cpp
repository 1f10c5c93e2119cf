#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

#include "ptwig/run.hpp"
#include "ptwig/spectrum.hpp"

namespace ptwig {

namespace {

void report(std::vector<CheckResult>& out, std::ostream* os,
            const std::string& name, bool pass, const std::string& detail) {
  if (os) *os << (pass ? "PASS " : "FAIL ") << name << " (" << detail << ")\n";
  out.push_back({name, pass, detail});
}

std::string max_str(double v) {
  std::ostringstream ss;
  ss.precision(3);
  ss << v;
  return ss.str();
}

}  // namespace

std::vector<CheckResult> run_validation(std::ostream* os) {
  std::vector<CheckResult> out;

  {  // closed-form matrix elements against the quadrature oracle
    double worst = 0.0;
    for (double eps : {0.5, 1.0, 1.42207, 2.0, 3.0})
      for (int n = 0; n <= 12; ++n)
        for (int m = n; m <= 12; ++m)
          worst = std::max(worst,
                           std::abs(potential_element_closed(n, m, eps) -
                                    potential_element_quad(n, m, eps)));
    report(out, os, "matrix-element closed form vs quadrature", worst <= 1e-8,
           "max diff " + max_str(worst) + ", n,m <= 12");
  }

  const Spectrum ho = eigendecompose(assemble(2.0, 71));
  {  // harmonic-oscillator spectrum
    double worst = 0.0;
    for (int n = 0; n <= 10; ++n)
      worst = std::max(worst, std::abs(ho.pairs[n].value -
                                       std::complex<double>(n + 0.5, 0.0)));
    report(out, os, "eps=2 spectrum equals n + 1/2", worst <= 1e-8,
           "max |E_n - (n+1/2)| = " + max_str(worst));
  }

  const Spectrum s15 = eigendecompose(assemble(1.5, 51));
  PhaseGrid small;
  small.nx = small.np = 101;
  {  // Wigner closed form vs direct quadrature
    std::mt19937 rng(20240901);
    std::uniform_real_distribution<double> pt(-3.5, 3.5);
    double worst = 0.0;
    for (int state : {0, 1}) {
      const auto& c = s15.pairs[state].coeffs;
      for (int k = 0; k < 20; ++k) {
        const double x = pt(rng), p = pt(rng);
        std::vector<double> xs{x}, ps{p};
        const double closed = wigner_values(c, xs, ps, nullptr)(0, 0);
        worst = std::max(worst, std::abs(closed - wigner_quad(c, x, p)));
      }
    }
    report(out, os, "Wigner closed form vs quadrature", worst <= 1e-8,
           "max diff " + max_str(worst) + " over 40 points");
  }

  {  // normalization
    double worst = 0.0;
    for (int state : {0, 1, 2}) {
      const WignerField w = wigner_from_coeffs(s15.pairs[state].coeffs, small,
                                               s15.pairs[state].value);
      // Simpson over the grid
      double total = 0.0;
      const double hx = small.hx(), hp = small.hp();
      for (int i = 0; i < small.nx; ++i) {
        const double wi = (i == 0 || i == small.nx - 1) ? 1.0
                          : (i % 2 == 1)                ? 4.0
                                                        : 2.0;
        for (int j = 0; j < small.np; ++j) {
          const double wj = (j == 0 || j == small.np - 1) ? 1.0
                            : (j % 2 == 1)                ? 4.0
                                                          : 2.0;
          total += wi * wj * w.values(i, j);
        }
      }
      total *= hx * hp / 9.0;
      worst = std::max(worst, std::abs(total - 1.0));
    }
    report(out, os, "Wigner normalization", worst <= 1e-6,
           "max |integral - 1| = " + max_str(worst));
  }

  {  // eps=2 flow circularity: J_p = -x W
    const auto& c = ho.pairs[1].coeffs;
    const WignerField w = wigner_from_coeffs(c, small, ho.pairs[1].value);
    const Eigen::MatrixXd jp = jp_field(c, PotentialSpec{2.0}, small);
    double worst = 0.0;
    for (int i = 0; i < small.nx; ++i)
      for (int j = 0; j < small.np; ++j)
        worst = std::max(worst,
                         std::abs(jp(i, j) + small.x(i) * w.values(i, j)));
    report(out, os, "eps=2 streamline circularity (J_p = -xW)", worst <= 1e-9,
           "max |J_p + xW| = " + max_str(worst));
  }

  {  // symmetry diagnostics
    const WignerField w1 = wigner_from_coeffs(s15.pairs[1].coeffs, small,
                                              s15.pairs[1].value);
    const auto rep = symmetry_diagnostics(w1);
    const Spectrum s14 = eigendecompose(assemble(1.40, 51));
    const WignerField a = wigner_from_coeffs(s14.pairs[1].coeffs, small,
                                             s14.pairs[1].value);
    const WignerField b = wigner_from_coeffs(s14.pairs[2].coeffs, small,
                                             s14.pairs[2].value);
    const auto mirror = symmetry_diagnostics(a, &b);
    const bool pass =
        rep.x_defect <= 1e-8 && mirror.mirror_defect.value() <= 1e-7;
    report(out, os, "symmetry diagnostics", pass,
           "x defect " + max_str(rep.x_defect) + ", mirror defect " +
               max_str(mirror.mirror_defect.value()));
  }

  {  // exceptional point
    const EpResult ep = find_ep({1, 2}, {1.40, 1.45}, 51, 1e-5);
    report(out, os, "exceptional point location",
           std::abs(ep.eps_ep - 1.42207) <= 1e-3,
           "eps_ep = " + format_double(ep.eps_ep) + " at n_max 51");
  }

  {  // circulation plateau and broken-phase value
    const Spectrum sa = eigendecompose(assemble(1.5, 51));
    const CirculationResult ca = circulation(
        sa.pairs[1].coeffs, sa.pairs[1].value, PotentialSpec{1.5}, 7.0, false);
    const Spectrum sb = eigendecompose(assemble(1.40, 51));
    const CirculationResult cb = circulation(sb.pairs[1].coeffs,
                                             sb.pairs[1].value,
                                             PotentialSpec{1.40}, 7.0, false);
    const bool pass = std::abs(ca.value) <= 1e-6 && std::abs(cb.value) > 1e-4;
    report(out, os, "circulation plateau / broken-phase onset", pass,
           "C(1.5) = " + max_str(ca.value) + ", C(1.40) = " +
               max_str(cb.value));
  }

  return out;
}

}  // namespace ptwig
