#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

#include "ptwig/hamiltonian.hpp"

namespace ptwig {

enum class EigenClass { Real, PairMember, Unclassified };

const char* to_string(EigenClass c);

struct EigenPair {
  std::complex<double> value;
  Eigen::VectorXcd coeffs;  // unit norm, largest-|.| coefficient real positive
  EigenClass cls = EigenClass::Unclassified;
  int partner = -1;  // index of the conjugate partner when cls == PairMember
};

// Eigenpairs sorted by (Re E, Im E) ascending.
struct Spectrum {
  double epsilon = 0.0;
  int n_max = 0;
  std::vector<EigenPair> pairs;
};

// Dense eigendecomposition of the complex symmetric matrix. Every returned
// pair satisfies ||M v - lambda v||_2 <= 1e-10 ||M||_F, else it throws.
Spectrum eigendecompose(const HamiltonianMatrix& matrix);

// Marks eigenvalues Real when |Im E| <= tol_real * max(1, |E|), then greedily
// pairs the rest with their best conjugate match; leftovers stay
// Unclassified (valid output, typically truncation artifacts).
void classify(Spectrum& spectrum, double tol_real = 1e-8);

struct BranchAssignment {
  std::vector<int> prev_index;   // per current eigenvalue; -1 if unmatched
  std::vector<bool> is_break;    // matched farther than the break distance
};

// Greedy nearest-neighbor matching of eigenvalues in the complex plane.
BranchAssignment track_branches(const Spectrum& previous,
                                const Spectrum& current,
                                double break_distance = 0.5);

struct SweepPoint {
  Spectrum spectrum;
  std::vector<int> branch_id;  // per eigenvalue, continuous across the sweep
};

// Independent epsilon points may fan out over `workers` threads; results are
// merged in input order, so the output is identical for any worker count.
std::vector<SweepPoint> sweep(const std::vector<double>& eps_values,
                              int n_max, int workers = 1);

struct EpResult {
  double eps_ep = 0.0;
  std::pair<double, double> bracket;
  std::pair<int, int> branch_pair;
  int n_max = 0;
};

// Bisection on the indicator "the two branch eigenvalues carry imaginary
// parts" down to bracket width <= tol. The bracket must straddle: real pair
// at the top end, conjugate pair at the bottom end.
EpResult find_ep(std::pair<int, int> branch_pair,
                 std::pair<double, double> bracket, int n_max, double tol,
                 double tol_real = 1e-8);

struct ConvergenceRow {
  int level;
  std::complex<double> reference;  // eigenvalue at the largest basis
  std::vector<double> drift;       // |E(n_max_i) - E(n_max_last)| per basis
  bool flagged;                    // any drift above 1e-6
};

// Drift of the lowest `levels` eigenvalues across basis truncations.
std::vector<ConvergenceRow> convergence_check(double eps,
                                              const std::vector<int>& n_max_list,
                                              int levels = 6);

}  // namespace ptwig
