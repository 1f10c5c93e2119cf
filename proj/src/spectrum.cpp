#include "ptwig/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace ptwig {

const char* to_string(EigenClass c) {
  switch (c) {
    case EigenClass::Real:
      return "real";
    case EigenClass::PairMember:
      return "pair";
    default:
      return "unclassified";
  }
}

Spectrum eigendecompose(const HamiltonianMatrix& matrix) {
  const int n = matrix.n_max;
  if (n <= 0 || matrix.entries.rows() != n || matrix.entries.cols() != n)
    throw std::invalid_argument("eigendecompose: matrix not assembled");
  if (n > 100) throw std::domain_error("eigendecompose: n_max > 100");

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(matrix.entries, true);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error(
        "eigendecompose: eigenvalue iteration did not converge");

  Spectrum spec;
  spec.epsilon = matrix.epsilon;
  spec.n_max = n;
  spec.pairs.resize(n);
  const double norm_f = matrix.entries.norm();
  for (int i = 0; i < n; ++i) {
    EigenPair p;
    p.value = solver.eigenvalues()(i);
    p.coeffs = solver.eigenvectors().col(i);
    p.coeffs.normalize();
    // Gauge fix: largest-magnitude coefficient rotated to the positive real
    // axis, ties resolved by the lowest index, so repeated runs serialize
    // identically.
    int imax = 0;
    double amax = -1.0;
    for (int j = 0; j < n; ++j) {
      const double a = std::abs(p.coeffs(j));
      if (a > amax) {
        amax = a;
        imax = j;
      }
    }
    if (amax > 0.0) p.coeffs *= std::conj(p.coeffs(imax)) / amax;
    const double residual =
        (matrix.entries * p.coeffs - p.value * p.coeffs).norm();
    if (residual > 1e-10 * norm_f)
      throw std::runtime_error("eigendecompose: residual bound violated");
    spec.pairs[i] = std::move(p);
  }
  std::sort(spec.pairs.begin(), spec.pairs.end(),
            [](const EigenPair& a, const EigenPair& b) {
              if (a.value.real() != b.value.real())
                return a.value.real() < b.value.real();
              return a.value.imag() < b.value.imag();
            });
  classify(spec);
  return spec;
}

void classify(Spectrum& spectrum, double tol_real) {
  auto& ps = spectrum.pairs;
  const int n = static_cast<int>(ps.size());
  for (auto& p : ps) {
    p.partner = -1;
    p.cls = std::abs(p.value.imag()) <=
                    tol_real * std::max(1.0, std::abs(p.value))
                ? EigenClass::Real
                : EigenClass::Unclassified;
  }
  // Greedy conjugate pairing of the remainder: closest |E_a - conj(E_b)|
  // first, deterministic tie-break on indices.
  struct Cand {
    double d;
    int a, b;
  };
  std::vector<Cand> cands;
  for (int a = 0; a < n; ++a) {
    if (ps[a].cls != EigenClass::Unclassified) continue;
    for (int b = a + 1; b < n; ++b) {
      if (ps[b].cls != EigenClass::Unclassified) continue;
      const double d = std::abs(ps[a].value - std::conj(ps[b].value));
      if (d <= 1e-6 * std::max(1.0, std::abs(ps[a].value)))
        cands.push_back({d, a, b});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
    if (x.d != y.d) return x.d < y.d;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });
  for (const auto& c : cands) {
    if (ps[c.a].partner >= 0 || ps[c.b].partner >= 0) continue;
    ps[c.a].partner = c.b;
    ps[c.b].partner = c.a;
    ps[c.a].cls = ps[c.b].cls = EigenClass::PairMember;
  }
}

BranchAssignment track_branches(const Spectrum& previous,
                                const Spectrum& current,
                                double break_distance) {
  if (previous.n_max != current.n_max)
    throw std::invalid_argument("track_branches: spectra sizes differ");
  const int n = current.n_max;
  struct Cand {
    double d;
    int prev, cur;
  };
  std::vector<Cand> cands;
  cands.reserve(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      cands.push_back(
          {std::abs(previous.pairs[i].value - current.pairs[j].value), i, j});
  std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
    if (x.d != y.d) return x.d < y.d;
    if (x.prev != y.prev) return x.prev < y.prev;
    return x.cur < y.cur;
  });
  BranchAssignment out;
  out.prev_index.assign(n, -1);
  out.is_break.assign(n, false);
  std::vector<bool> prev_used(n, false);
  int matched = 0;
  for (const auto& c : cands) {
    if (matched == n) break;
    if (prev_used[c.prev] || out.prev_index[c.cur] >= 0) continue;
    prev_used[c.prev] = true;
    out.prev_index[c.cur] = c.prev;
    out.is_break[c.cur] = c.d > break_distance;
    ++matched;
  }
  return out;
}

std::vector<SweepPoint> sweep(const std::vector<double>& eps_values,
                              int n_max, int workers) {
  if (eps_values.empty())
    throw std::invalid_argument("sweep: empty epsilon list");
  for (size_t i = 0; i < eps_values.size(); ++i) {
    if (!(eps_values[i] > 0.0))
      throw std::domain_error("sweep: epsilon values must be positive");
    if (i > 0 && !(eps_values[i] > eps_values[i - 1]))
      throw std::invalid_argument("sweep: epsilon values must ascend");
  }

  const size_t count = eps_values.size();
  std::vector<Spectrum> spectra(count);
  std::vector<std::string> errors(count);
  auto work = [&](size_t begin, size_t stride) {
    for (size_t k = begin; k < count; k += stride) {
      try {
        spectra[k] = eigendecompose(assemble(eps_values[k], n_max));
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    }
  };
  const int nw = std::max(1, std::min<int>(workers, static_cast<int>(count)));
  if (nw == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nw; ++t) pool.emplace_back(work, t, nw);
    for (auto& t : pool) t.join();
  }
  for (size_t k = 0; k < count; ++k)
    if (!errors[k].empty())
      throw std::runtime_error("sweep: failure at eps = " +
                               std::to_string(eps_values[k]) + ": " +
                               errors[k]);

  // branch identities threaded serially through the ordered results
  std::vector<SweepPoint> points(count);
  int next_branch = 0;
  for (size_t k = 0; k < count; ++k) {
    points[k].spectrum = std::move(spectra[k]);
    points[k].branch_id.assign(n_max, -1);
    if (k == 0) {
      for (int j = 0; j < n_max; ++j) points[k].branch_id[j] = next_branch++;
      continue;
    }
    const auto assign =
        track_branches(points[k - 1].spectrum, points[k].spectrum);
    for (int j = 0; j < n_max; ++j) {
      if (assign.prev_index[j] >= 0 && !assign.is_break[j])
        points[k].branch_id[j] = points[k - 1].branch_id[assign.prev_index[j]];
      else
        points[k].branch_id[j] = next_branch++;
    }
  }
  return points;
}

namespace {
// True when both branch eigenvalues carry imaginary parts beyond the
// classification band (10x tol_real), i.e. the pair has gone complex.
bool pair_is_complex(const Spectrum& s, int ia, int ib, double tol_real) {
  auto above = [&](int i) {
    const auto& v = s.pairs[i].value;
    return std::abs(v.imag()) > 10.0 * tol_real * std::max(1.0, std::abs(v));
  };
  return above(ia) && above(ib);
}
}  // namespace

EpResult find_ep(std::pair<int, int> branch_pair,
                 std::pair<double, double> bracket, int n_max, double tol,
                 double tol_real) {
  if (!(tol >= 1e-7)) throw std::domain_error("find_ep: tol must be >= 1e-7");
  auto [lo, hi] = bracket;
  if (!(lo < hi)) throw std::invalid_argument("find_ep: empty bracket");
  auto indicator = [&](double eps) {
    const Spectrum s = eigendecompose(assemble(eps, n_max));
    return pair_is_complex(s, branch_pair.first, branch_pair.second, tol_real);
  };
  const bool at_lo = indicator(lo);
  const bool at_hi = indicator(hi);
  if (!at_lo || at_hi) {
    auto describe = [](bool complex_pair) {
      return complex_pair ? "conjugate pair" : "real";
    };
    throw std::invalid_argument(
        std::string("find_ep: invalid bracket, branches are ") +
        describe(at_lo) + " at the lower end and " + describe(at_hi) +
        " at the upper end");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (indicator(mid))
      lo = mid;
    else
      hi = mid;
  }
  EpResult r;
  r.eps_ep = 0.5 * (lo + hi);
  r.bracket = bracket;
  r.branch_pair = branch_pair;
  r.n_max = n_max;
  return r;
}

std::vector<ConvergenceRow> convergence_check(double eps,
                                              const std::vector<int>& n_max_list,
                                              int levels) {
  if (n_max_list.size() < 2)
    throw std::invalid_argument("convergence_check: need at least two bases");
  for (size_t i = 1; i < n_max_list.size(); ++i)
    if (n_max_list[i] <= n_max_list[i - 1])
      throw std::invalid_argument("convergence_check: bases must ascend");
  std::vector<Spectrum> spectra;
  for (int nm : n_max_list) spectra.push_back(eigendecompose(assemble(eps, nm)));
  const Spectrum& ref = spectra.back();
  std::vector<ConvergenceRow> rows;
  for (int lvl = 0; lvl < levels; ++lvl) {
    ConvergenceRow row;
    row.level = lvl;
    row.reference = ref.pairs[lvl].value;
    row.flagged = false;
    for (const auto& s : spectra) {
      const double d = std::abs(s.pairs[lvl].value - row.reference);
      row.drift.push_back(d);
      if (&s != &ref && d > 1e-6) row.flagged = true;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace ptwig
