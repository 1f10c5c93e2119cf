#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace ptwig {

// Truncated Taylor series in one variable: coefficient c[k] is the k-th
// derivative divided by k!. Enough machinery to push the closed-form
// cross-Wigner expression through with p as the series variable, giving
// exact p-derivatives without finite differencing.
template <typename T, int N>
struct Jet {
  std::array<T, N> c{};

  static Jet constant(const T& v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  // value v plus unit first-order term (the expansion variable itself)
  static Jet variable(const T& v) {
    Jet j;
    j.c[0] = v;
    if constexpr (N > 1) j.c[1] = T(1);
    return j;
  }

  Jet operator+(const Jet& o) const {
    Jet r;
    for (int k = 0; k < N; ++k) r.c[k] = c[k] + o.c[k];
    return r;
  }
  Jet operator-(const Jet& o) const {
    Jet r;
    for (int k = 0; k < N; ++k) r.c[k] = c[k] - o.c[k];
    return r;
  }
  Jet operator*(const Jet& o) const {
    Jet r;
    for (int k = 0; k < N; ++k) {
      T acc{};
      for (int j = 0; j <= k; ++j) acc += c[j] * o.c[k - j];
      r.c[k] = acc;
    }
    return r;
  }
  Jet operator*(const T& s) const {
    Jet r;
    for (int k = 0; k < N; ++k) r.c[k] = c[k] * s;
    return r;
  }
  Jet operator-() const {
    Jet r;
    for (int k = 0; k < N; ++k) r.c[k] = -c[k];
    return r;
  }

  // k-th derivative value at the expansion point
  T derivative(int k) const {
    T f(1);
    for (int j = 2; j <= k; ++j) f *= T(j);
    return c[k] * f;
  }
};

// exp of a jet via the standard ODE recurrence b' = a' b.
template <typename T, int N>
Jet<T, N> exp(const Jet<T, N>& a) {
  Jet<T, N> b;
  using std::exp;
  b.c[0] = exp(a.c[0]);
  for (int k = 1; k < N; ++k) {
    T acc{};
    for (int j = 1; j <= k; ++j) acc += T(j) * a.c[j] * b.c[k - j];
    b.c[k] = acc * (T(1) / T(k));
  }
  return b;
}

template <typename T, int N>
Jet<T, N> pow_int(const Jet<T, N>& a, int d) {
  Jet<T, N> r = Jet<T, N>::constant(T(1));
  Jet<T, N> base = a;
  while (d > 0) {
    if (d & 1) r = r * base;
    base = base * base;
    d >>= 1;
  }
  return r;
}

}  // namespace ptwig
