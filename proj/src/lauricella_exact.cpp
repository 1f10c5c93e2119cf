#include <boost/multiprecision/cpp_int.hpp>

#include "ptwig/specfun.hpp"

namespace ptwig {

// Defining double sum evaluated in exact rational arithmetic. Doubles are
// exact binary rationals, so the inputs convert without rounding and the
// only inexact step is the final conversion back to double. Slow; used as
// the bit-level oracle for the floating path.
double lauricella_fa2_exact(const LauricellaArgs& args) {
  using Rat = boost::multiprecision::cpp_rational;
  if (args.r < 0 || args.s < 0)
    throw std::domain_error("lauricella_fa2_exact: r, s must be >= 0");
  const Rat a(args.a), c1(args.c1), c2(args.c2);

  Rat total = 0;
  Rat term_i = 1;  // (-r)_{i1} / ((c1)_{i1} i1!)
  for (int i1 = 0; i1 <= args.r; ++i1) {
    Rat term_ij = term_i;  // times (-s)_{i2} / ((c2)_{i2} i2!)
    for (int i2 = 0; i2 <= args.s; ++i2) {
      Rat poch_a = 1;  // (a)_{i1+i2}
      for (int k = 0; k < i1 + i2; ++k) poch_a *= a + k;
      total += poch_a * term_ij;
      term_ij *= Rat(-args.s + i2) / ((c2 + i2) * (i2 + 1));
    }
    term_i *= Rat(-args.r + i1) / ((c1 + i1) * (i1 + 1));
  }
  return total.convert_to<double>();
}

}  // namespace ptwig
