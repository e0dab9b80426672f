#pragma once
// special_functions.hpp — self-contained special-function kernel.
//
// Provides exactly what the field/condensate models need, in double
// precision, with documented accuracy on documented ranges:
//
//   ellipk(k)     complete elliptic integral of the first kind K(k),
//                 *modulus* convention (argument is k, NOT the parameter
//                 m = k^2).  0 <= k < 1, relative accuracy <= 1e-12.
//   airy_ai/bi    Airy functions on |x| <= 1e4.  Ai absolute error <= 1e-12
//                 for x >= -50 (phase-limited but far better than 1e-10 out
//                 to x ~ -1e3); Bi relative error <= 1e-10 where the value is
//                 representable in double.  Bi overflow raises range_error,
//                 never returns Inf.
//   airy_ai_deriv/bi_deriv   derivatives, same ranges.
//   airy_ci       Ci(x) = Bi(x) + i*Ai(x), the outgoing-wave combination
//                 used by the free-fall Green function.  NOTE: the imaginary
//                 unit is part of the definition here; |Ci|^2 = Ai^2 + Bi^2.
//   bessel_j0     J0(x) for x >= 0, absolute accuracy <= 1e-12 on [0, 1e4].
//   sinc_half     sin(n*pi*delta/2) / (n*pi*delta/2), the slot-width factor
//                 of the coupled-slot mode amplitudes; continuous limit 1 as
//                 delta -> 0.
//
// Evaluation strategy per function: Maclaurin series (long double) near the
// origin, Bessel-integral connections (Gauss-Legendre + truncated cosh/sinh
// kernels) in the mid range, Poincare asymptotic expansions beyond.  Every
// region boundary is covered by an oracle agreement test in the test tree.

#include <complex>

namespace becsense::sf {

using ComplexValue = std::complex<double>;

double ellipk(double k);

double airy_ai(double x);
double airy_bi(double x);
double airy_ai_deriv(double x);
double airy_bi_deriv(double x);
ComplexValue airy_ci(double x);

double bessel_j0(double x);

double sinc_half(int n, double delta);

}  // namespace becsense::sf
