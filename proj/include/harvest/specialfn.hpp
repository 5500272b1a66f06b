#pragma once

#include <complex>

// Self-contained error-function / Dawson kernel used by the switching and
// element layers.  All exponentially growing intermediates are evaluated in
// scaled form; public entry points never leak NaN/Inf for in-domain input.

namespace harvest {

using cplx = std::complex<double>;

// Complementary error function, relative error <= 1e-12 for |x| <= 30.
// For larger x the result is produced through exp(-x^2)*erfcx(x) and
// underflows gracefully to 0.
double erfc_real(double x);

// Scaled complementary error function e^{x^2} erfc(x), x >= 0.
double erfcx(double x);

// Dawson integral D(x) = e^{-x^2} int_0^x e^{t^2} dt, relative error <= 1e-12.
double dawson(double x);

// Error function of a complex argument; accuracy-guaranteed domain
// |Re z| <= 30, |Im z| <= 30 restricted to arguments whose value is
// representable in double ((Im z)^2 - (Re z)^2 <= 700).  Out-of-domain
// arguments raise std::domain_error.
cplx erf_complex(cplx z);

// Faddeeva function w(z) = e^{-z^2} erfc(-iz) for Im z >= 0.
cplx faddeeva_w(cplx z);

// e^{-b^2} erf(a + i b) for a, b >= 0, stable for arbitrarily large b.
cplx erf_scaled(double a, double b);

}  // namespace harvest
