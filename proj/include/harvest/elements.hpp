// Reduced-density-matrix elements P, C = C+ + C-, X = X+ + X- for identical
// pointlike detectors: closed forms for Gaussian switching, k-space
// quadrature for the compact-support families.
#pragma once

#include <optional>
#include <stdexcept>

#include "harvest/specialfn.hpp"
#include "harvest/switching.hpp"

namespace harvest {

struct ElementParams {
  double lambda = 1.0;  // coupling
  double omega = 0.0;   // energy gap (1/time)
  SwitchingSpec spec;
  double x = 0.0;  // detector separation (length); pair formulas need x > 0
};

struct PairElements {
  double P = 0.0;
  cplx Cp, Cm, Xp;
  // Not computed for a compact-support switching at timelike separation
  // (x < 2T): the principal-value branch is out of scope, not guessed.
  std::optional<cplx> Xm;
  // C+ and C- grow toward small separation (both reach the 1/(x sigma) scale
  // by x ~ sigma) while their physical sum keeps the e^{-Omega^2 sigma^2}
  // suppression, so the evaluators store the directly computed sum: re-adding
  // the stored parts would quantize C at the parts' ulp and can even push C
  // above P, which the Gram bound |C| <= P forbids.
  cplx Csum;

  cplx C() const { return Csum; }
  // Throws std::domain_error when Xm was not computed.
  cplx X() const {
    if (!Xm) throw std::domain_error("X-: not computed (compact support, x < 2T)");
    return Xp + *Xm;
  }
};

// Adaptive oscillatory k-integration could not reach its tolerance within
// the evaluation budget.
struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Closed forms; requires Gaussian family and x > 0 (domain_error at x = 0).
// For 0 < x < 1e-6 sigma the raw 1/x expressions lose accuracy and the
// x -> 0 limit series is used instead.
PairElements gaussian_elements(const ElementParams& p);

// k-space quadrature: C+- = (lambda^2/8 pi^2 x) Int_0^inf dk sin(kx)
// [chi~(k+Omega)^2 +- chi~(k-Omega)^2], X+ with the cross product, any
// family; x > 0.  X-: Gaussian -> closed form; compact support -> exactly 0
// for x >= 2T, not-computed marker for x < 2T.
PairElements quadrature_elements(const ElementParams& p);

// Single-detector excitation probability.  Gaussian -> closed form
// lambda^2/(8 pi^2 sigma^2) (e^{-a^2} - sqrt(pi) a erfc(a)), a = Omega sigma;
// compact families -> (lambda^2/4 pi^2) Int_0^inf dk k chi~(k+Omega)^2.
// The truncated-Gaussian integral (and delta = 0) diverges logarithmically
// from the boundary jump; it is reported with the fixed cutoff
// k <= Omega + 1000/T, which leaves every sign-based comparison unaffected.
double p_element(double lambda, double omega, const SwitchingSpec& spec);

// Always-quadrature branch of p_element (cross-check path; Gaussian too).
double p_element_quadrature(double lambda, double omega, const SwitchingSpec& spec);

}  // namespace harvest
