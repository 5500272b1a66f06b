#include "harvest/elements.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <string>

namespace harvest {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 61>;

double sq(double v) { return v * v; }

// Monotone decreasing pointwise bound on |chi~| as a function of u = |w| T.
// CP: Gamma(nu+1) 2^nu sqrt(2/pi) u^{-nu-1/2} (from |J_nu(u)| <= sqrt(2/pi u)).
// TG: c1/u + c2/u^2 + c3/u^3 from the boundary jump of chi, the boundary
// value of chi', and the total variation of chi'.
struct Envelope {
  bool cp = false;
  double mass = 1.0;  // chi~(0)
  double T = 0.0;
  double s = 0.0, a2 = 0.0;        // CP: exponent s = nu + 1/2, prefactor
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;  // TG
  double ustar = 0.0;              // bound crosses `mass` here

  double at_u(double u) const {
    if (u <= ustar) return mass;
    if (cp) return a2 * std::pow(u, -s);
    return c1 / u + c2 / (u * u) + c3 / (u * u * u);
  }
  double at_w(double w) const { return at_u(std::fabs(w) * T); }

  // Integral_v^inf env(u)^2 du.
  double tail_sq(double v) const {
    if (v < ustar) return mass * mass * (ustar - v) + tail_sq(ustar);
    if (cp) return a2 * a2 * std::pow(v, 1.0 - 2.0 * s) / (2.0 * s - 1.0);
    const double v2 = v * v, v3 = v2 * v, v4 = v3 * v, v5 = v4 * v;
    return c1 * c1 / v + c1 * c2 / v2 + (c2 * c2 + 2.0 * c1 * c3) / (3.0 * v3) +
           c2 * c3 / (2.0 * v4) + c3 * c3 / (5.0 * v5);
  }
};

Envelope make_envelope(const SwitchingSpec& spec) {
  Envelope e;
  e.T = spec.t_half();
  e.mass = spec.fourier(0.0);
  if (spec.family() == SwitchingFamily::CompactPolynomial) {
    e.cp = true;
    const double nu = spec.delta() + 0.5;
    e.s = nu + 0.5;
    e.a2 = std::exp(std::lgamma(nu + 1.0) + nu * std::log(2.0)) *
           std::sqrt(2.0 / M_PI);
    e.ustar = std::pow(e.a2 / e.mass, 1.0 / e.s);
  } else {
    const double sg = spec.sigma(), T = spec.t_half();
    const double chi0 = 1.0 / (sg * std::sqrt(2.0 * M_PI));
    const double chiT = chi0 * std::exp(-0.5 * sq(T / sg));
    const double dchi_sig = chi0 * std::exp(-0.5) / sg;  // |chi'| maximum
    const double dchiT = (T / (sg * sg)) * chiT;
    e.c1 = 2.0 * chiT * T;
    e.c2 = 2.0 * dchiT * T * T;
    e.c3 = 2.0 * (2.0 * dchi_sig - dchiT) * T * T * T;
    double lo = 1e-9, hi = 1e9;  // bound equals mass somewhere in between
    for (int i = 0; i < 200; ++i) {
      const double mid = std::sqrt(lo * hi);
      (e.c1 / mid + e.c2 / (mid * mid) + e.c3 / (mid * mid * mid) > e.mass
           ? lo
           : hi) = mid;
    }
    e.ustar = hi;
  }
  return e;
}

struct PanelSum {
  double value = 0.0, l1 = 0.0;
  double k_end = 0.0;
};

// Integral_0^inf f dk in fixed 61-point Gauss-Kronrod panels of length h.
// Stops once the analytic tail bound drops below 1e-14 of the accumulated
// integral of |f| or below floor_abs, an absolute target supplied when this
// integral is a subordinate piece of an element whose scale is set elsewhere
// (e.g. the k+Omega integral at large OmegaT).  hard_cap, when given,
// truncates deterministically instead (Gaussian decay / log-divergent
// convention) and the tail bound is ignored.
template <class F, class TailF>
PanelSum panel_sweep(F&& f, double h, TailF&& tail_bound, double floor_abs,
                     double hard_cap, const char* what) {
  long double v = 0.0L, l1 = 0.0L;
  double k = 0.0;
  long long panels = 0;
  const long long budget = 300000;
  for (;;) {
    const double k2 = (hard_cap > 0.0) ? std::min(k + h, hard_cap) : k + h;
    double pl1 = 0.0;
    const double pv = GK::integrate(f, k, k2, 0, 0.0, nullptr, &pl1);
    v += pv;
    l1 += pl1;
    k = k2;
    ++panels;
    if (hard_cap > 0.0) {
      if (k >= hard_cap) break;
    } else if (panels % 4 == 0) {
      const double target =
          std::max(1e-14 * static_cast<double>(l1), floor_abs);
      if (tail_bound(k) <= target) break;
    }
    if (panels >= budget)
      throw QuadratureError(std::string(what) +
                            ": tail tolerance unreachable within budget, k = " +
                            std::to_string(k));
  }
  return {static_cast<double>(v), static_cast<double>(l1), k};
}

// Tail Int_U^inf (u - w0) chi~(u)^2 du for the compact-polynomial family,
// chi~(u) = Gamma(nu+1) (2/u)^nu J_nu(u), via the Bessel large-argument
// expansion J_nu(u)^2 = (pi u)^{-1} [(P^2+Q^2) + (P^2-Q^2) cos 2w - 2PQ sin 2w]
// with w = u - nu pi/2 - pi/4, keeping terms through relative order U^{-2}.
// Oscillatory moments use E(m) = Int_U^inf u^{-m} e^{2iu} du
//   ~ e^{2iU} U^{-m} (i/2 + m/(4U) - i m(m+1)/(8U^2)).
double cp_tail_moment(double nu, double w0, double U) {
  const double mu = 4.0 * nu * nu;
  const double a = 2.0 * nu;
  const double g2pi =
      std::exp(2.0 * (std::lgamma(nu + 1.0) + nu * std::log(2.0))) / M_PI;
  const double mean =
      std::pow(U, 1.0 - a) / (a - 1.0) - w0 * std::pow(U, -a) / a +
      (mu - 1.0) / 8.0 * (std::pow(U, -1.0 - a) / (a + 1.0) -
                          w0 * std::pow(U, -2.0 - a) / (a + 2.0));
  const auto E = [&](double m) {
    return std::polar(1.0, 2.0 * U) * std::pow(U, -m) *
           std::complex<double>(m / (4.0 * U),
                                0.5 - m * (m + 1.0) / (8.0 * U * U));
  };
  const std::complex<double> rot =
      std::polar(1.0, -(nu * M_PI + 0.5 * M_PI));
  const std::complex<double> osc =
      E(a) - w0 * E(a + 1.0) -
      (mu - 1.0) * (mu - 5.0) / 32.0 * (E(a + 2.0) - w0 * E(a + 3.0));
  const std::complex<double> osc2 =
      -(mu - 1.0) / 4.0 * (E(a + 1.0) - w0 * E(a + 2.0)) +
      (mu - 1.0) * (mu - 9.0) * (mu - 7.0) / 384.0 * E(a + 3.0);
  return g2pi * (mean + (rot * osc).real() + (rot * osc2).imag());
}

double p_quadrature(double lambda, double omega, const SwitchingSpec& spec) {
  const double T = spec.t_half();
  const auto integrand = [&](double k) {
    return k * sq(spec.fourier(k + omega));
  };
  if (spec.family() == SwitchingFamily::Gaussian) {
    const double sg = spec.sigma();
    const double k_end = std::max(2.0 / sg, 27.5 / sg - omega);
    const auto ps = panel_sweep(integrand, 1.0 / sg, [](double) { return 0.0; },
                                0.0, k_end, "P");
    return lambda * lambda / (4.0 * M_PI * M_PI) * ps.value;
  }
  const double delta = spec.delta();
  if (spec.family() == SwitchingFamily::CompactPolynomial && delta > 0.0) {
    // In u = wT the integral is Int_{ot}^inf (u - ot) chi~(u)^2 du with
    // chi~(u) = Gamma(nu+1) (2/u)^nu J_nu(u) and a u^{-2nu-1} tail that is
    // far too slow for a sweep-to-tolerance at small delta.  Two exact
    // routes instead:
    //   delta <  2: full-line moments minus the finite [0, ot] piece, using
    //     Int_0^inf u^{1-2nu} J_nu^2 du = Gamma(2nu-1)/(2^{2nu-1}Gamma(nu)^2 Gamma(2nu)),
    //     Int_0^inf u^{-2nu}  J_nu^2 du = sqrt(pi)Gamma(2nu)/(2^{2nu}Gamma(nu+1/2)^2 Gamma(2nu+1/2));
    //   delta >= 2: finite [ot, ot+1000] piece plus the Bessel large-argument
    //     asymptotic tail (the moment difference above cancels catastrophically
    //     at large ot once the decay is fast).
    const double nu = delta + 0.5;
    const double ot = omega * T;
    const double hu = 0.5 * M_PI;  // half the asymptotic J_nu^2 period
    const auto fu = [&](double u) { return (u - ot) * sq(spec.fourier(u / T)); };
    const auto piece = [&](double lo, double hi) {
      long double acc = 0.0L;
      for (double a = lo; a < hi; a += hu)
        acc += GK::integrate(fu, a, std::min(hi, a + hu), 0, 0.0, nullptr,
                             nullptr);
      return static_cast<double>(acc);
    };
    double val;
    if (delta < 2.0) {
      const double ln2 = std::log(2.0);
      const double lg2 = 2.0 * std::lgamma(nu + 1.0);
      const double g2e1 = std::exp(lg2 + ln2 + std::lgamma(2.0 * nu - 1.0) -
                                   2.0 * std::lgamma(nu) - std::lgamma(2.0 * nu));
      const double g2e0 =
          std::sqrt(M_PI) * std::exp(lg2 + std::lgamma(2.0 * nu) -
                                     2.0 * std::lgamma(nu + 0.5) -
                                     std::lgamma(2.0 * nu + 0.5));
      val = g2e1 - ot * g2e0 - piece(0.0, ot);
    } else {
      const double U = ot + 1000.0;
      val = piece(ot, U) + cp_tail_moment(nu, ot, U);
    }
    return lambda * lambda / (4.0 * M_PI * M_PI * T * T) * val;
  }
  // Truncated Gaussian and delta <= 0 have a boundary jump, so the k-integral
  // is log-divergent; report the value at the fixed cutoff k = omega + 1000/T
  // (sign-based comparisons are insensitive to the convention).
  const auto ps = panel_sweep(integrand, M_PI / T, [](double) { return 0.0; },
                              0.0, omega + 1000.0 / T, "P");
  return lambda * lambda / (4.0 * M_PI * M_PI) * ps.value;
}

double p_closed_gaussian(double lambda, double omega, double sigma) {
  const double a = omega * sigma;
  double bracket;  // e^{a^2} (e^{-a^2} - sqrt(pi) a erfc(a))
  if (a <= 6.0) {
    bracket = 1.0 - std::sqrt(M_PI) * a * erfcx(a);
  } else {
    // Asymptotic series sum_k (-1)^{k+1} (2k-1)!!/(2a^2)^k.
    const double r = 1.0 / (2.0 * a * a);
    double term = r, sum = r;
    for (int k = 1; k < 40; ++k) {
      const double next = -term * (2.0 * k + 1.0) * r;
      if (std::fabs(next) >= std::fabs(term)) break;  // smallest-term cutoff
      term = next;
      sum += term;
      if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
    }
    bracket = sum;
  }
  return lambda * lambda / (8.0 * M_PI * M_PI * sigma * sigma) *
         std::exp(-a * a) * bracket;
}

double sinc(double t) {
  if (std::fabs(t) < 1e-4) return 1.0 - t * t / 6.0;
  return std::sin(t) / t;
}

}  // namespace

double p_element(double lambda, double omega, const SwitchingSpec& spec) {
  if (!(lambda > 0.0)) throw std::invalid_argument("p_element: lambda must be > 0");
  if (!(omega >= 0.0)) throw std::invalid_argument("p_element: omega must be >= 0");
  if (spec.family() == SwitchingFamily::Gaussian)
    return p_closed_gaussian(lambda, omega, spec.sigma());
  return p_quadrature(lambda, omega, spec);
}

double p_element_quadrature(double lambda, double omega,
                            const SwitchingSpec& spec) {
  return p_quadrature(lambda, omega, spec);
}

PairElements gaussian_elements(const ElementParams& p) {
  if (p.spec.family() != SwitchingFamily::Gaussian)
    throw std::invalid_argument("gaussian_elements: Gaussian switching only");
  if (!(p.lambda > 0.0) || !(p.omega >= 0.0))
    throw std::invalid_argument("gaussian_elements: need lambda > 0, omega >= 0");
  if (!(p.x > 0.0))
    throw std::domain_error("gaussian_elements: x = 0 (use p_element for the limit)");

  const double sg = p.spec.sigma();
  const double a = p.omega * sg;
  const double b = p.x / (2.0 * sg);
  const double ea2 = std::exp(-a * a);
  const double pref = p.lambda * p.lambda /
                      (8.0 * std::pow(M_PI, 1.5) * p.x * sg);

  PairElements out;
  out.P = p_closed_gaussian(p.lambda, p.omega, sg);

  double c_total;
  if (b < 5e-7) {
    // x -> 0 limit: C = P (1 - b^2 (4 w1 + 2 a w2)/(6 w1)) from the Taylor
    // expansion of Im w(-b + ia) around b = 0.
    const double w1 = 2.0 * (1.0 / std::sqrt(M_PI) - a * erfcx(a));
    const double w2 = -2.0 * erfcx(a) + 2.0 * a * w1;
    c_total = out.P * (1.0 - b * b * (4.0 * w1 + 2.0 * a * w2) / (6.0 * w1));
    out.Xp = -p.lambda * p.lambda / (8.0 * M_PI * M_PI * sg * sg) * ea2 *
             (1.0 - 2.0 * b * b / 3.0);
  } else {
    c_total = -pref * ea2 * faddeeva_w(cplx(-b, a)).imag();
    out.Xp = -p.lambda * p.lambda / (4.0 * M_PI * M_PI * p.x * sg) * ea2 *
             dawson(b);
  }
  // C- regular at x -> 0: -(lambda^2/8 pi^{3/2} sigma) e^{-b^2} Omega sinc.
  out.Cm = -p.lambda * p.lambda / (8.0 * std::pow(M_PI, 1.5) * sg) *
           std::exp(-b * b) * p.omega * sinc(p.omega * p.x);
  out.Cp = c_total - out.Cm;  // keeps Cp + Cm = C exact
  out.Xm = cplx(0.0, pref * ea2 * std::exp(-b * b));
  return out;
}

PairElements quadrature_elements(const ElementParams& p) {
  if (!(p.x > 0.0)) throw std::domain_error("quadrature_elements: x must be > 0");
  if (!(p.lambda > 0.0) || !(p.omega >= 0.0))
    throw std::invalid_argument("quadrature_elements: need lambda > 0, omega >= 0");
  const SwitchingSpec& s = p.spec;
  const double T = s.t_half();
  const bool gaussian = s.family() == SwitchingFamily::Gaussian;

  double h, k_end = -1.0;
  Envelope env;
  if (gaussian) {
    const double sg = s.sigma();
    h = std::min(M_PI / p.x, 1.0 / sg);
    k_end = p.omega + 28.0 / sg;
  } else {
    h = std::min(M_PI / p.x, M_PI / T);
    env = make_envelope(s);
  }
  const auto no_tail = [](double) { return 0.0; };

  // I(shift) = Int_0^inf sin(kx) chi~(k + shift)^2 dk, shift = +-Omega.
  const auto sq_integral = [&](double shift, double floor_abs,
                               const char* what) {
    const auto f = [&](double k) {
      return std::sin(k * p.x) * sq(s.fourier(k + shift));
    };
    if (gaussian) return panel_sweep(f, h, no_tail, 0.0, k_end, what);
    const auto tail = [&](double k) {
      double b = env.tail_sq((k + shift) * T) / T;
      // Past the envelope center the bound is monotone, so the sin(kx)
      // oscillation caps the remainder at 2 g(k)/x (second mean value thm).
      if (k + shift >= 0.0)
        b = std::min(b, 2.0 * sq(env.at_w(k + shift)) / p.x);
      return b;
    };
    return panel_sweep(f, h, tail, floor_abs, -1.0, what);
  };
  // The k-Omega integral carries the element scale; the k+Omega piece and
  // the X cross product only need absolute accuracy at that common scale.
  const auto ps_minus = sq_integral(-p.omega, 0.0, "C(k-Omega)");
  const double floor_abs = 1e-13 * ps_minus.l1;
  const auto ps_plus = sq_integral(p.omega, floor_abs, "C(k+Omega)");

  const auto fx = [&](double k) {
    return std::sin(k * p.x) * s.fourier(k - p.omega) * s.fourier(k + p.omega);
  };
  PanelSum ps_x;
  if (gaussian) {
    ps_x = panel_sweep(fx, h, no_tail, 0.0, k_end, "X");
  } else {
    const auto tail = [&](double k) {
      double b = env.tail_sq((k - p.omega) * T) / T;
      if (k - p.omega >= 0.0)
        b = std::min(b, 2.0 * env.at_w(k - p.omega) * env.at_w(k + p.omega) / p.x);
      return b;
    };
    ps_x = panel_sweep(fx, h, tail, floor_abs, -1.0, "X");
  }

  const double pref = p.lambda * p.lambda / (8.0 * M_PI * M_PI * p.x);
  PairElements out;
  out.P = p_quadrature(p.lambda, p.omega, s);
  out.Cp = pref * (ps_plus.value + ps_minus.value);
  out.Cm = pref * (ps_plus.value - ps_minus.value);
  out.Xp = -2.0 * pref * ps_x.value;
  if (gaussian) {
    const double sg = s.sigma();
    const double a = p.omega * sg, b = p.x / (2.0 * sg);
    out.Xm = cplx(0.0, p.lambda * p.lambda /
                           (8.0 * std::pow(M_PI, 1.5) * p.x * sg) *
                           std::exp(-a * a - b * b));
  } else if (p.x >= 2.0 * T) {
    out.Xm = cplx(0.0, 0.0);  // commutator support ends at x = 2T
  }  // else: left unset (timelike compact-support branch out of scope)
  return out;
}

}  // namespace harvest
