#include "harvest/switching.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <random>
#include <stdexcept>

#include "harvest/specialfn.hpp"

namespace harvest {

namespace {

// Fourier-cache grid in the dimensionless variable u = |w| T.  All three
// transforms oscillate on the scale u ~ 2 pi, so a uniform grid with
// h = 1/512 keeps the centered-cubic interpolation error near 4e-14.
constexpr double kCacheStep = 1.0 / 512.0;
constexpr double kCacheUMax = 1536.0;

double sq(double v) { return v * v; }

}  // namespace

SwitchingSpec::SwitchingSpec(SwitchingFamily fam, double sigma, double t_half,
                             double delta)
    : family_(fam), sigma_(sigma), t_half_(t_half), delta_(delta) {
  if (!(sigma > 0.0)) throw std::invalid_argument("switching: sigma must be > 0");
  if (!(t_half > 0.0)) throw std::invalid_argument("switching: T must be > 0");
  if (!(delta >= 0.0)) throw std::invalid_argument("switching: delta must be >= 0");
  if (fam == SwitchingFamily::CompactPolynomial) {
    cp_norm_ = std::exp(std::lgamma(delta + 1.5) - std::lgamma(delta + 1.0)) /
               (std::sqrt(M_PI) * t_half);
  }
  if (compact_support()) build_cache();
}

SwitchingSpec SwitchingSpec::gaussian(double sigma) {
  return SwitchingSpec(SwitchingFamily::Gaussian, sigma, 5.0 * sigma, 0.0);
}

SwitchingSpec SwitchingSpec::truncated_gaussian(double sigma) {
  return SwitchingSpec(SwitchingFamily::TruncatedGaussian, sigma, 5.0 * sigma,
                       0.0);
}

SwitchingSpec SwitchingSpec::compact_polynomial(double delta, double t_half) {
  return SwitchingSpec(SwitchingFamily::CompactPolynomial, t_half / 5.0, t_half,
                       delta);
}

double SwitchingSpec::value(double t) const {
  switch (family_) {
    case SwitchingFamily::Gaussian:
      return std::exp(-0.5 * sq(t / sigma_)) / (sigma_ * std::sqrt(2.0 * M_PI));
    case SwitchingFamily::TruncatedGaussian:
      if (std::fabs(t) > t_half_) return 0.0;
      return std::exp(-0.5 * sq(t / sigma_)) / (sigma_ * std::sqrt(2.0 * M_PI));
    case SwitchingFamily::CompactPolynomial: {
      const double r = sq(t / t_half_);
      if (r >= 1.0) return 0.0;
      return cp_norm_ * std::pow(1.0 - r, delta_);
    }
  }
  return 0.0;
}

double SwitchingSpec::fourier_direct(double w) const {
  const double aw = std::fabs(w);
  switch (family_) {
    case SwitchingFamily::Gaussian:
      return std::exp(-0.5 * sq(sigma_ * aw));
    case SwitchingFamily::TruncatedGaussian:
      // Integral of the normalized Gaussian over [-T, T] against e^{-iwt}:
      // Re[e^{-b^2} erf(a + ib)] with a = T/(sqrt2 sigma), b = sigma w/sqrt2.
      return erf_scaled(t_half_ / (std::sqrt(2.0) * sigma_),
                        sigma_ * aw / std::sqrt(2.0))
          .real();
    case SwitchingFamily::CompactPolynomial: {
      // chi~(u) = Gamma(nu+1) (2/u)^nu J_nu(u), nu = delta + 1/2, u = |w| T;
      // equivalently 0F1(nu+1; -u^2/4), used where it converges without
      // cancellation.
      const double nu = delta_ + 0.5;
      const double u = aw * t_half_;
      if (u <= std::max(1.0, std::sqrt(nu))) {
        const double q = -0.25 * u * u;
        double term = 1.0, sum = 1.0;
        for (int k = 0; k < 200; ++k) {
          term *= q / ((k + 1.0) * (nu + 1.0 + k));
          sum += term;
          if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
        }
        return sum;
      }
      const double lg = std::lgamma(nu + 1.0) + nu * std::log(2.0 / u);
      return std::exp(lg) * boost::math::cyl_bessel_j(nu, u);
    }
  }
  return 0.0;
}

void SwitchingSpec::build_cache() {
  const int n = static_cast<int>(kCacheUMax / kCacheStep) + 4;
  auto grid = std::make_shared<std::vector<double>>(n);
  for (int i = 0; i < n; ++i)
    (*grid)[i] = fourier_direct(i * kCacheStep / t_half_);
  cache_ = std::move(grid);

  // Self-check: interpolation against direct evaluation at random points.
  std::mt19937_64 rng(0x5eedu);
  std::uniform_real_distribution<double> uu(0.0, kCacheUMax - 1.0);
  for (int i = 0; i < 200; ++i) {
    const double w = uu(rng) / t_half_;
    if (std::fabs(fourier(w) - fourier_direct(w)) > 1e-12)
      throw std::logic_error("switching: fourier cache failed validation");
  }
}

double SwitchingSpec::fourier(double w) const {
  if (!cache_) return fourier_direct(w);
  const double u = std::fabs(w) * t_half_;
  if (u >= kCacheUMax) return fourier_direct(w);
  const auto& f = *cache_;
  // Centered 4-point cubic on the uniform grid (one-sided on the first cell).
  int i = static_cast<int>(u / kCacheStep);
  if (i < 1) {
    const double x = u / kCacheStep;
    return f[0] * (-(x - 1.0) * (x - 2.0) * (x - 3.0) / 6.0) +
           f[1] * (x * (x - 2.0) * (x - 3.0) / 2.0) +
           f[2] * (-x * (x - 1.0) * (x - 3.0) / 2.0) +
           f[3] * (x * (x - 1.0) * (x - 2.0) / 6.0);
  }
  const double s = u / kCacheStep - i;
  return f[i - 1] * (-s * (s - 1.0) * (s - 2.0) / 6.0) +
         f[i] * ((s * s - 1.0) * (s - 2.0) / 2.0) +
         f[i + 1] * (-s * (s + 1.0) * (s - 2.0) / 2.0) +
         f[i + 2] * (s * (s * s - 1.0) / 6.0);
}

}  // namespace harvest
