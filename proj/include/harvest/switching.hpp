// Switching-function families with unit time-integral normalization and
// Fourier-transform access.  All three families are even in t, so every
// Fourier transform is real and even in w; fourier() is implemented as a
// function of |w|, making evenness exact.
#pragma once

#include <memory>
#include <vector>

namespace harvest {

enum class SwitchingFamily { Gaussian, TruncatedGaussian, CompactPolynomial };

// Immutable after construction; concurrent reads are safe.  The two
// compact-support families build a dense interpolation cache for the Fourier
// transform at construction (element quadratures evaluate it millions of
// times); the cache is validated against direct evaluation before use and
// holds an absolute interpolation error well under 1e-11.
class SwitchingSpec {
 public:
  // chi(t) = exp(-t^2/(2 sigma^2)) / (sigma sqrt(2 pi)), full support.
  static SwitchingSpec gaussian(double sigma);
  // Same Gaussian cut to [-T, T] with T = 5 sigma; the removed tail mass
  // (total integral ~0.9999994) is deliberately not renormalized away.
  static SwitchingSpec truncated_gaussian(double sigma);
  // chi(t) = N (1 - t^2/T^2)^delta on [-T, T], N = Gamma(delta+3/2) /
  // (sqrt(pi) T Gamma(delta+1)); C^(delta-1) at the boundary.  delta beyond
  // ~100 is outside the tested range.
  static SwitchingSpec compact_polynomial(double delta, double t_half);

  SwitchingFamily family() const { return family_; }
  double sigma() const { return sigma_; }
  double t_half() const { return t_half_; }  // half-support T (= 5 sigma for the Gaussian families)
  double delta() const { return delta_; }
  bool compact_support() const { return family_ != SwitchingFamily::Gaussian; }

  // chi(t); zero outside [-T, T] for the compact families.
  double value(double t) const;

  // chi~(w) = Integral chi(t) e^{-iwt} dt; real, even, chi~(0) = Integral chi.
  // Cached-interpolation path for the compact families.
  double fourier(double w) const;

  // Same quantity without the cache; the cache is validated against this.
  double fourier_direct(double w) const;

 private:
  SwitchingSpec(SwitchingFamily fam, double sigma, double t_half, double delta);
  void build_cache();

  SwitchingFamily family_;
  double sigma_;
  double t_half_;
  double delta_;
  double cp_norm_ = 0.0;  // CP peak value N
  std::shared_ptr<const std::vector<double>> cache_;  // chi~ on u = w*T grid
};

}  // namespace harvest
