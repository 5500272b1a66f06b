#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <random>

#include "harvest/specialfn.hpp"
#include "harvest/switching.hpp"
#include "oracle_table.hpp"

using harvest::SwitchingFamily;
using harvest::SwitchingSpec;
using testsupport::load_oracle;

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 61>;

const auto& rows() {
  static auto r = load_oracle(std::string(FIXTURE_DIR) + "/switching_oracle.txt");
  return r;
}

SwitchingSpec from_row(const testsupport::OracleRow& r) {
  if (r.tag == "cp") return SwitchingSpec::compact_polynomial(r.cols[0], r.cols[1]);
  return SwitchingSpec::truncated_gaussian(r.cols[1] / 5.0);
}

// Integrate f over [0, b] in panels of length dp (panel-resolved oscillations).
template <typename F>
double panel_integral(F f, double b, double dp) {
  double total = 0.0;
  for (double a = 0.0; a < b; a += dp)
    total += GK::integrate(f, a, std::min(a + dp, b), 3, 1e-13);
  return total;
}

}  // namespace

TEST_CASE("switching values: peaks, supports, boundaries") {
  const double T = 0.01, sigma = T / 5.0;
  auto g = SwitchingSpec::gaussian(sigma);
  auto tg = SwitchingSpec::truncated_gaussian(sigma);
  auto cp = SwitchingSpec::compact_polynomial(2.0, T);

  CHECK(g.value(0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI) / sigma).epsilon(1e-14));
  CHECK(g.t_half() == doctest::Approx(5.0 * sigma));
  CHECK(tg.value(1.01 * T) == 0.0);
  CHECK(tg.value(-1.01 * T) == 0.0);
  CHECK(tg.value(0.99 * T) > 0.0);
  CHECK(g.value(1.01 * T) > 0.0);  // full-support family keeps its tails

  CHECK(cp.value(T) == 0.0);
  CHECK(cp.value(-T) == 0.0);
  // Peak value N = Gamma(delta+3/2) / (sqrt(pi) T Gamma(delta+1)).
  const double n_norm =
      std::tgamma(2.0 + 1.5) / (std::sqrt(M_PI) * T * std::tgamma(3.0));
  CHECK(cp.value(0.0) == doctest::Approx(n_norm).epsilon(1e-13));

  for (double t : {0.1 * T, 0.5 * T, 0.93 * T})
    for (const auto& s : {g, tg, cp}) CHECK(s.value(t) == s.value(-t));
}

TEST_CASE("constructor rejects invalid parameters") {
  CHECK_THROWS_AS(SwitchingSpec::gaussian(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(SwitchingSpec::gaussian(0.0), std::invalid_argument);
  CHECK_THROWS_AS(SwitchingSpec::compact_polynomial(-0.5, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(SwitchingSpec::compact_polynomial(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("gaussian fourier analytic values") {
  const double sigma = 0.002;
  auto g = SwitchingSpec::gaussian(sigma);
  CHECK(g.fourier(0.0) == 1.0);
  CHECK(g.fourier(1.0 / sigma) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
}

TEST_CASE("compact-family fourier matches reference values") {
  int n = 0;
  for (const auto& r : rows()) {
    ++n;
    auto spec = from_row(r);
    const double w = r.cols[2], want = r.cols[3];
    INFO(r.tag, " delta=", r.cols[0], " w=", w);
    const double direct = spec.fourier_direct(w);
    if (std::fabs(want) > 1e-8)
      CHECK(std::fabs(direct - want) / std::fabs(want) < 1e-11);
    else
      CHECK(std::fabs(direct - want) < 1e-14);
    CHECK(std::fabs(spec.fourier(w) - want) < 1e-12);  // cached path
  }
  CHECK(n >= 20);
}

TEST_CASE("fourier is exactly even and deterministic") {
  auto cp = SwitchingSpec::compact_polynomial(9.4, 0.01);
  auto cp2 = SwitchingSpec::compact_polynomial(9.4, 0.01);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> uw(0.0, 2e5);
  for (int i = 0; i < 500; ++i) {
    double w = uw(rng);
    CHECK(cp.fourier(w) == cp.fourier(-w));
    CHECK(cp.fourier(w) == cp2.fourier(w));
  }
}

TEST_CASE("fourier(0) equals the time integral of chi") {
  const double T = 0.01, sigma = T / 5.0;
  auto tg = SwitchingSpec::truncated_gaussian(sigma);
  auto cp = SwitchingSpec::compact_polynomial(9.4, T);
  for (const auto& s : {tg, cp}) {
    const double mass =
        GK::integrate([&](double t) { return s.value(t); }, -T, T, 8, 1e-13);
    CHECK(s.fourier(0.0) == doctest::Approx(mass).epsilon(1e-12));
  }
  // Truncated mass is below 1 and not renormalized.
  CHECK(tg.fourier(0.0) < 1.0);
  CHECK(tg.fourier(0.0) == doctest::Approx(0.99999942669685624).epsilon(1e-13));
  CHECK(SwitchingSpec::compact_polynomial(2.0, T).fourier(0.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("plancherel: (1/2pi) int chi~^2 dw = int chi^2 dt") {
  const double T = 0.01, sigma = T / 5.0;
  struct Case {
    SwitchingSpec spec;
    double time_side;
  };
  const double erf5 = 1.0 - harvest::erfc_real(5.0);
  const double lg = std::lgamma(9.4 + 1.5) - std::lgamma(9.4 + 1.0);
  const double cp_time = std::exp(2.0 * lg + std::lgamma(2 * 9.4 + 1.0) -
                                  std::lgamma(2 * 9.4 + 1.5)) /
                         (std::sqrt(M_PI) * T);
  const Case cases[] = {
      {SwitchingSpec::gaussian(sigma), 1.0 / (2.0 * std::sqrt(M_PI) * sigma)},
      {SwitchingSpec::truncated_gaussian(sigma), erf5 / (2.0 * std::sqrt(M_PI) * sigma)},
      {SwitchingSpec::compact_polynomial(9.4, T), cp_time},
  };
  for (const auto& c : cases) {
    auto f = [&](double w) { double v = c.spec.fourier_direct(w); return v * v; };
    const double freq_side = panel_integral(f, 400.0 / T, M_PI / T) / M_PI;
    CHECK(freq_side == doctest::Approx(c.time_side).epsilon(1e-8));
  }
}

TEST_CASE("fourier cache matches direct evaluation within budget") {
  auto cp = SwitchingSpec::compact_polynomial(9.4, 0.01);
  auto tg = SwitchingSpec::truncated_gaussian(0.002);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uu(0.0, 1535.0);
  for (int i = 0; i < 2000; ++i) {
    double w = uu(rng) / 0.01;
    CHECK(std::fabs(cp.fourier(w) - cp.fourier_direct(w)) < 1e-11);
    CHECK(std::fabs(tg.fourier(w) - tg.fourier_direct(w)) < 1e-11);
  }
}

TEST_CASE("delta = 9.4 is the close-to-Gaussian member of the CP family") {
  // Relative L2 distance of chi to the same-T Gaussian, evaluated in time.
  const double T = 0.01, sigma = T / 5.0;
  auto g = SwitchingSpec::gaussian(sigma);
  const double g_norm = 1.0 / (2.0 * std::sqrt(M_PI) * sigma);
  auto rel_l2 = [&](double delta) {
    auto cp = SwitchingSpec::compact_polynomial(delta, T);
    auto f = [&](double t) {
      double d = cp.value(t) - g.value(t);
      return d * d;
    };
    double dist = GK::integrate(f, -T, T, 8, 1e-13);
    dist += 2.0 * GK::integrate([&](double t) { double v = g.value(t); return v * v; },
                                T, 10.0 * T, 8, 1e-13);
    return dist / g_norm;
  };
  const double at94 = rel_l2(9.4);
  CHECK(at94 < 0.02);
  CHECK(at94 < rel_l2(2.0));
  CHECK(at94 < rel_l2(20.0));
}
