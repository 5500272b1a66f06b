#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "harvest/oracle.hpp"

using harvest::additivity_check;
using harvest::assemble_full;
using harvest::assemble_rho1_pt;
using harvest::basis_position;
using harvest::cplx;
using harvest::DetectorSystem;
using harvest::FullState;
using harvest::gaussian_elements;
using harvest::negativity_full;
using harvest::negativity_leading;
using harvest::p_element;
using harvest::partial_transpose_b;
using harvest::SwitchingSpec;
using harvest::Vec3;

namespace {

constexpr double kT = 0.01;
constexpr double kSigma = kT / 5.0;
constexpr double kL = 2.0 * kT;

SwitchingSpec gauss() { return SwitchingSpec::gaussian(kSigma); }

double rel(double got, double want) {
  if (want == 0.0) return std::fabs(got);
  return std::fabs(got - want) / std::fabs(want);
}

// Coupling that puts the single-detector excitation probability at p_target,
// so that full-state spectra are resolvable above eigensolver noise.
double lambda_for(double p_target, double omega) {
  return std::sqrt(p_target / p_element(1.0, omega, gauss()));
}

DetectorSystem make_sys(std::vector<Vec3> pos, std::size_t na, double omega_t,
                        double lambda = 1.0, bool allow_timelike = false) {
  return {std::move(pos), na, lambda, omega_t / kT, gauss(), allow_timelike};
}

std::vector<Vec3> aba_positions() {
  return {{0, 0, 0}, {2 * kL, 0, 0}, {kL, 0, 0}};
}

// Largest matrix entry outside the vacuum diagonal: the element scale of the
// perturbative blocks.
double max_element(const FullState& st) {
  Eigen::MatrixXcd m = st.matrix;
  const auto vac = basis_position(0u, st.n);
  m(vac, vac) = 0.0;
  return m.cwiseAbs().maxCoeff();
}

std::vector<Vec3> random_geometry(std::mt19937& rng, std::size_t n,
                                  double box, double min_sep) {
  std::uniform_real_distribution<double> u(0.0, box);
  std::vector<Vec3> pos;
  while (pos.size() < n) {
    const Vec3 q{u(rng), u(rng), u(rng)};
    bool ok = true;
    for (const auto& r : pos)
      ok = ok && std::hypot(q[0] - r[0], q[1] - r[1], q[2] - r[2]) >= min_sep;
    if (ok)
      pos.push_back(q);
    else
      pos.clear();  // restart draws to keep the distribution simple
  }
  return pos;
}

}  // namespace

TEST_CASE("basis layout: sectors and positions") {
  // n = 3: one-excitation masks {1, 2, 4}, vacuum, two-excitation {3, 5, 6},
  // then {7}; ascending mask inside each sector.
  const unsigned order[] = {1, 2, 4, 0, 3, 5, 6, 7};
  for (std::size_t k = 0; k < 8; ++k) CHECK(basis_position(order[k], 3) == k);
  // The vacuum sits right after the N one-excitation states for any N.
  for (std::size_t n = 2; n <= 8; ++n) CHECK(basis_position(0u, n) == n);
  // Detector d occupies row N - d, matching the block convention.
  for (std::size_t n = 2; n <= 6; ++n)
    for (std::size_t d = 1; d <= n; ++d)
      CHECK(basis_position(1u << (n - d), n) == n - d);
  CHECK_THROWS_AS(basis_position(4u, 2), std::invalid_argument);
}

TEST_CASE("two-detector full state entrywise") {
  const double omega = 15.0 / kT;
  const auto e = gaussian_elements({1.0, omega, gauss(), kL});
  const double p = p_element(1.0, omega, gauss());
  const auto st = assemble_full(make_sys({{0, 0, 0}, {kL, 0, 0}}, 1, 15.0));
  REQUIRE(st.matrix.rows() == 4);
  // Layout: |det2>, |det1>, vacuum, |both>.
  Eigen::MatrixXcd want = Eigen::MatrixXcd::Zero(4, 4);
  want(0, 0) = want(1, 1) = p;
  want(2, 2) = 1.0 - 2.0 * p;
  want(1, 0) = e.C();
  want(0, 1) = std::conj(e.C());
  want(3, 2) = e.X();
  want(2, 3) = std::conj(e.X());
  CHECK((st.matrix - want).cwiseAbs().maxCoeff() == 0.0);

  // Partial transpose swaps C and X across the subsystem split.
  const auto pt = partial_transpose_b(st);
  Eigen::MatrixXcd want_pt = Eigen::MatrixXcd::Zero(4, 4);
  want_pt(0, 0) = want_pt(1, 1) = p;
  want_pt(2, 2) = 1.0 - 2.0 * p;
  want_pt(1, 0) = e.X();
  want_pt(0, 1) = std::conj(e.X());
  want_pt(3, 2) = e.C();
  want_pt(2, 3) = std::conj(e.C());
  CHECK((pt - want_pt).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("full state: trace, Hermiticity, and support pattern") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> uo(6.0, 26.0);
  for (int trial = 0; trial < 5; ++trial) {
    const auto pos = random_geometry(rng, 5, 8.0 * kL, 1.2 * kL);
    const auto st =
        assemble_full(make_sys(pos, 1 + trial % 4, uo(rng), 1.0, true));
    const std::size_t dim = 32;
    CHECK(std::fabs(st.matrix.trace().real() - 1.0) < 1e-14);
    CHECK(std::fabs(st.matrix.trace().imag()) == 0.0);
    CHECK((st.matrix - st.matrix.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    // Support: one-excitation block, vacuum diagonal, and the two-excitation
    // column against the vacuum; everything else must be exactly zero.
    const auto vac = basis_position(0u, 5);
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c) {
        const bool one_exc = r < 5 && c < 5;
        const bool vac_diag = r == vac && c == vac;
        const bool x_col = (r > vac && c == vac) || (c > vac && r == vac);
        if (!(one_exc || vac_diag || x_col))
          CHECK(st.matrix(r, c) == cplx(0.0, 0.0));
      }
  }
}

TEST_CASE("partial transpose is an exact involution") {
  std::mt19937 rng(13);
  const auto pos = random_geometry(rng, 6, 9.0 * kL, 1.2 * kL);
  const auto st = assemble_full(make_sys(pos, 3, 14.5, 1.0, true));
  FullState once{partial_transpose_b(st), st.n, st.n_a};
  const auto twice = partial_transpose_b(once);
  CHECK((twice - st.matrix).cwiseAbs().maxCoeff() == 0.0);
  // Diagonal states are PT-invariant.
  FullState diag{st.matrix.diagonal().asDiagonal(), st.n, st.n_a};
  CHECK((partial_transpose_b(diag) - diag.matrix).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("transposed one-excitation block equals the linear-size assembly") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 4; ++trial) {
    const auto pos = random_geometry(rng, 6, 9.0 * kL, 1.3 * kL);
    const auto sys = make_sys(pos, 2 + trial, 12.75, 1.0, true);
    const auto pt = partial_transpose_b(assemble_full(sys));
    const auto block = assemble_rho1_pt(sys).matrix;
    CHECK((pt.topLeftCorner(6, 6) - block).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("transposed two-excitation sector: vacuum column and spectrum") {
  // Boosted coupling so the quadratically small branch is resolvable.
  const double omega_t = 21.31;
  const auto sys =
      make_sys(aba_positions(), 2, omega_t, lambda_for(0.05, omega_t / kT));
  const auto st = assemble_full(sys);
  const auto pt = partial_transpose_b(st);

  // y entries: cross pairs carry C, same-subsystem pairs carry X (conjugated
  // in the all-B case, which is absent here since B is a single detector).
  const double lam = sys.lambda;
  const auto el = [&](double x) {
    return gaussian_elements({lam, omega_t / kT, gauss(), x});
  };
  const auto vac = basis_position(0u, 3);
  const auto pos_12 = basis_position((1u << 2) | (1u << 1), 3);
  const auto pos_13 = basis_position((1u << 2) | (1u << 0), 3);
  const auto pos_23 = basis_position((1u << 1) | (1u << 0), 3);
  CHECK(std::abs(pt(pos_12, vac) - el(2 * kL).X()) == 0.0);
  CHECK(std::abs(pt(pos_13, vac) - el(kL).C()) == 0.0);
  CHECK(std::abs(pt(pos_23, vac) - el(kL).C()) == 0.0);

  // Sector spectrum: zeros plus (rho00 +- sqrt(rho00^2 + 4 y^dag y)) / 2.
  const auto sector = pt.bottomRightCorner(5, 5);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sector);
  REQUIRE(es.info() == Eigen::Success);
  const double rho00 = 1.0 - 3.0 * p_element(lam, omega_t / kT, gauss());
  const double yy = std::norm(pt(pos_12, vac)) + std::norm(pt(pos_13, vac)) +
                    std::norm(pt(pos_23, vac));
  const double root = std::sqrt(rho00 * rho00 + 4.0 * yy);
  std::vector<double> want = {0.5 * (rho00 - root), 0.0, 0.0,
                              0.0, 0.5 * (rho00 + root)};
  for (int i = 0; i < 5; ++i)
    CHECK(std::fabs(es.eigenvalues()(i) - want[i]) < 1e-14 * root);
}

TEST_CASE("full negativity exceeds the block value by the quadratic branch") {
  const double omega_t = 21.31;
  for (double p_target : {0.05, 0.02}) {
    const auto sys = make_sys(aba_positions(), 2, omega_t,
                              lambda_for(p_target, omega_t / kT));
    const auto st = assemble_full(sys);
    const double full = negativity_full(partial_transpose_b(st));
    const double sub = negativity_leading(assemble_rho1_pt(sys)).value;
    const double rho00 = st.matrix(basis_position(0u, 3), basis_position(0u, 3))
                             .real();
    CHECK(full > sub);
    CHECK(full - sub <= 10.0 * max_element(st) * max_element(st) / rho00);
  }
}

TEST_CASE("full-vs-block difference scales quadratically in the elements") {
  const double omega_t = 21.31;
  const double lam0 = lambda_for(0.02, omega_t / kT);
  std::vector<double> ls, ld;
  for (double s : {1.0, 0.5, 0.25}) {
    const auto sys =
        make_sys(aba_positions(), 2, omega_t, lam0 * std::sqrt(s));
    const double full = negativity_full(partial_transpose_b(assemble_full(sys)));
    const double sub = negativity_leading(assemble_rho1_pt(sys)).value;
    REQUIRE(full - sub > 0.0);
    ls.push_back(std::log(s));
    ld.push_back(std::log(full - sub));
  }
  double ms = 0, md = 0;
  for (int i = 0; i < 3; ++i) ms += ls[i] / 3, md += ld[i] / 3;
  double num = 0, den = 0;
  for (int i = 0; i < 3; ++i)
    num += (ls[i] - ms) * (ld[i] - md), den += (ls[i] - ms) * (ls[i] - ms);
  const double exponent = num / den;
  CHECK(exponent > 1.9);
  CHECK(exponent < 2.1);
}

TEST_CASE("submatrix equivalence over random systems") {
  std::mt19937 rng(20260823);
  std::uniform_real_distribution<double> uo(8.0, 26.0);
  std::uniform_int_distribution<std::size_t> un(2, 8);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = un(rng);
    std::uniform_int_distribution<std::size_t> ua(1, n - 1);
    const auto pos = random_geometry(rng, n, 12.0 * kL, 2.5 * kL);
    const double omega_t = uo(rng);
    const auto sys =
        make_sys(pos, ua(rng), omega_t, lambda_for(0.3 / double(n),
                                                   omega_t / kT));
    const auto st = assemble_full(sys);
    const double full = negativity_full(partial_transpose_b(st));
    const double sub = negativity_leading(assemble_rho1_pt(sys)).value;
    const double rho00 = st.matrix(basis_position(0u, n), basis_position(0u, n))
                             .real();
    CHECK(std::fabs(full - sub) <=
          10.0 * max_element(st) * max_element(st) / rho00);
  }
}

TEST_CASE("additivity on explicit tensor products") {
  // Two pairs with sizable negativity each.
  const double lam = lambda_for(0.1, 35.0 / kT);
  const DetectorSystem pair1 = make_sys({{0, 0, 0}, {kL, 0, 0}}, 1, 35.0, lam);
  const DetectorSystem pair2 =
      make_sys({{0, 0, 0}, {1.3 * kL, 0, 0}}, 1, 35.0, lam);
  const auto rep = additivity_check({pair1, pair2});
  REQUIRE(rep.parts.size() == 2);
  CHECK(rep.parts[0] > 1e-3);
  CHECK(rel(rep.product_value, rep.exact_identity) < 1e-12);
  // Leading-order sum: off by the cross term only.
  CHECK(rep.product_value > rep.sum_parts);
  CHECK(std::fabs(rep.product_value - rep.sum_parts) <
        3.0 * rep.sum_parts * rep.sum_parts);

  // Pair x triple.
  const auto sys3 =
      make_sys(aba_positions(), 2, 21.31, lambda_for(0.1, 21.31 / kT));
  const auto rep2 = additivity_check({pair1, sys3});
  CHECK(rel(rep2.product_value, rep2.exact_identity) < 1e-12);

  // A zero-negativity factor contributes nothing.  Just below the
  // harvesting crossover at unboosted coupling the elements are ~1e-11, so
  // even the quadratically small branch sits below the negativity threshold.
  const DetectorSystem inert = make_sys({{0, 0, 0}, {kL, 0, 0}}, 1, 23.0);
  const auto rep3 = additivity_check({inert, pair1});
  CHECK(rep3.parts[0] == 0.0);
  CHECK(rel(rep3.product_value, rep3.parts[1]) < 1e-12);
}

TEST_CASE("oracle guards") {
  std::vector<Vec3> many(15, Vec3{0, 0, 0});
  for (std::size_t i = 0; i < many.size(); ++i) many[i][0] = double(i) * kL;
  CHECK_THROWS_AS(assemble_full(make_sys(many, 7, 12.0)),
                  std::invalid_argument);
  std::vector<Vec3> thirteen(many.begin(), many.begin() + 13);
  CHECK_THROWS_AS(
      additivity_check({make_sys(thirteen, 6, 12.0),
                        make_sys({{0, 0, 0}, {kL, 0, 0}}, 1, 12.0)}),
      std::invalid_argument);
  CHECK_THROWS_AS(additivity_check({}), std::invalid_argument);
}
