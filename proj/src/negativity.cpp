#include "harvest/negativity.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <map>
#include <stdexcept>
#include <string>

#include "detail.hpp"

namespace harvest {

namespace detail {

namespace {

double dist(const Vec3& a, const Vec3& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}

}  // namespace

PairTable build_pair_table(const DetectorSystem& sys) {
  const std::size_t n = sys.positions.size();
  if (n < 2 || sys.n_a == 0 || sys.n_a >= n)
    throw std::invalid_argument(
        "build_pair_table: need N >= 2 with both subsystems non-empty");
  const double l_min = 2.0 * sys.spec.t_half();
  const bool gaussian = sys.spec.family() == SwitchingFamily::Gaussian;

  PairTable table;
  table.n = n;
  table.p = p_element(sys.lambda, sys.omega, sys.spec);
  table.pairs.reserve(n * (n - 1) / 2);
  // One elements evaluation per distinct distance; a chain of N detectors
  // has O(N) distances but O(N^2) pairs.
  std::map<double, PairElements> cache;
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const double x = dist(sys.positions[i], sys.positions[j]);
      // Detectors are 1-based i+1 / j+1; the first n_a belong to A.
      const bool cross = (i + 1 <= sys.n_a) != (j + 1 <= sys.n_a);
      // The 1e-9 slack absorbs rounding in geometry distances that are
      // exactly L by construction.
      if (cross && x < l_min * (1.0 - 1e-9) && !sys.allow_timelike)
        throw std::domain_error(
            "build_pair_table: cross-subsystem pair at x = " +
            std::to_string(x) + " < L = " + std::to_string(l_min) +
            " (set allow_timelike to override)");
      auto it = cache.find(x);
      if (it == cache.end()) {
        if (x == 0.0) {
          // Coincident same-subsystem detectors are a legitimate geometry
          // limit (e.g. a two-against-two family closing up): C(x -> 0) = P
          // exactly.  Xm stays unset, so a coincident cross pair (possible
          // only under allow_timelike) still fails loudly in X().
          PairElements merged;
          merged.P = table.p;
          merged.Cp = cplx(table.p, 0.0);
          it = cache.emplace(x, merged).first;
        } else {
          ElementParams p{sys.lambda, sys.omega, sys.spec, x};
          it = cache
                   .emplace(x, gaussian ? gaussian_elements(p)
                                        : quadrature_elements(p))
                   .first;
        }
      }
      table.pairs.push_back(it->second);
    }
  return table;
}

}  // namespace detail

namespace {

double sum_negative_terms(std::initializer_list<double> eigs,
                          std::vector<double>* negs) {
  double value = 0.0;
  double amax = 0.0;
  for (double e : eigs) amax = std::max(amax, std::fabs(e));
  for (double e : eigs)
    if (e < -1e-14 * amax) {
      value -= e;
      if (negs) negs->push_back(e);
    }
  if (negs) std::sort(negs->begin(), negs->end());
  return value;
}

void require_gaussian(const SwitchingSpec& spec, const char* what) {
  if (spec.family() != SwitchingFamily::Gaussian)
    throw std::invalid_argument(std::string(what) +
                                ": closed form requires Gaussian switching");
}

}  // namespace

Rho1PT assemble_rho1_pt(const DetectorSystem& sys) {
  const auto table = detail::build_pair_table(sys);
  const std::size_t n = table.n;

  // Row of detector k (1-based) in the descending-index basis.
  const auto row = [n](std::size_t k) { return n - k; };

  Eigen::MatrixXcd m(n, n);
  for (std::size_t k = 1; k <= n; ++k) m(row(k), row(k)) = table.p;
  for (std::size_t i = 2; i <= n; ++i)
    for (std::size_t j = 1; j < i; ++j) {
      const auto& e = table.at(i - 1, j - 1);
      const bool i_in_a = i <= sys.n_a, j_in_a = j <= sys.n_a;
      if (i_in_a == j_in_a) {
        // B block carries the conjugated C matrix, A block the plain one.
        m(row(i), row(j)) = i_in_a ? std::conj(e.C()) : e.C();
        m(row(j), row(i)) = std::conj(m(row(i), row(j)));
      } else {
        const cplx xe = e.X();
        m(row(i), row(j)) = std::conj(xe);  // i in B: upper triangle gets X*
        m(row(j), row(i)) = xe;
      }
    }
  return {std::move(m)};
}

NegativityResult negativity_leading(const Rho1PT& block) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block.matrix);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("negativity_leading: eigensolver failed");
  const auto& ev = es.eigenvalues();
  const double norm =
      std::max(std::fabs(ev(0)), std::fabs(ev(ev.size() - 1)));
  NegativityResult out;
  out.method = NegativityMethod::Generic;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) < -1e-14 * norm) {
      out.value -= ev(i);
      out.negative_eigs.push_back(ev(i));
    }
  return out;
}

double negativity_two_closed(double x, double omega, double lambda,
                             const SwitchingSpec& spec) {
  require_gaussian(spec, "negativity_two_closed");
  const double l_min = 2.0 * spec.t_half();
  if (x < l_min * (1.0 - 1e-9))
    throw std::domain_error("negativity_two_closed: requires x >= L = 2T");
  const auto e = gaussian_elements({lambda, omega, spec, x});
  return std::max(0.0, std::abs(e.Xp) - e.P);
}

NegativityResult negativity_three_trig(double p, cplx c_x, cplx x_r, cplx x_l) {
  NegativityResult out;
  out.method = NegativityMethod::ThreeDetTrig;
  const double s2 = std::norm(c_x) + std::norm(x_r) + std::norm(x_l);
  if (s2 == 0.0) return out;  // diagonal block: eigenvalues all P >= 0
  const double s = std::sqrt(s2);
  const double r = (c_x * x_r * std::conj(x_l)).real();
  double arg = 3.0 * std::sqrt(3.0) * r / (s2 * s);
  if (std::fabs(arg) > 1.0 + 1e-12)
    throw std::invalid_argument(
        "negativity_three_trig: |3 sqrt(3) R / S^3| > 1; inputs are not the "
        "off-diagonals of a Hermitian block");
  arg = std::clamp(arg, -1.0, 1.0);
  const double rho = std::sqrt(4.0 / 3.0) * s;
  const double phi = std::acos(arg) / 3.0;
  const double a1 = p + rho * std::cos(phi);
  const double a2 = p + rho * std::cos(phi + 2.0 * M_PI / 3.0);
  const double a3 = p + rho * std::cos(phi + 4.0 * M_PI / 3.0);
  out.value = sum_negative_terms({a1, a2, a3}, &out.negative_eigs);
  return out;
}

double negativity_four_family(FourFamily family, double x, double omega,
                              double lambda, const SwitchingSpec& spec) {
  require_gaussian(spec, "negativity_four_family");
  const double l = 2.0 * spec.t_half();
  if (x < 0.0) throw std::domain_error("negativity_four_family: x < 0");
  if (family == FourFamily::ABAB && x < l * (1.0 - 1e-9))
    throw std::domain_error("negativity_four_family: ABAB requires x >= L");
  if ((family == FourFamily::SkewedSquare ||
       family == FourFamily::ModTetrahedron) &&
      x > std::sqrt(2.0) * l * (1.0 + 1e-9))
    throw std::domain_error(
        "negativity_four_family: this family requires x <= sqrt(2) L");

  const double p = p_element(lambda, omega, spec);
  const auto ce = [&](double d) {
    return d == 0.0 ? p
                    : gaussian_elements({lambda, omega, spec, d}).C().real();
  };
  const auto xe = [&](double d) {
    return gaussian_elements({lambda, omega, spec, d}).Xp.real();
  };

  // Eigenvalues come from the block's symmetry-adapted 2 x 2 reductions; the
  // negativity sums max{0, -alpha} over the four (or two) branches.
  double total = 0.0;
  const auto add = [&](double minus_alpha) {
    total += std::max(0.0, minus_alpha);
  };
  switch (family) {
    case FourFamily::AABB: {
      const double cx = ce(x), xl = xe(l), xlx = xe(l + x), xl2 = xe(l + 2.0 * x);
      for (double s : {1.0, -1.0})
        for (double r : {1.0, -1.0})
          add(-p + 0.5 * s * (xl + xl2) +
              0.5 * r * std::hypot(2.0 * (cx - s * xlx), xl2 - xl));
      break;
    }
    case FourFamily::ABBA: {
      const double cx = ce(x), c2 = ce(2.0 * l + x), xl = xe(l), xlx = xe(l + x);
      for (double s : {1.0, -1.0})
        for (double r : {1.0, -1.0})
          add(-p + 0.5 * s * (cx + c2) +
              0.5 * r * std::hypot(2.0 * (xl - s * xlx), cx - c2));
      break;
    }
    case FourFamily::ABAB: {
      const double xx = xe(x), x3 = xe(3.0 * x), c2 = ce(2.0 * x);
      for (double s : {1.0, -1.0})
        for (double r : {1.0, -1.0})
          add(-p + 0.5 * s * (xx + x3) +
              0.5 * r * std::hypot(2.0 * (c2 - s * xx), xx - x3));
      break;
    }
    case FourFamily::Rectangle: {
      const double cx = ce(x), xl = xe(l), xd = xe(std::hypot(l, x));
      for (double s : {1.0, -1.0})
        for (double r : {1.0, -1.0}) add(-p + s * cx + r * xl - s * r * xd);
      break;
    }
    case FourFamily::SkewedSquare: {
      const double cx = ce(x), cc = ce(std::sqrt(4.0 * l * l - x * x)),
                   xl = xe(l);
      for (double r : {1.0, -1.0})
        add(-p - 0.5 * (cx + cc) + 0.5 * r * std::hypot(4.0 * xl, cx - cc));
      break;
    }
    case FourFamily::ModTetrahedron: {
      const double cx = ce(x), xl = xe(l);
      for (double r : {1.0, -1.0}) add(-p - cx + 2.0 * r * xl);
      break;
    }
  }
  return total;
}

}  // namespace harvest
