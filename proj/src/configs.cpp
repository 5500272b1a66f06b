#include "harvest/configs.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace harvest {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;
// Absorbs last-ulp rounding in caller-computed parameters (e.g. x = sqrt 2).
constexpr double kSlack = 1e-12;

Vec3 at(double px, double py = 0.0, double pz = 0.0) { return {px, py, pz}; }

// Positions in units of L plus the A-detector count.
struct Layout {
  std::vector<Vec3> pos;
  std::size_t n_a = 0;
};

void check_range(bool ok, const char* what) {
  if (!ok) throw std::domain_error(std::string("build: ") + what);
}

// Parameters that set a cross-subsystem distance directly must keep it at
// or above L; allow_timelike relaxes that to positivity.
bool causal_or_allowed(double v, bool allow_timelike) {
  return allow_timelike ? v > 0.0 : v >= 1.0 - kSlack;
}

Layout scaled_base(FamilyKind base, double l) {
  switch (base) {
    case FamilyKind::Pair:
      return {{at(0), at(l)}, 1};
    case FamilyKind::ABA:
      return {{at(0), at(2 * l), at(l)}, 2};
    case FamilyKind::DiagonalSquare:
      return {{at(0, 0), at(l, l), at(l, 0), at(0, l)}, 2};
    case FamilyKind::Asym31: {
      Layout out;
      out.n_a = 3;
      for (int k = 0; k < 3; ++k) {
        const double a = 2.0 * kPi * k / 3.0;
        out.pos.push_back(at(l * std::cos(a), l * std::sin(a)));
      }
      out.pos.push_back(at(0, 0));
      return out;
    }
    case FamilyKind::AABB: {
      const double x = 0.08 * l;
      return {{at(0), at(x), at(x + l), at(2 * x + l)}, 2};
    }
    default:
      throw std::invalid_argument(
          "build: ScaledOptimal base must be Pair, ABA, DiagonalSquare, "
          "Asym31, or AABB");
  }
}

Layout layout(const GeometryFamily& g, bool allow_timelike) {
  switch (g.kind) {
    case FamilyKind::Pair:
      check_range(causal_or_allowed(g.x, allow_timelike),
                  "Pair needs x/L >= 1 (or allow_timelike with x > 0)");
      return {{at(0), at(g.x)}, 1};
    case FamilyKind::TrianglePolar:
      check_range(g.theta >= 0.0 && g.theta <= kPi + kSlack,
                  "TrianglePolar needs theta in [0, pi]");
      check_range(causal_or_allowed(g.r, allow_timelike),
                  "TrianglePolar needs r/L >= 1 (or allow_timelike with r > 0)");
      return {{at(1),
               at(g.r * std::cos(g.theta), g.r * std::sin(g.theta)),
               at(0)},
              2};
    case FamilyKind::AAB:
      check_range(g.x >= 0.0, "AAB needs x/L >= 0");
      return {{at(1), at(1 + g.x), at(0)}, 2};
    case FamilyKind::ABA:
      return scaled_base(FamilyKind::ABA, 1.0);
    case FamilyKind::AABB:
      check_range(g.x >= 0.0, "AABB needs x/L >= 0");
      return {{at(0), at(g.x), at(g.x + 1), at(2 * g.x + 1)}, 2};
    case FamilyKind::ABBA:
      check_range(g.x >= 0.0, "ABBA needs x/L >= 0");
      return {{at(0), at(2 + g.x), at(1 + g.x), at(1)}, 2};
    case FamilyKind::ABAB:
      check_range(causal_or_allowed(g.x, allow_timelike),
                  "ABAB needs x/L >= 1 (or allow_timelike with x > 0)");
      return {{at(0), at(2 * g.x), at(g.x), at(3 * g.x)}, 2};
    case FamilyKind::Rectangle:
      check_range(g.x >= 0.0, "Rectangle needs x/L >= 0");
      return {{at(0, 0), at(0, g.x), at(1, g.x), at(1, 0)}, 2};
    case FamilyKind::SkewedSquare: {
      check_range(g.x >= 0.0 && g.x <= kSqrt2 + kSlack,
                  "SkewedSquare needs x/L in [0, sqrt 2]");
      const double h = std::sqrt(std::max(0.0, 1.0 - 0.25 * g.x * g.x));
      return {{at(0, -g.x / 2), at(0, g.x / 2), at(h, 0), at(-h, 0)}, 2};
    }
    case FamilyKind::ModTetrahedron: {
      check_range(g.x >= 0.0 && g.x <= kSqrt2 + kSlack,
                  "ModTetrahedron needs x/L in [0, sqrt 2]");
      const double d = std::sqrt(std::max(0.0, 1.0 - 0.5 * g.x * g.x));
      return {{at(0, -g.x / 2), at(0, g.x / 2), at(d, 0, -g.x / 2),
               at(d, 0, g.x / 2)},
              2};
    }
    case FamilyKind::DiagonalSquare:
      return scaled_base(FamilyKind::DiagonalSquare, 1.0);
    case FamilyKind::Asym31: {
      check_range(g.theta21 >= 0.0 && g.theta21 < 2 * kPi,
                  "Asym31 needs theta21 in [0, 2 pi)");
      check_range(g.theta32 >= 0.0 && g.theta32 < 2 * kPi - g.theta21,
                  "Asym31 needs theta32 in [0, 2 pi - theta21)");
      const double a2 = g.theta21;
      const double a3 = g.theta21 + g.theta32;
      return {{at(1), at(std::cos(a2), std::sin(a2)),
               at(std::cos(a3), std::sin(a3)), at(0)},
              3};
    }
    case FamilyKind::Chain: {
      if (g.n < 2 || g.n > 1000)
        throw std::invalid_argument("build: Chain needs 2 <= n <= 1000");
      Layout out;
      out.n_a = (g.n + 1) / 2;
      out.pos.reserve(g.n);
      // A detectors sit on even lattice sites, B on odd ones; storage is
      // A block first so that the subsystem split is positional.
      for (std::size_t j = 0; j < out.n_a; ++j) out.pos.push_back(at(2.0 * j));
      for (std::size_t i = 0; i < g.n - out.n_a; ++i)
        out.pos.push_back(at(2.0 * i + 1.0));
      return out;
    }
    case FamilyKind::ScaledOptimal:
      check_range(causal_or_allowed(g.l, allow_timelike),
                  "ScaledOptimal needs l/L >= 1 (or allow_timelike with l > 0)");
      return scaled_base(g.base, g.l);
  }
  throw std::invalid_argument("build: unknown family kind");
}

}  // namespace

DetectorSystem build(const GeometryFamily& family, const SystemParams& params) {
  if (!(params.t > 0.0)) throw std::invalid_argument("build: t must be positive");
  SwitchingSpec spec = params.switching
                           ? *params.switching
                           : SwitchingSpec::gaussian(params.t / 5.0);
  if (std::fabs(spec.t_half() - params.t) > 1e-9 * params.t)
    throw std::invalid_argument(
        "build: switching half-support must equal t (L = 2t would be "
        "inconsistent otherwise)");

  Layout lay = layout(family, params.allow_timelike);
  const double scale = 2.0 * params.t;  // L in absolute units
  for (auto& p : lay.pos)
    for (double& c : p) c *= scale;
  return {std::move(lay.pos), lay.n_a, params.lambda,
          params.omega_t / params.t, std::move(spec), params.allow_timelike};
}

namespace {

constexpr std::pair<FamilyKind, const char*> kFamilyNames[] = {
    {FamilyKind::Pair, "pair"},
    {FamilyKind::TrianglePolar, "triangle-polar"},
    {FamilyKind::AAB, "aab"},
    {FamilyKind::ABA, "aba"},
    {FamilyKind::AABB, "aabb"},
    {FamilyKind::ABBA, "abba"},
    {FamilyKind::ABAB, "abab"},
    {FamilyKind::Rectangle, "rectangle"},
    {FamilyKind::SkewedSquare, "skewed-square"},
    {FamilyKind::ModTetrahedron, "mod-tetrahedron"},
    {FamilyKind::DiagonalSquare, "diagonal-square"},
    {FamilyKind::Asym31, "asym31"},
    {FamilyKind::Chain, "chain"},
    {FamilyKind::ScaledOptimal, "scaled-optimal"},
};

}  // namespace

std::string family_name(FamilyKind kind) {
  for (const auto& [k, name] : kFamilyNames)
    if (k == kind) return name;
  return "unknown";
}

std::optional<FamilyKind> family_from_name(std::string_view name) {
  for (const auto& [k, n] : kFamilyNames)
    if (name == n) return k;
  return std::nullopt;
}

std::vector<ChainEntry> chain_rho1_structure(std::size_t n) {
  if (n < 2) throw std::invalid_argument("chain_rho1_structure: need n >= 2");
  const std::size_t n_a = (n + 1) / 2;
  const std::size_t n_b = n / 2;
  std::vector<ChainEntry> map(n * n);
  // 1-based (i, j) over the block basis: rows 1..n_b are B (descending
  // detector index), rows n_b+1..n are A.
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j) {
      ChainEntry& e = map[(i - 1) * n + (j - 1)];
      if (i == j) {
        e = {ChainEntry::Kind::P, 0, false};
        continue;
      }
      const bool row_b = i <= n_b;
      const bool col_b = j <= n_b;
      const int gap = static_cast<int>(i > j ? i - j : j - i);
      if (row_b == col_b) {
        // Toeplitz C blocks; the conjugate sits in the B lower / A upper
        // triangle, mirroring the pair assembly.
        e = {ChainEntry::Kind::C, 2 * gap, row_b ? i > j : i < j};
      } else {
        // Staircase X block: band index k = max{a - b + 1, b - a} for A
        // block-row a against B block-column b.
        const std::size_t ai = row_b ? j : i;
        const std::size_t bj = row_b ? i : j;
        const int a = static_cast<int>(ai) - static_cast<int>(n_a);
        const int k = std::max(a - static_cast<int>(bj) + 1,
                               static_cast<int>(bj) - a);
        e = {ChainEntry::Kind::X, 2 * k - 1, row_b};
      }
    }
  return map;
}

}  // namespace harvest
