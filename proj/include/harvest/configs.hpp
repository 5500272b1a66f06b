// Named detector arrangements: builders that map dimensionless family
// parameters (lengths in units of the minimal causal separation L = 2T) to
// concrete DetectorSystem instances, plus the Toeplitz structure map of the
// alternating chain's one-excitation block.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "harvest/negativity.hpp"

namespace harvest {

// Every family except ModTetrahedron is planar.  The spatial parameter x,
// the triangle radius r, and the subsystem separation l are all in units
// of L; angles are radians.
enum class FamilyKind {
  Pair,            // A at 0, B at x on a line (x >= 1)
  TrianglePolar,   // A at (1,0) and r(cos t, sin t), B at the origin
  AAB,             // A at 1 and 1 + x, B at the origin (x >= 0)
  ABA,             // A at 0 and 2, B at 1
  AABB,            // line 0, x | x+1, 2x+1 (x >= 0)
  ABBA,            // line 0, 2+x | 1, 1+x (x >= 0)
  ABAB,            // line 0, 2x | x, 3x (x >= 1)
  Rectangle,       // A side (0,0)-(0,x), B side (1,0)-(1,x) (x >= 0)
  SkewedSquare,    // side-1 rhombus, subsystems on the diagonals (0 <= x <= sqrt 2)
  ModTetrahedron,  // 3D: orthogonal A and B edges of length x, cross pairs at 1
  DiagonalSquare,  // side-1 square, subsystems on the diagonals (no parameter)
  Asym31,          // B at the center, three A detectors on the unit circle
  Chain,           // n detectors at 0, 1, .., n-1 alternating A, B, A, ...
  ScaledOptimal,   // an optimal-set geometry rescaled to subsystem distance l
};

// Family selector plus the union of per-family parameters; builders read
// only the fields their kind uses.
struct GeometryFamily {
  FamilyKind kind = FamilyKind::Pair;
  double x = 1.0;        // spatial parameter x/L
  double r = 1.0;        // TrianglePolar radius r/L
  double theta = 0.0;    // TrianglePolar polar angle of detector 2
  double theta21 = 0.0;  // Asym31 center angle between A detectors 1 and 2
  double theta32 = 0.0;  // Asym31 center angle between A detectors 2 and 3
  double l = 1.0;        // ScaledOptimal subsystem separation l/L
  std::size_t n = 2;     // Chain detector count
  // ScaledOptimal base: one of Pair, ABA, DiagonalSquare, Asym31
  // (equilateral), AABB (with x/l fixed at 0.08).
  FamilyKind base = FamilyKind::Pair;
};

// Physical inputs shared by every family.  Unset switching defaults to the
// Gaussian with sigma = t/5, so that L = 2t is the minimal causal
// separation for whichever switching is active; an explicitly provided
// switching must have half-support t.
struct SystemParams {
  double omega_t = 0.0;  // detector gap in units of 1/T
  double t = 0.01;       // interaction timescale T (L = 2T, sigma = T/5)
  double lambda = 1.0;
  std::optional<SwitchingSpec> switching;
  bool allow_timelike = false;
};

// Converts the dimensionless layout into absolute positions and couplings.
// Throws std::domain_error for out-of-range family parameters (cross
// distances below L are permitted only under allow_timelike; shape
// constraints such as SkewedSquare x <= sqrt 2 are unconditional) and
// std::invalid_argument for structural errors (chain size, non-optimal
// ScaledOptimal base, non-positive t, mismatched switching support).
DetectorSystem build(const GeometryFamily& family, const SystemParams& params);

// One entry of the chain structure map: which element populates
// rho~_1(i, j).  The referenced element lives at distance multiple * L;
// P has multiple 0, C entries even multiples 2|i-j|, X entries odd
// multiples 2k - 1.
struct ChainEntry {
  enum class Kind { P, C, X };
  Kind kind = Kind::P;
  int multiple = 0;
  bool conjugated = false;
};

// Row-major n x n structure map of the alternating-chain rho~_1 in the same
// basis as assemble_rho1_pt (descending detector index, B block first).
// C_BB and C_AA are Toeplitz in 2|i-j|; X_BA is a banded staircase over odd
// multiples with band index k(i, j) = max{(i - n_a) - j + 1, j - (i - n_a)}
// in 1-based block coordinates.  Throws std::invalid_argument for n < 2.
std::vector<ChainEntry> chain_rho1_structure(std::size_t n);

// Lower-case hyphenated family identifier used by config files, CSV output,
// and CLI flags (e.g. "skewed-square").
std::string family_name(FamilyKind kind);

// Inverse of family_name; nullopt for an unknown identifier.
std::optional<FamilyKind> family_from_name(std::string_view name);

}  // namespace harvest
