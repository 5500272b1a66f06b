// Partially transposed one-excitation block rho~_1 for N detectors split
// into subsystems A and B, and its leading-order negativity: generic
// Hermitian eigensolve plus closed analytic forms for 2, 3, and the
// symmetric 4-detector configurations.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <vector>

#include "harvest/elements.hpp"

namespace harvest {

using Vec3 = std::array<double, 3>;

// Identical pointlike detectors at fixed positions sharing gap, coupling,
// and switching.  Detector k sits at positions[k-1]; detectors 1..n_a form
// subsystem A, the rest B (Hilbert-space ordering).  L = 2T is the minimal
// causal separation: cross-subsystem pairs closer than that raise a
// causality error unless allow_timelike is set, which makes the
// Gaussian-tail approximation explicit instead of silent (compact-support
// X at x < 2T stays uncomputable and still throws).
struct DetectorSystem {
  std::vector<Vec3> positions;
  std::size_t n_a = 0;
  double lambda = 1.0;
  double omega = 0.0;
  SwitchingSpec spec;
  bool allow_timelike = false;
};

// Hermitian N x N block [C_BB^*  X_BA^dagger; X_BA  C_AA] in the basis of
// one-excitation states ordered by descending detector index (B first).
struct Rho1PT {
  Eigen::MatrixXcd matrix;
};

enum class NegativityMethod { Generic, TwoDet, ThreeDetTrig, FourDetFamily };

struct NegativityResult {
  double value = 0.0;                 // sum over |negative eigenvalues|
  std::vector<double> negative_eigs;  // ascending
  NegativityMethod method = NegativityMethod::Generic;
};

// Builds rho~_1 from pair elements and the geometry's pairwise distances.
// Throws std::domain_error on a causality violation (see DetectorSystem),
// std::invalid_argument on an empty subsystem or N < 2; element-evaluation
// errors propagate.
Rho1PT assemble_rho1_pt(const DetectorSystem& sys);

// Dense Hermitian eigensolve; an eigenvalue counts as negative only below
// -1e-14 * ||matrix|| so roundoff cannot fabricate negativity.
NegativityResult negativity_leading(const Rho1PT& block);

// Two-detector closed form max{0, |X+| - P} (Gaussian switching, x >= L).
double negativity_two_closed(double x, double omega, double lambda,
                             const SwitchingSpec& spec);

// Three-detector block [[P, Xr*, XL*], [Xr, P, Cx*], [XL, Cx, P]] via the
// trigonometric solution of the depressed cubic: eigenvalues
// P + rho cos(phi + 2 pi (k-1)/3) with rho = sqrt(4/3) S, phi =
// arccos(3 sqrt(3) R / S^3) / 3, S^2 = |Cx|^2 + |Xr|^2 + |XL|^2,
// R = Re(Cx Xr XL*).  S = 0 degenerates to zero negativity.
NegativityResult negativity_three_trig(double p, cplx c_x, cplx x_r, cplx x_l);

// Symmetric four-detector configurations with a 2+2 bipartition, reduced to
// one spatial parameter x (absolute length; L = 2T fixed).
enum class FourFamily { AABB, ABBA, ABAB, Rectangle, SkewedSquare, ModTetrahedron };

// Closed-form eigenvalues of the family's 4 x 4 block with X -> X+ (all
// entries real for Gaussian switching).  Ranges: AABB/ABBA/Rectangle x >= 0,
// ABAB x >= L, SkewedSquare/ModTetrahedron 0 <= x <= sqrt(2) L; domain_error
// outside, invalid_argument for non-Gaussian switching.
double negativity_four_family(FourFamily family, double x, double omega,
                              double lambda, const SwitchingSpec& spec);

}  // namespace harvest
