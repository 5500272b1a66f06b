// Brute-force validator for the linear-size negativity reduction: builds the
// full 2^N x 2^N leading-order detector state (one-excitation block, vacuum
// weight, two-excitation column), applies the exact basis-level partial
// transpose over subsystem B, and computes the negativity of the whole
// matrix.  Also checks the exact product identity behind leading-order
// additivity on explicit tensor products.
#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "harvest/negativity.hpp"

namespace harvest {

// Basis layout shared by assembly and transposition.  A basis state is the
// bit mask of excited detectors, detector 1 being the most significant of
// the N bits; subsystem A holds detectors 1..n_a (the high bits).  States
// are ordered one-excitation sector first, then the vacuum, then the
// k-excitation sectors for k = 2..N, ascending mask value inside every
// sector.  The first N positions therefore coincide row-for-row with the
// N x N block convention used by assemble_rho1_pt.
std::size_t basis_position(unsigned mask, std::size_t n);

struct FullState {
  Eigen::MatrixXcd matrix;  // 2^n x 2^n, Hermitian, trace 1
  std::size_t n = 0;
  std::size_t n_a = 0;
};

// Populates P on the one-excitation diagonal, C on all one-excitation
// off-diagonals, the vacuum weight 1 - sum P, and X between each
// two-excitation state and the vacuum.  Requires N <= 14 (memory guard) and
// X elements for every pair, so a compact-support switching with any
// timelike pair is rejected by element evaluation.
FullState assemble_full(const DetectorSystem& sys);

// Exact partial transpose over the B detectors at the basis-bit level;
// involutive, Hermiticity-preserving.
Eigen::MatrixXcd partial_transpose_b(const FullState& state);

// Sum of |negative eigenvalues| of a Hermitian matrix, counting an
// eigenvalue as negative below -1e-14 * max|eigenvalue|.
double negativity_full(const Eigen::MatrixXcd& pt_matrix);

struct AdditivityReport {
  std::vector<double> parts;  // full negativity of each factor state
  double product_value = 0.0;     // negativity of the explicit tensor product
  double exact_identity = 0.0;    // ((2 N_1 + 1)(2 N_2 + 1)... - 1) / 2
  double sum_parts = 0.0;         // leading-order prediction sum N_i
};

// Builds each factor's partially transposed full state, forms the explicit
// Kronecker product, and compares its negativity against the exact product
// identity and the leading-order sum.  Total detector count <= 12.
AdditivityReport additivity_check(const std::vector<DetectorSystem>& systems);

}  // namespace harvest
