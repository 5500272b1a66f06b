// Internal helpers shared by the block assembly and the full-state oracle:
// one elements evaluation per distinct pair distance, plus the common system
// validation and the cross-pair causality guard.
#pragma once

#include <cstddef>
#include <vector>

#include "harvest/negativity.hpp"

namespace harvest::detail {

struct PairTable {
  double p = 0.0;
  std::size_t n = 0;
  // Pair (i, j), i > j, 0-based detector indices; idx = i(i-1)/2 + j.
  std::vector<PairElements> pairs;

  const PairElements& at(std::size_t i, std::size_t j) const {
    if (i < j) std::swap(i, j);
    return pairs[i * (i - 1) / 2 + j];
  }
};

// Validates the detector system (N >= 2, both subsystems non-empty), applies
// the causality guard to cross-subsystem pairs, and evaluates the switching
// family's elements once per distinct distance.  X is evaluated lazily by the
// caller via PairElements::X(), so a compact-support switching with a
// timelike same-subsystem pair still supports C-only consumers.
PairTable build_pair_table(const DetectorSystem& sys);

}  // namespace harvest::detail
