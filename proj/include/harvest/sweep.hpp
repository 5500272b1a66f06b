// Parameter sweeps, local optimization, chain scaling fits, and
// switching-function comparison runs over the named geometries.  All
// entry points are deterministic: identical plans produce byte-identical
// tables regardless of the worker count.
#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "harvest/configs.hpp"

namespace harvest {

// One swept parameter: a family field ("x", "r", "theta", "theta21",
// "theta32", "l") or the gap "omega_t", sampled at count points evenly
// spaced on [lo, hi] (count == 1 pins the parameter at lo).
struct SweepAxis {
  std::string param;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 1;

  double at(std::size_t i) const;
};

// Dense grid evaluation request.  Axis order fixes the row order: rows are
// emitted row-major with the first axis outermost.  Parameters not named by
// an axis keep their values from family / params.
struct SweepPlan {
  GeometryFamily family;
  SystemParams params;
  std::vector<SweepAxis> axes;  // 1 to 3 axes
};

struct SweepRow {
  std::vector<double> params;  // swept values, axis order
  double negativity = 0.0;     // NaN when !ok
  bool ok = true;
  std::string error;           // one-line marker when !ok
};

struct SweepTable {
  std::vector<std::string> param_names;  // axis params, CSV column spelling
  std::vector<SweepRow> rows;
};

// Evaluates every grid point (leading-order negativity of the assembled
// block).  Row-level failures (causality, quadrature, eigensolver) mark the
// row instead of aborting the sweep.  Throws std::invalid_argument for a
// malformed plan (no axes, more than three, unknown or duplicate parameter
// names, empty axis).  workers = 0 picks the machine parallelism.
SweepTable run_sweep(const SweepPlan& plan, std::size_t workers = 0);

// Grid-then-refine local optimizer report.
struct OptimumReport {
  GeometryFamily family;                 // argmax geometry parameters
  double omega_t = 0.0;                  // argmax gap
  std::vector<std::string> param_names;  // box axis order
  std::vector<double> argmax;
  double value = 0.0;
  std::size_t refine_evals = 0;  // objective evaluations during refinement
  bool converged = true;         // parameter deltas fell below 1e-4
};

// Coarse grid scan over the box (axis counts >= 2) followed by cyclic
// coordinate golden-section refinement inside the box; only improving moves
// are accepted, so the reported value is >= every grid sample.  Convergence
// is declared when a full pass moves every parameter by less than 1e-4;
// otherwise the best point so far is returned with converged = false.
OptimumReport optimize(const GeometryFamily& family, const SystemParams& base,
                       const std::vector<SweepAxis>& box,
                       std::size_t workers = 0);

// Alternating-chain scan: for each N in [2, max_n], the negativity over the
// gap grid plus the two fixed reference gaps used by the linear fits.
struct ChainScanRow {
  std::size_t n = 0;
  double best_omega_t = 0.0;     // grid argmax
  double best_value = 0.0;
  double value_1888 = 0.0;       // at Omega T = 18.88
  double value_2449 = 0.0;       // at Omega T = 24.49
  std::vector<double> values;    // over omega_grid
};

struct ChainScan {
  std::vector<double> omega_grid;
  std::vector<ChainScanRow> rows;  // n = 2 .. max_n
  std::size_t fit_from = 0;        // first N in the least-squares fits
  double slope_1888 = 0.0;         // per-detector negativity increment
  double slope_2449 = 0.0;
};

// Assembles each chain block from the Toeplitz structure map (one element
// evaluation per distinct distance).  The N = 2 row reproduces the Pair
// family evaluation bit for bit.  Slopes are least-squares fits of value
// against N over the upper half of the range, where growth is linear.
// Throws std::invalid_argument for max_n < 2 or > 200 or an empty grid.
ChainScan chain_scan(std::size_t max_n, const std::vector<double>& omega_grid,
                     const SystemParams& base, std::size_t workers = 0);

// Negativity of the rescaled optimal arrangements against the subsystem
// separation l/L at a fixed gap.
struct ScaleScan {
  std::vector<FamilyKind> bases;          // ScaledOptimal base per column
  std::vector<double> l_values;
  std::vector<std::vector<double>> values;  // values[i][j]: l i, base j
};

// bases must come from the optimal set {Pair, ABA, DiagonalSquare, Asym31,
// AABB}; l runs over count points on [l_lo, l_hi] (l_lo >= 1).
ScaleScan scale_scan(const std::vector<FamilyKind>& bases, double l_lo,
                     double l_hi, std::size_t count, const SystemParams& base,
                     std::size_t workers = 0);

// Negativity against the gap for each (geometry, switching) pair, with the
// maximal Omega T > 0 harvesting runs flagged per curve.
struct SwitchingCurve {
  FamilyKind geometry;
  SwitchingFamily switching;
  double delta = 0.0;           // CompactPolynomial exponent
  std::vector<double> values;   // NaN on row error
  std::vector<std::string> errors;
  std::vector<std::pair<double, double>> intervals;  // [onset, offset] gaps
};

struct SwitchingCompare {
  std::vector<double> omega_grid;
  std::vector<SwitchingCurve> curves;
};

// Curves: per geometry, the truncated Gaussian followed by one compactified
// polynomial per delta.  Geometries must come from {Pair, ABA,
// DiagonalSquare}.  Quadrature failures mark the affected row.
SwitchingCompare switching_compare(const std::vector<FamilyKind>& families,
                                   const std::vector<double>& deltas,
                                   double omega_lo, double omega_hi,
                                   std::size_t count, const SystemParams& base,
                                   std::size_t workers = 0);

// CSV emitters: UTF-8, header row, fixed column sets; values at the given
// significant-digit count (<= 0 selects round-trip full precision).
// Summary quantities (fit slopes) follow the data as '#'-prefixed comment
// lines, which re-parsing skips.
void write_csv(const SweepTable& table, std::ostream& out, int digits = 6);
void write_csv(const ChainScan& scan, std::ostream& out, int digits = 6);
void write_csv(const ScaleScan& scan, std::ostream& out, int digits = 6);
void write_csv(const SwitchingCompare& cmp, std::ostream& out, int digits = 6);

}  // namespace harvest
