#include "harvest/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <cstddef>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace harvest {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Index-addressed work queue; results land in preallocated slots, so the
// emitted tables do not depend on the worker count or completion order.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& fn) {
  if (workers == 0) {
    const unsigned hc = std::thread::hardware_concurrency();
    workers = hc == 0 ? 1 : hc;
  }
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto body = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

void apply_param(GeometryFamily& g, SystemParams& sp, const std::string& name,
                 double v) {
  if (name == "x")
    g.x = v;
  else if (name == "r")
    g.r = v;
  else if (name == "theta")
    g.theta = v;
  else if (name == "theta21")
    g.theta21 = v;
  else if (name == "theta32")
    g.theta32 = v;
  else if (name == "l")
    g.l = v;
  else if (name == "omega_t")
    sp.omega_t = v;
  else
    throw std::invalid_argument("sweep: unknown parameter '" + name + "'");
}

std::string column_name(const std::string& param) {
  if (param == "x") return "x_over_l";
  if (param == "r") return "r_over_l";
  if (param == "l") return "l_over_l";
  return param;
}

double eval_negativity(const GeometryFamily& g, const SystemParams& sp) {
  return negativity_leading(assemble_rho1_pt(build(g, sp))).value;
}

std::string fmt(double v, int digits) {
  std::ostringstream os;
  os << std::setprecision(digits <= 0 ? 17 : digits) << v;
  return os.str();
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

std::string switching_label(SwitchingFamily f) {
  switch (f) {
    case SwitchingFamily::Gaussian:
      return "gaussian";
    case SwitchingFamily::TruncatedGaussian:
      return "truncated-gaussian";
    case SwitchingFamily::CompactPolynomial:
      return "compact-polynomial";
  }
  return "unknown";
}

}  // namespace

double SweepAxis::at(std::size_t i) const {
  if (count <= 1) return lo;
  return lo + (hi - lo) * (static_cast<double>(i) / static_cast<double>(count - 1));
}

SweepTable run_sweep(const SweepPlan& plan, std::size_t workers) {
  const auto& axes = plan.axes;
  if (axes.empty() || axes.size() > 3)
    throw std::invalid_argument("run_sweep: need 1 to 3 axes");
  std::size_t total = 1;
  for (std::size_t k = 0; k < axes.size(); ++k) {
    if (axes[k].count == 0)
      throw std::invalid_argument("run_sweep: axis count must be >= 1");
    for (std::size_t m = k + 1; m < axes.size(); ++m)
      if (axes[k].param == axes[m].param)
        throw std::invalid_argument("run_sweep: duplicate axis parameter '" +
                                    axes[k].param + "'");
    // Rejects unknown parameter names before any evaluation happens.
    GeometryFamily g = plan.family;
    SystemParams sp = plan.params;
    apply_param(g, sp, axes[k].param, axes[k].lo);
    total *= axes[k].count;
  }

  std::vector<std::size_t> stride(axes.size(), 1);
  for (std::size_t k = axes.size(); k-- > 1;)
    stride[k - 1] = stride[k] * axes[k].count;

  SweepTable table;
  table.param_names.reserve(axes.size());
  for (const auto& a : axes) table.param_names.push_back(column_name(a.param));
  table.rows.resize(total);

  parallel_for(total, workers, [&](std::size_t idx) {
    GeometryFamily g = plan.family;
    SystemParams sp = plan.params;
    SweepRow& row = table.rows[idx];
    row.params.resize(axes.size());
    for (std::size_t k = 0; k < axes.size(); ++k) {
      const std::size_t i = (idx / stride[k]) % axes[k].count;
      row.params[k] = axes[k].at(i);
      apply_param(g, sp, axes[k].param, row.params[k]);
    }
    try {
      row.negativity = eval_negativity(g, sp);
      row.ok = true;
    } catch (const std::exception& e) {
      row.negativity = kNaN;
      row.ok = false;
      row.error = e.what();
    }
  });
  return table;
}

OptimumReport optimize(const GeometryFamily& family, const SystemParams& base,
                       const std::vector<SweepAxis>& box, std::size_t workers) {
  if (box.empty() || box.size() > 3)
    throw std::invalid_argument("optimize: need 1 to 3 box axes");
  for (const auto& a : box) {
    if (a.count < 2)
      throw std::invalid_argument("optimize: box axes need count >= 2");
    if (!(a.hi > a.lo))
      throw std::invalid_argument("optimize: box axes need hi > lo");
  }

  const SweepTable grid = run_sweep({family, base, box}, workers);
  double value = -1.0;
  const SweepRow* best_row = nullptr;
  for (const auto& row : grid.rows)
    if (row.ok && row.negativity > value) {
      value = row.negativity;
      best_row = &row;
    }
  if (!best_row)
    throw std::runtime_error("optimize: every grid point failed");

  std::vector<double> cur = best_row->params;
  auto eval_at = [&](const std::vector<double>& pt) {
    GeometryFamily g = family;
    SystemParams sp = base;
    for (std::size_t k = 0; k < box.size(); ++k)
      apply_param(g, sp, box[k].param, pt[k]);
    try {
      return eval_negativity(g, sp);
    } catch (const std::exception&) {
      return -std::numeric_limits<double>::infinity();
    }
  };

  std::vector<double> cell(box.size());
  for (std::size_t k = 0; k < box.size(); ++k)
    cell[k] = (box[k].hi - box[k].lo) / static_cast<double>(box[k].count - 1);

  // Cyclic coordinate golden-section around the best grid point.  Only
  // improving moves are accepted, which keeps the final value at or above
  // every grid sample even on the max{0, .}-kinked landscape.
  constexpr double kGr = 0.61803398874989484820;
  constexpr double kXTol = 1e-5;
  std::size_t evals = 0;
  bool converged = false;
  for (int pass = 0; pass < 50 && !converged; ++pass) {
    double moved = 0.0;
    for (std::size_t k = 0; k < box.size(); ++k) {
      double a = std::max(box[k].lo, cur[k] - cell[k]);
      double b = std::min(box[k].hi, cur[k] + cell[k]);
      if (!(b > a)) continue;
      auto fk = [&](double t) {
        auto pt = cur;
        pt[k] = t;
        ++evals;
        return eval_at(pt);
      };
      double c = b - kGr * (b - a);
      double d = a + kGr * (b - a);
      double fc = fk(c);
      double fd = fk(d);
      while (b - a > kXTol) {
        if (fc >= fd) {
          b = d;
          d = c;
          fd = fc;
          c = b - kGr * (b - a);
          fc = fk(c);
        } else {
          a = c;
          c = d;
          fc = fd;
          d = a + kGr * (b - a);
          fd = fk(d);
        }
      }
      const double t_best = fc >= fd ? c : d;
      const double v_best = std::max(fc, fd);
      if (v_best > value) {
        value = v_best;
        moved = std::max(moved, std::fabs(t_best - cur[k]));
        cur[k] = t_best;
      }
    }
    if (moved < 1e-4) converged = true;
  }

  OptimumReport rep;
  rep.family = family;
  SystemParams sp = base;
  for (std::size_t k = 0; k < box.size(); ++k) {
    apply_param(rep.family, sp, box[k].param, cur[k]);
    rep.param_names.push_back(column_name(box[k].param));
  }
  rep.omega_t = sp.omega_t;
  rep.argmax = std::move(cur);
  rep.value = value;
  rep.refine_evals = evals;
  rep.converged = converged;
  return rep;
}

ChainScan chain_scan(std::size_t max_n, const std::vector<double>& omega_grid,
                     const SystemParams& base, std::size_t workers) {
  if (max_n < 2 || max_n > 200)
    throw std::invalid_argument("chain_scan: need 2 <= max_n <= 200");
  if (omega_grid.empty())
    throw std::invalid_argument("chain_scan: empty gap grid");

  ChainScan scan;
  scan.omega_grid = omega_grid;
  std::vector<double> gaps = omega_grid;
  gaps.push_back(18.88);
  gaps.push_back(24.49);

  const std::size_t n_rows = max_n - 1;
  std::vector<std::vector<double>> value(gaps.size(),
                                         std::vector<double>(n_rows, 0.0));
  parallel_for(gaps.size(), workers, [&](std::size_t gi) {
    SystemParams sp = base;
    sp.omega_t = gaps[gi];
    const SwitchingSpec spec = sp.switching
                                   ? *sp.switching
                                   : SwitchingSpec::gaussian(sp.t / 5.0);
    const double l_abs = 2.0 * sp.t;
    const double omega = sp.omega_t / sp.t;
    const bool gaussian = spec.family() == SwitchingFamily::Gaussian;
    const double p = p_element(sp.lambda, omega, spec);
    // One element evaluation per distinct lattice distance, shared by every
    // chain length at this gap.
    std::map<int, PairElements> cache;
    auto elem = [&](int m) -> const PairElements& {
      auto it = cache.find(m);
      if (it == cache.end()) {
        ElementParams ep{sp.lambda, omega, spec, m * l_abs};
        it = cache
                 .emplace(m, gaussian ? gaussian_elements(ep)
                                      : quadrature_elements(ep))
                 .first;
      }
      return it->second;
    };
    for (std::size_t n = 2; n <= max_n; ++n) {
      const auto map = chain_rho1_structure(n);
      Eigen::MatrixXcd m(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const ChainEntry& e = map[i * n + j];
          cplx v;
          switch (e.kind) {
            case ChainEntry::Kind::P:
              v = cplx(p, 0.0);
              break;
            case ChainEntry::Kind::C:
              v = elem(e.multiple).C();
              break;
            case ChainEntry::Kind::X:
              v = elem(e.multiple).X();
              break;
          }
          m(i, j) = e.conjugated ? std::conj(v) : v;
        }
      value[gi][n - 2] = negativity_leading({std::move(m)}).value;
    }
  });

  scan.rows.resize(n_rows);
  const std::size_t g_count = omega_grid.size();
  for (std::size_t r = 0; r < n_rows; ++r) {
    ChainScanRow& row = scan.rows[r];
    row.n = r + 2;
    row.values.resize(g_count);
    for (std::size_t gi = 0; gi < g_count; ++gi)
      row.values[gi] = value[gi][r];
    std::size_t best = 0;
    for (std::size_t gi = 1; gi < g_count; ++gi)
      if (row.values[gi] > row.values[best]) best = gi;
    row.best_omega_t = omega_grid[best];
    row.best_value = row.values[best];
    row.value_1888 = value[g_count][r];
    row.value_2449 = value[g_count + 1][r];
  }

  // Least-squares slope over the upper half of the N range, where the
  // growth has settled into its linear regime.
  scan.fit_from = std::max<std::size_t>(2, (max_n + 1) / 2);
  auto slope = [&](double ChainScanRow::*field) {
    double sn = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& row : scan.rows) {
      if (row.n < scan.fit_from) continue;
      const double x = static_cast<double>(row.n);
      const double y = row.*field;
      sn += 1.0;
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double denom = sn * sxx - sx * sx;
    return denom == 0.0 ? 0.0 : (sn * sxy - sx * sy) / denom;
  };
  scan.slope_1888 = slope(&ChainScanRow::value_1888);
  scan.slope_2449 = slope(&ChainScanRow::value_2449);
  return scan;
}

ScaleScan scale_scan(const std::vector<FamilyKind>& bases, double l_lo,
                     double l_hi, std::size_t count, const SystemParams& base,
                     std::size_t workers) {
  if (bases.empty()) throw std::invalid_argument("scale_scan: no families");
  for (FamilyKind b : bases)
    if (b != FamilyKind::Pair && b != FamilyKind::ABA &&
        b != FamilyKind::DiagonalSquare && b != FamilyKind::Asym31 &&
        b != FamilyKind::AABB)
      throw std::invalid_argument("scale_scan: " + family_name(b) +
                                  " is not in the optimal set");
  if (count == 0) throw std::invalid_argument("scale_scan: empty l grid");
  if (!base.allow_timelike && l_lo < 1.0 - 1e-12)
    throw std::invalid_argument("scale_scan: l range below the causal bound");

  ScaleScan scan;
  scan.bases = bases;
  const SweepAxis axis{"l", l_lo, l_hi, count};
  scan.l_values.resize(count);
  for (std::size_t i = 0; i < count; ++i) scan.l_values[i] = axis.at(i);
  scan.values.assign(count, std::vector<double>(bases.size(), 0.0));

  parallel_for(count * bases.size(), workers, [&](std::size_t idx) {
    const std::size_t i = idx / bases.size();
    const std::size_t j = idx % bases.size();
    GeometryFamily g;
    g.kind = FamilyKind::ScaledOptimal;
    g.l = scan.l_values[i];
    g.base = bases[j];
    scan.values[i][j] = eval_negativity(g, base);
  });
  return scan;
}

SwitchingCompare switching_compare(const std::vector<FamilyKind>& families,
                                   const std::vector<double>& deltas,
                                   double omega_lo, double omega_hi,
                                   std::size_t count, const SystemParams& base,
                                   std::size_t workers) {
  if (families.empty())
    throw std::invalid_argument("switching_compare: no families");
  for (FamilyKind f : families)
    if (f != FamilyKind::Pair && f != FamilyKind::ABA &&
        f != FamilyKind::DiagonalSquare)
      throw std::invalid_argument("switching_compare: " + family_name(f) +
                                  " is not a supported geometry");
  for (double d : deltas)
    if (!(d > 0.0))
      throw std::invalid_argument("switching_compare: delta must be positive");
  if (count == 0)
    throw std::invalid_argument("switching_compare: empty gap grid");

  SwitchingCompare cmp;
  const SweepAxis axis{"omega_t", omega_lo, omega_hi, count};
  cmp.omega_grid.resize(count);
  for (std::size_t i = 0; i < count; ++i) cmp.omega_grid[i] = axis.at(i);

  // Specs are constructed once per curve: the compact families build their
  // Fourier cache at construction and stay immutable afterwards.
  std::vector<SwitchingSpec> specs;
  for (FamilyKind f : families) {
    cmp.curves.push_back({f, SwitchingFamily::TruncatedGaussian, 0.0, {}, {}, {}});
    specs.push_back(SwitchingSpec::truncated_gaussian(base.t / 5.0));
    for (double d : deltas) {
      cmp.curves.push_back({f, SwitchingFamily::CompactPolynomial, d, {}, {}, {}});
      specs.push_back(SwitchingSpec::compact_polynomial(d, base.t));
    }
  }
  for (auto& curve : cmp.curves) {
    curve.values.assign(count, 0.0);
    curve.errors.assign(count, std::string());
  }

  parallel_for(cmp.curves.size() * count, workers, [&](std::size_t idx) {
    const std::size_t ci = idx / count;
    const std::size_t ri = idx % count;
    SwitchingCurve& curve = cmp.curves[ci];
    GeometryFamily g;
    g.kind = curve.geometry;
    SystemParams sp = base;
    sp.omega_t = cmp.omega_grid[ri];
    sp.switching = specs[ci];
    try {
      curve.values[ri] = eval_negativity(g, sp);
    } catch (const std::exception& e) {
      curve.values[ri] = kNaN;
      curve.errors[ri] = e.what();
    }
  });

  for (auto& curve : cmp.curves) {
    std::size_t run_start = count;
    for (std::size_t ri = 0; ri <= count; ++ri) {
      const bool harvesting =
          ri < count && curve.errors[ri].empty() && curve.values[ri] > 0.0;
      if (harvesting && run_start == count) run_start = ri;
      if (!harvesting && run_start != count) {
        curve.intervals.emplace_back(cmp.omega_grid[run_start],
                                     cmp.omega_grid[ri - 1]);
        run_start = count;
      }
    }
  }
  return cmp;
}

void write_csv(const SweepTable& table, std::ostream& out, int digits) {
  for (const auto& name : table.param_names) out << name << ',';
  out << "negativity,status\n";
  for (const auto& row : table.rows) {
    for (double v : row.params) out << fmt(v, digits) << ',';
    out << fmt(row.negativity, digits) << ','
        << (row.ok ? "ok" : sanitize(row.error)) << '\n';
  }
}

void write_csv(const ChainScan& scan, std::ostream& out, int digits) {
  out << "n,best_omega_t,best_value,value_at_1888,value_at_2449\n";
  for (const auto& row : scan.rows)
    out << row.n << ',' << fmt(row.best_omega_t, digits) << ','
        << fmt(row.best_value, digits) << ',' << fmt(row.value_1888, digits)
        << ',' << fmt(row.value_2449, digits) << '\n';
  out << "# fit_from=" << scan.fit_from
      << " slope_1888=" << fmt(scan.slope_1888, digits)
      << " slope_2449=" << fmt(scan.slope_2449, digits) << '\n';
}

void write_csv(const ScaleScan& scan, std::ostream& out, int digits) {
  out << "l_over_l,family,negativity,log10_negativity,harvests\n";
  for (std::size_t i = 0; i < scan.l_values.size(); ++i)
    for (std::size_t j = 0; j < scan.bases.size(); ++j) {
      const double v = scan.values[i][j];
      out << fmt(scan.l_values[i], digits) << ','
          << family_name(scan.bases[j]) << ',' << fmt(v, digits) << ','
          << (v > 0.0 ? fmt(std::log10(v), digits) : "-inf") << ','
          << (v > 0.0 ? 1 : 0) << '\n';
    }
}

void write_csv(const SwitchingCompare& cmp, std::ostream& out, int digits) {
  out << "omega_t,family,switching,delta,negativity,status\n";
  for (const auto& curve : cmp.curves) {
    const bool cp = curve.switching == SwitchingFamily::CompactPolynomial;
    for (std::size_t ri = 0; ri < cmp.omega_grid.size(); ++ri) {
      out << fmt(cmp.omega_grid[ri], digits) << ','
          << family_name(curve.geometry) << ','
          << switching_label(curve.switching) << ','
          << (cp ? fmt(curve.delta, digits) : std::string()) << ','
          << fmt(curve.values[ri], digits) << ','
          << (curve.errors[ri].empty() ? "ok" : sanitize(curve.errors[ri]))
          << '\n';
    }
  }
  for (const auto& curve : cmp.curves) {
    out << "# intervals family=" << family_name(curve.geometry)
        << " switching=" << switching_label(curve.switching);
    if (curve.switching == SwitchingFamily::CompactPolynomial)
      out << " delta=" << fmt(curve.delta, digits);
    if (curve.intervals.empty()) {
      out << " none";
    } else {
      for (const auto& [a, b] : curve.intervals)
        out << " [" << fmt(a, digits) << ',' << fmt(b, digits) << ']';
    }
    out << '\n';
  }
}

}  // namespace harvest
