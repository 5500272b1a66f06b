// Command-line driver: wires scenario configs and flags to the sweep and
// oracle layers and emits plot-ready CSV tables.
//
// Exit codes (frozen for automation): 0 success, 1 any row-level evaluation
// error (the table is still written, failed rows carry a status message),
// 2 flag/config errors.
#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "harvest/oracle.hpp"
#include "harvest/scenario.hpp"

namespace {

using namespace harvest;

constexpr int kExitRowError = 1;
constexpr int kExitConfigError = 2;

std::size_t workers_from_env() {
  const char* raw = std::getenv("HARVEST_WORKERS");
  if (raw == nullptr || *raw == '\0') return 0;  // machine parallelism
  char* end = nullptr;
  const unsigned long v = std::strtoul(raw, &end, 10);
  if (end == raw || *end != '\0')
    throw std::invalid_argument(
        std::string("HARVEST_WORKERS must be a non-negative integer, got '") +
        raw + "'");
  return static_cast<std::size_t>(v);
}

// Output stream bound to --output/-o (or the config's output path), falling
// back to stdout.
class OutputTarget {
 public:
  OutputTarget(const std::string& path, int digits) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_)
        throw std::runtime_error("cannot write output file '" + path + "'");
    }
    stream().setf(std::ios::fmtflags{});
    stream() << std::setprecision(digits <= 0 ? 17 : digits);
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

struct CommonOpts {
  std::string config_path;
  std::string output_path;
  bool full_precision = false;
  std::optional<double> omega_t;
  std::optional<double> t;
  std::optional<double> lambda;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_system = true) {
  cmd->add_option("--config", opts.config_path,
                  "Scenario file (JSON; sections system/geometry/sweep/output)");
  cmd->add_option("-o,--output", opts.output_path,
                  "Output file (default: stdout)");
  cmd->add_flag("--full-precision", opts.full_precision,
                "Print full double precision instead of 6 significant digits");
  if (with_system) {
    cmd->add_option("--omega-t", opts.omega_t, "Energy gap Omega*T");
    cmd->add_option("--t", opts.t, "Interaction half-duration T");
    cmd->add_option("--lambda", opts.lambda, "Coupling strength");
  }
}

ScenarioConfig resolve_config(const CommonOpts& opts) {
  ScenarioConfig cfg;
  if (!opts.config_path.empty()) cfg = load_scenario(opts.config_path);
  if (opts.t) cfg.system.t = *opts.t;
  if (opts.lambda) cfg.system.lambda = *opts.lambda;
  if (opts.omega_t) cfg.system.omega_t = *opts.omega_t;
  if (!opts.output_path.empty()) cfg.output.path = opts.output_path;
  if (opts.full_precision) cfg.output.full_precision = true;
  return cfg;
}

int csv_digits(const ScenarioConfig& cfg) {
  return cfg.output.full_precision ? 0 : 6;
}

SweepAxis parse_axis_spec(const std::string& text) {
  // param:lo:hi:count
  std::vector<std::string> parts;
  std::istringstream is(text);
  for (std::string piece; std::getline(is, piece, ':');)
    parts.push_back(piece);
  if (parts.size() != 4)
    throw std::invalid_argument("axis '" + text +
                                "' must look like param:lo:hi:count");
  try {
    return SweepAxis{parts[0], std::stod(parts[1]), std::stod(parts[2]),
                     static_cast<std::size_t>(std::stoul(parts[3]))};
  } catch (const std::exception&) {
    throw std::invalid_argument("axis '" + text + "': malformed number");
  }
}

std::vector<FamilyKind> parse_family_list(const std::string& text) {
  std::vector<FamilyKind> kinds;
  std::istringstream is(text);
  for (std::string name; std::getline(is, name, ',');) {
    const auto kind = family_from_name(name);
    if (!kind)
      throw std::invalid_argument("unknown family '" + name + "'");
    kinds.push_back(*kind);
  }
  if (kinds.empty()) throw std::invalid_argument("empty family list");
  return kinds;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::istringstream is(text);
  for (std::string piece; std::getline(is, piece, ',');) {
    try {
      values.push_back(std::stod(piece));
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed number '" + piece + "'");
    }
  }
  return values;
}

std::string fmt_complex(const cplx& z) {
  std::ostringstream os;
  os << std::setprecision(6) << z.real() << (z.imag() < 0 ? " - " : " + ")
     << std::abs(z.imag()) << "i";
  return os.str();
}

// ---------------------------------------------------------------- elements

int run_elements(const std::string& switching, double delta, double omega_t,
                 double x_over_l, double t, double lambda, bool full) {
  SwitchingSpec spec = SwitchingSpec::gaussian(t / 5.0);
  if (switching == "truncated" || switching == "truncated-gaussian")
    spec = SwitchingSpec::truncated_gaussian(t / 5.0);
  else if (switching == "compact" || switching == "compact-polynomial")
    spec = SwitchingSpec::compact_polynomial(delta, t);
  else if (switching != "gaussian")
    throw std::invalid_argument("unknown switching '" + switching +
                                "' (gaussian, truncated, compact)");

  const ElementParams ep{lambda, omega_t / t, spec, x_over_l * 2.0 * t};
  const PairElements el = spec.family() == SwitchingFamily::Gaussian
                              ? gaussian_elements(ep)
                              : quadrature_elements(ep);
  std::cout << std::setprecision(full ? 17 : 6);
  std::cout << "P    = " << el.P << '\n';
  std::cout << "C+   = " << fmt_complex(el.Cp) << '\n';
  std::cout << "C-   = " << fmt_complex(el.Cm) << '\n';
  std::cout << "X+   = " << fmt_complex(el.Xp) << '\n';
  if (!el.Xm) {
    std::cout << "X-   = not computed (compact support, x < 2T)\n";
    return kExitRowError;
  }
  std::cout << "X-   = " << fmt_complex(*el.Xm) << '\n';
  const double xmag = std::abs(el.X());
  std::cout << "|X|  = " << xmag << '\n';
  std::cout << "|X| > P: " << (xmag > el.P ? "true" : "false") << '\n';
  return 0;
}

// ------------------------------------------------------------------- sweep

int run_sweep_cmd(const CommonOpts& opts, const std::string& family,
                  const std::vector<std::string>& axis_specs, bool refine) {
  ScenarioConfig cfg = resolve_config(opts);
  if (!family.empty()) {
    const auto kind = family_from_name(family);
    if (!kind) throw std::invalid_argument("unknown family '" + family + "'");
    cfg.geometry.kind = *kind;
  }
  if (!axis_specs.empty()) {
    cfg.axes.clear();
    for (const auto& text : axis_specs) cfg.axes.push_back(parse_axis_spec(text));
  }
  if (refine) cfg.refine = true;
  if (cfg.axes.empty())
    throw std::invalid_argument(
        "no sweep axes given (use --axis param:lo:hi:count or a config file)");

  const std::size_t workers = workers_from_env();
  const auto table = run_sweep({cfg.geometry, cfg.system, cfg.axes}, workers);
  OutputTarget out(cfg.output.path, csv_digits(cfg));
  write_csv(table, out.stream(), csv_digits(cfg));

  if (cfg.refine) {
    const auto rep = optimize(cfg.geometry, cfg.system, cfg.axes, workers);
    out.stream() << "# refined";
    for (std::size_t k = 0; k < rep.param_names.size(); ++k)
      out.stream() << ' ' << rep.param_names[k] << '=' << rep.argmax[k];
    out.stream() << " negativity=" << rep.value
                 << " evals=" << rep.refine_evals
                 << " converged=" << (rep.converged ? "true" : "false")
                 << '\n';
  }
  for (const auto& row : table.rows)
    if (!row.ok) return kExitRowError;
  return 0;
}

// ---------------------------------------------------------------- optimize

std::vector<SweepAxis> default_box(FamilyKind kind) {
  const double s2 = std::numbers::sqrt2;
  switch (kind) {
    case FamilyKind::Pair:
      return {{"x", 1.0, 3.0, 20}, {"omega_t", 15.0, 35.0, 30}};
    case FamilyKind::TrianglePolar:
      return {{"r", 1.0, 2.5, 12}, {"theta", 0.0, std::numbers::pi, 12},
              {"omega_t", 15.0, 30.0, 16}};
    case FamilyKind::AAB:
      return {{"x", 0.02, 0.4, 20}, {"omega_t", 15.0, 25.0, 20}};
    case FamilyKind::ABA:
      return {{"omega_t", 15.0, 25.0, 30}};
    case FamilyKind::AABB:
      return {{"x", 0.02, 0.3, 20}, {"omega_t", 12.0, 22.0, 20}};
    case FamilyKind::ABBA:
      return {{"x", 0.0, 0.4, 20}, {"omega_t", 15.0, 25.0, 20}};
    case FamilyKind::ABAB:
      return {{"x", 1.0, 3.0, 20}, {"omega_t", 15.0, 25.0, 20}};
    case FamilyKind::Rectangle:
      return {{"x", 0.0, 10.0, 20}, {"omega_t", 18.0, 30.0, 20}};
    case FamilyKind::SkewedSquare:
    case FamilyKind::ModTetrahedron:
      return {{"x", 0.0, s2, 15}, {"omega_t", 15.0, 23.0, 16}};
    case FamilyKind::DiagonalSquare:
      return {{"omega_t", 15.0, 23.0, 30}};
    case FamilyKind::Asym31:
      return {{"theta21", 1.5, 3.0, 12}, {"theta32", 1.5, 3.0, 12},
              {"omega_t", 16.0, 24.0, 10}};
    default:
      throw std::invalid_argument("optimize: no default search box for " +
                                  family_name(kind) + "; give --box");
  }
}

int run_optimize_cmd(const CommonOpts& opts, const std::string& family,
                     const std::vector<std::string>& box_specs) {
  ScenarioConfig cfg = resolve_config(opts);
  if (!family.empty()) {
    const auto kind = family_from_name(family);
    if (!kind) throw std::invalid_argument("unknown family '" + family + "'");
    cfg.geometry.kind = *kind;
  }
  std::vector<SweepAxis> box;
  if (!box_specs.empty())
    for (const auto& text : box_specs) box.push_back(parse_axis_spec(text));
  else if (!cfg.axes.empty())
    box = cfg.axes;
  else
    box = default_box(cfg.geometry.kind);

  const auto rep = optimize(cfg.geometry, cfg.system, box, workers_from_env());
  OutputTarget out(cfg.output.path, csv_digits(cfg));
  out.stream() << "family = " << family_name(rep.family.kind) << '\n';
  bool swept_omega = false;
  for (std::size_t k = 0; k < rep.param_names.size(); ++k) {
    out.stream() << rep.param_names[k] << " = " << rep.argmax[k] << '\n';
    swept_omega = swept_omega || rep.param_names[k] == "omega_t";
  }
  if (!swept_omega) out.stream() << "omega_t = " << rep.omega_t << '\n';
  out.stream() << "negativity = " << rep.value << '\n';
  out.stream() << "refine_evals = " << rep.refine_evals << '\n';
  out.stream() << "converged = " << (rep.converged ? "true" : "false") << '\n';
  return rep.converged ? 0 : kExitRowError;
}

// ------------------------------------------------------- chain and scale

int run_chain_cmd(const CommonOpts& opts, std::size_t max_n, double omega_lo,
                  double omega_hi, std::size_t omega_count) {
  const ScenarioConfig cfg = resolve_config(opts);
  const SweepAxis axis{"omega_t", omega_lo, omega_hi, omega_count};
  std::vector<double> grid(omega_count);
  for (std::size_t i = 0; i < omega_count; ++i) grid[i] = axis.at(i);
  const auto scan = chain_scan(max_n, grid, cfg.system, workers_from_env());
  OutputTarget out(cfg.output.path, csv_digits(cfg));
  write_csv(scan, out.stream(), csv_digits(cfg));
  return 0;
}

int run_scale_cmd(const CommonOpts& opts, const std::string& bases, double l_lo,
                  double l_hi, std::size_t count) {
  ScenarioConfig cfg = resolve_config(opts);
  if (!opts.omega_t) cfg.system.omega_t = 24.49;
  const auto scan = scale_scan(parse_family_list(bases), l_lo, l_hi, count,
                               cfg.system, workers_from_env());
  OutputTarget out(cfg.output.path, csv_digits(cfg));
  write_csv(scan, out.stream(), csv_digits(cfg));
  return 0;
}

// -------------------------------------------------------- switching-compare

int run_switching_cmd(const CommonOpts& opts, const std::string& families,
                      const std::string& deltas, double omega_lo,
                      double omega_hi, std::size_t count) {
  const ScenarioConfig cfg = resolve_config(opts);
  const auto cmp =
      switching_compare(parse_family_list(families), parse_double_list(deltas),
                        omega_lo, omega_hi, count, cfg.system,
                        workers_from_env());
  OutputTarget out(cfg.output.path, csv_digits(cfg));
  write_csv(cmp, out.stream(), csv_digits(cfg));
  for (const auto& curve : cmp.curves)
    for (const auto& err : curve.errors)
      if (!err.empty()) return kExitRowError;
  return 0;
}

// ------------------------------------------------------------ oracle-check

int run_oracle_cmd(std::size_t n, std::size_t trials, unsigned seed,
                   bool full) {
  if (n < 2 || n > 12)
    throw std::invalid_argument("oracle-check: need 2 <= n <= 12");
  if (trials == 0) throw std::invalid_argument("oracle-check: trials >= 1");

  const double t = 0.01;
  const double l = 2.0 * t;
  const SwitchingSpec spec = SwitchingSpec::gaussian(t / 5.0);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uo(8.0, 26.0);
  std::uniform_real_distribution<double> ub(0.0, 12.0 * l);
  std::uniform_int_distribution<std::size_t> ua(1, n - 1);

  double max_resid = 0.0;
  double max_ratio = 0.0;
  bool pass = true;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    // Geometry draw: n points in a box, pairwise separation >= 2.5 L keeps
    // every cross pair spacelike with margin.
    std::vector<Vec3> pos;
    while (pos.size() < n) {
      const Vec3 q{ub(rng), ub(rng), ub(rng)};
      bool ok = true;
      for (const auto& r : pos)
        ok = ok &&
             std::hypot(q[0] - r[0], q[1] - r[1], q[2] - r[2]) >= 2.5 * l;
      if (ok)
        pos.push_back(q);
      else
        pos.clear();
    }
    const double omega_t = uo(rng);
    // Boosted coupling so the full-state spectrum sits above solver noise.
    const double lambda =
        std::sqrt(0.3 / double(n) / p_element(1.0, omega_t / t, spec));
    const DetectorSystem sys{pos,  ua(rng), lambda,
                             omega_t / t, spec,   false};
    const auto st = assemble_full(sys);
    const double full_neg = negativity_full(partial_transpose_b(st));
    const double sub = negativity_leading(assemble_rho1_pt(sys)).value;

    Eigen::MatrixXcd m = st.matrix;
    const auto vac = basis_position(0u, n);
    const double rho00 = m(vac, vac).real();
    m(vac, vac) = 0.0;
    const double scale = m.cwiseAbs().maxCoeff();
    const double bound = 10.0 * scale * scale / rho00;

    const double resid = std::abs(full_neg - sub);
    max_resid = std::max(max_resid, resid);
    max_ratio = std::max(max_ratio, resid / bound);
    pass = pass && resid <= bound;
  }

  std::cout << std::setprecision(full ? 17 : 6);
  std::cout << "trials = " << trials << "  n = " << n << '\n';
  std::cout << "max |full - block| = " << max_resid << '\n';
  std::cout << "max residual / bound = " << max_ratio << '\n';
  std::cout << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? 0 : kExitRowError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Vacuum entanglement harvesting: detector-pair elements, negativity "
      "sweeps, and reproduction tables"};
  app.require_subcommand(1);

  // elements
  auto* elements_cmd =
      app.add_subcommand("elements", "Print the pair element values P, C, X");
  std::string el_switching = "gaussian";
  double el_delta = 2.0, el_omega = 0.0, el_x = 0.0, el_t = 0.01,
         el_lambda = 1.0;
  bool el_full = false;
  elements_cmd->add_option("--switching", el_switching,
                           "gaussian | truncated | compact");
  elements_cmd->add_option("--delta", el_delta,
                           "Compact window exponent (with --switching compact)");
  elements_cmd->add_option("--omega-t", el_omega, "Energy gap Omega*T")
      ->required();
  elements_cmd->add_option("--x-over-l", el_x, "Separation x/L")->required();
  elements_cmd->add_option("--t", el_t, "Interaction half-duration T");
  elements_cmd->add_option("--lambda", el_lambda, "Coupling strength");
  elements_cmd->add_flag("--full-precision", el_full, "Full double precision");

  // sweep
  auto* sweep_cmd =
      app.add_subcommand("sweep", "Evaluate negativity on a dense grid");
  CommonOpts sweep_opts;
  std::string sweep_family;
  std::vector<std::string> sweep_axes;
  bool sweep_refine = false;
  add_common(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--family", sweep_family, "Geometry family name");
  sweep_cmd->add_option("--axis", sweep_axes,
                        "Axis as param:lo:hi:count (repeatable, outermost "
                        "first; params: x r theta theta21 theta32 l omega_t)");
  sweep_cmd->add_flag("--refine", sweep_refine,
                      "Append a refined optimum as a comment line");

  // optimize
  auto* opt_cmd = app.add_subcommand(
      "optimize", "Grid scan plus derivative-free refinement of an optimum");
  CommonOpts opt_opts;
  std::string opt_family;
  std::vector<std::string> opt_box;
  add_common(opt_cmd, opt_opts);
  opt_cmd->add_option("--family", opt_family, "Geometry family name");
  opt_cmd->add_option("--box", opt_box,
                      "Search box axis param:lo:hi:count (repeatable; "
                      "default box depends on the family)");

  // chain
  auto* chain_cmd = app.add_subcommand(
      "chain", "Alternating-chain negativity growth versus detector count");
  CommonOpts chain_opts;
  std::size_t chain_max_n = 50, chain_count = 201;
  double chain_lo = 14.0, chain_hi = 24.0;
  add_common(chain_cmd, chain_opts);
  chain_cmd->add_option("--max-n", chain_max_n, "Largest chain length");
  chain_cmd->add_option("--omega-lo", chain_lo, "Gap grid lower edge");
  chain_cmd->add_option("--omega-hi", chain_hi, "Gap grid upper edge");
  chain_cmd->add_option("--omega-count", chain_count, "Gap grid size");

  // scale
  auto* scale_cmd = app.add_subcommand(
      "scale", "Uniformly rescale optimal geometries and track the decay");
  CommonOpts scale_opts;
  std::string scale_bases = "pair,aba,diagonal-square,asym31,aabb";
  double scale_lo = 1.0, scale_hi = 2.0;
  std::size_t scale_count = 21;
  add_common(scale_cmd, scale_opts);
  scale_cmd->add_option("--bases", scale_bases,
                        "Comma-separated base families");
  scale_cmd->add_option("--l-lo", scale_lo, "Smallest separation multiplier");
  scale_cmd->add_option("--l-hi", scale_hi, "Largest separation multiplier");
  scale_cmd->add_option("--count", scale_count, "Grid size");

  // switching-compare
  auto* sw_cmd = app.add_subcommand(
      "switching-compare",
      "Negativity versus gap for truncated and compact switchings");
  CommonOpts sw_opts;
  std::string sw_families = "pair";
  std::string sw_deltas = "2.0";
  double sw_lo = 0.0, sw_hi = 35.0;
  std::size_t sw_count = 141;
  add_common(sw_cmd, sw_opts);
  sw_cmd->add_option("--families", sw_families,
                     "Comma-separated geometries (pair, aba, diagonal-square)");
  sw_cmd->add_option("--deltas", sw_deltas,
                     "Comma-separated compact-window exponents");
  sw_cmd->add_option("--omega-lo", sw_lo, "Gap grid lower edge");
  sw_cmd->add_option("--omega-hi", sw_hi, "Gap grid upper edge");
  sw_cmd->add_option("--count", sw_count, "Gap grid size");

  // oracle-check
  auto* oracle_cmd = app.add_subcommand(
      "oracle-check",
      "Compare the linear-size negativity against the full-state evaluation");
  std::size_t oc_n = 3, oc_trials = 20;
  unsigned oc_seed = 20260823;
  bool oc_full = false;
  oracle_cmd->add_option("--n", oc_n, "Detector count (2..12)");
  oracle_cmd->add_option("--trials", oc_trials, "Random systems to draw");
  oracle_cmd->add_option("--seed", oc_seed, "Random seed");
  oracle_cmd->add_flag("--full-precision", oc_full, "Full double precision");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  try {
    if (elements_cmd->parsed())
      return run_elements(el_switching, el_delta, el_omega, el_x, el_t,
                          el_lambda, el_full);
    if (sweep_cmd->parsed())
      return run_sweep_cmd(sweep_opts, sweep_family, sweep_axes, sweep_refine);
    if (opt_cmd->parsed())
      return run_optimize_cmd(opt_opts, opt_family, opt_box);
    if (chain_cmd->parsed())
      return run_chain_cmd(chain_opts, chain_max_n, chain_lo, chain_hi,
                           chain_count);
    if (scale_cmd->parsed())
      return run_scale_cmd(scale_opts, scale_bases, scale_lo, scale_hi,
                           scale_count);
    if (sw_cmd->parsed())
      return run_switching_cmd(sw_opts, sw_families, sw_deltas, sw_lo, sw_hi,
                               sw_count);
    if (oracle_cmd->parsed())
      return run_oracle_cmd(oc_n, oc_trials, oc_seed, oc_full);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return kExitConfigError;
}
