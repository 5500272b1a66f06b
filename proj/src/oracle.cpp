#include "harvest/oracle.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

#include "detail.hpp"

namespace harvest {

namespace {

// Sector rank in the block ordering: one-excitation, vacuum, then ascending
// excitation number.
int sector_rank(unsigned mask) {
  const int pc = std::popcount(mask);
  if (pc == 1) return 0;
  if (pc == 0) return 1;
  return pc;
}

std::vector<std::size_t> basis_map(std::size_t n) {
  const std::size_t dim = std::size_t{1} << n;
  std::vector<unsigned> order(dim);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [](unsigned a, unsigned b) {
    const int ra = sector_rank(a), rb = sector_rank(b);
    return ra != rb ? ra < rb : a < b;
  });
  std::vector<std::size_t> pos(dim);
  for (std::size_t k = 0; k < dim; ++k) pos[order[k]] = k;
  return pos;
}

unsigned detector_mask(std::size_t det, std::size_t n) {
  return 1u << (n - det);  // detector 1 = most significant bit
}

}  // namespace

std::size_t basis_position(unsigned mask, std::size_t n) {
  if (n == 0 || n > 14 || mask >= (1u << n))
    throw std::invalid_argument("basis_position: bad mask or size");
  return basis_map(n)[mask];
}

FullState assemble_full(const DetectorSystem& sys) {
  const std::size_t n = sys.positions.size();
  if (n > 14)
    throw std::invalid_argument("assemble_full: N <= 14 (memory guard)");
  const auto table = detail::build_pair_table(sys);
  const auto pos = basis_map(n);
  const std::size_t dim = std::size_t{1} << n;

  FullState st;
  st.n = n;
  st.n_a = sys.n_a;
  st.matrix = Eigen::MatrixXcd::Zero(dim, dim);
  auto& m = st.matrix;

  for (std::size_t d = 1; d <= n; ++d) {
    const auto k = pos[detector_mask(d, n)];
    m(k, k) = table.p;
  }
  m(pos[0], pos[0]) = 1.0 - double(n) * table.p;

  for (std::size_t i = 2; i <= n; ++i)
    for (std::size_t j = 1; j < i; ++j) {
      const auto& e = table.at(i - 1, j - 1);
      const auto pi = pos[detector_mask(i, n)], pj = pos[detector_mask(j, n)];
      // One-excitation sector: |state j><state i| carries C_ij for every
      // pair class.
      m(pj, pi) = e.C();
      m(pi, pj) = std::conj(e.C());
      // Two-excitation column: |both i and j><vacuum| carries X_ij.
      const auto p2 = pos[detector_mask(i, n) | detector_mask(j, n)];
      m(p2, pos[0]) = e.X();
      m(pos[0], p2) = std::conj(e.X());
    }
  return st;
}

Eigen::MatrixXcd partial_transpose_b(const FullState& state) {
  const std::size_t n = state.n, dim = std::size_t{1} << n;
  if (state.matrix.rows() != Eigen::Index(dim) ||
      state.matrix.cols() != Eigen::Index(dim) || state.n_a == 0 ||
      state.n_a >= n)
    throw std::invalid_argument("partial_transpose_b: inconsistent state");
  // B detectors n_a+1..n occupy the low n - n_a bits.
  const unsigned b_mask = (1u << (n - state.n_a)) - 1u;
  const auto pos = basis_map(n);
  Eigen::MatrixXcd out(dim, dim);
  for (unsigned r = 0; r < dim; ++r)
    for (unsigned c = 0; c < dim; ++c)
      out(pos[(r & ~b_mask) | (c & b_mask)],
          pos[(c & ~b_mask) | (r & b_mask)]) = state.matrix(pos[r], pos[c]);
  return out;
}

double negativity_full(const Eigen::MatrixXcd& pt_matrix) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pt_matrix,
                                                     Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("negativity_full: eigensolver failed");
  const auto& ev = es.eigenvalues();
  const double norm =
      std::max(std::fabs(ev(0)), std::fabs(ev(ev.size() - 1)));
  double value = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) < -1e-14 * norm) value -= ev(i);
  return value;
}

AdditivityReport additivity_check(const std::vector<DetectorSystem>& systems) {
  if (systems.empty())
    throw std::invalid_argument("additivity_check: no systems");
  std::size_t n_total = 0;
  for (const auto& s : systems) n_total += s.positions.size();
  if (n_total > 12)
    throw std::invalid_argument(
        "additivity_check: total detector count <= 12 (memory guard)");

  AdditivityReport rep;
  // The partial transpose over the union of the B subsystems factorizes, so
  // the product state's PT is the Kronecker product of the factors' PTs.
  Eigen::MatrixXcd prod = Eigen::MatrixXcd::Identity(1, 1);
  for (const auto& s : systems) {
    const Eigen::MatrixXcd pt = partial_transpose_b(assemble_full(s));
    rep.parts.push_back(negativity_full(pt));
    Eigen::MatrixXcd next(prod.rows() * pt.rows(), prod.cols() * pt.cols());
    for (Eigen::Index i = 0; i < prod.rows(); ++i)
      for (Eigen::Index j = 0; j < prod.cols(); ++j)
        next.block(i * pt.rows(), j * pt.cols(), pt.rows(), pt.cols()) =
            prod(i, j) * pt;
    prod = std::move(next);
  }
  rep.product_value = negativity_full(prod);
  double identity = 1.0;
  for (double v : rep.parts) identity *= 2.0 * v + 1.0;
  rep.exact_identity = 0.5 * (identity - 1.0);
  rep.sum_parts = std::accumulate(rep.parts.begin(), rep.parts.end(), 0.0);
  return rep;
}

}  // namespace harvest
