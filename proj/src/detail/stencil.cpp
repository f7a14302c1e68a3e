#include "detail/stencil.hpp"

#include "cheegerlab/error.hpp"

namespace cheegerlab::detail {

namespace {

double value_at(std::span<const double> u, int k) { return k < 0 ? 0.0 : u[static_cast<std::size_t>(k)]; }

}  // namespace

double DifferenceStencil::energy(std::span<const double> u, double p) const {
  double sum = 0.0;
  for (const auto& c : cells) {
    const double s = value_at(u, c[0]);
    const double gx = value_at(u, c[1]) - s;
    const double gy = planar ? value_at(u, c[2]) - s : 0.0;
    const double n2 = gx * gx + gy * gy;
    sum += p == 2.0 ? n2 : std::pow(n2, 0.5 * p);
  }
  return sum;
}

double DifferenceStencil::energy_gradient(std::span<const double> u, double p, std::span<double> grad) const {
  std::fill(grad.begin(), grad.end(), 0.0);
  double sum = 0.0;
  for (const auto& c : cells) {
    const double s = value_at(u, c[0]);
    const double gx = value_at(u, c[1]) - s;
    const double gy = planar ? value_at(u, c[2]) - s : 0.0;
    const double n2 = gx * gx + gy * gy;
    if (n2 == 0.0) continue;
    double weight;  // p |g|^(p-2)
    if (p == 2.0) {
      sum += n2;
      weight = 2.0;
    } else {
      const double np = std::pow(n2, 0.5 * p);
      sum += np;
      weight = p * np / n2;
    }
    const double wx = weight * gx, wy = weight * gy;
    if (c[1] >= 0) grad[static_cast<std::size_t>(c[1])] += wx;
    if (planar && c[2] >= 0) grad[static_cast<std::size_t>(c[2])] += wy;
    if (c[0] >= 0) grad[static_cast<std::size_t>(c[0])] -= wx + wy;
  }
  return sum;
}

Eigen::SparseMatrix<double> DifferenceStencil::laplacian() const {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(cells.size() * 8);
  auto add_difference = [&](int a, int b) {
    // (u_b - u_a)^2 contributes [1 -1; -1 1] on (a, b); absent ends are zeros.
    if (a >= 0) triplets.emplace_back(a, a, 1.0);
    if (b >= 0) triplets.emplace_back(b, b, 1.0);
    if (a >= 0 && b >= 0) {
      triplets.emplace_back(a, b, -1.0);
      triplets.emplace_back(b, a, -1.0);
    }
  };
  for (const auto& c : cells) {
    if (c[0] >= 0 || c[1] >= 0) add_difference(c[0], c[1]);
    if (planar && (c[0] >= 0 || c[2] >= 0)) add_difference(c[0], c[2]);
  }
  const auto n = static_cast<Eigen::Index>(unknowns);
  Eigen::SparseMatrix<double> L(n, n);
  L.setFromTriplets(triplets.begin(), triplets.end());
  return L;
}

MaskIndexing index_mask(const DomainMask& mask) {
  MaskIndexing idx;
  idx.cell_to_unknown.assign(mask.size(), -1);
  for (std::size_t k = 0; k < mask.size(); ++k) {
    if (!mask.at(k)) continue;
    idx.cell_to_unknown[k] = static_cast<int>(idx.unknown_to_cell.size());
    idx.unknown_to_cell.push_back(k);
  }
  return idx;
}

DifferenceStencil make_stencil(const DomainMask& mask, const MaskIndexing& idx) {
  const int nx = mask.nx(), ny = mask.ny();
  auto unknown = [&](int i, int j) -> int {
    if (i < 0 || j < 0 || i >= nx || j >= ny) return -1;
    return idx.cell_to_unknown[static_cast<std::size_t>(i) + static_cast<std::size_t>(nx) * j];
  };
  DifferenceStencil s;
  s.unknowns = idx.unknown_to_cell.size();
  // Row -1 and column -1 carry the differences entering the first cells.
  for (int j = -1; j < ny; ++j) {
    for (int i = -1; i < nx; ++i) {
      const std::array<int, 3> c{unknown(i, j), unknown(i + 1, j), unknown(i, j + 1)};
      if (c[0] >= 0 || c[1] >= 0 || c[2] >= 0) s.cells.push_back(c);
    }
  }
  return s;
}

DifferenceStencil make_stencil_1d(int n) {
  DifferenceStencil s;
  s.unknowns = static_cast<std::size_t>(n);
  s.planar = false;
  for (int k = 0; k <= n; ++k) s.cells.push_back({k - 1, k < n ? k : -1, -1});
  return s;
}

LaplacianPreconditioner::LaplacianPreconditioner(const DifferenceStencil& stencil) {
  factor_.compute(stencil.laplacian());
  if (factor_.info() != Eigen::Success) throw SolverError("Laplacian factorization failed");
}

void LaplacianPreconditioner::apply(std::span<const double> g, std::span<double> z) const {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::Map<const Eigen::VectorXd> gv(g.data(), n);
  Eigen::Map<Eigen::VectorXd> zv(z.data(), n);
  zv = factor_.solve(gv);
}

}  // namespace cheegerlab::detail
