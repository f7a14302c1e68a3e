#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "cheegerlab/geometry.hpp"

namespace cheegerlab::detail {

inline double pow_abs(double x, double p) {
  const double a = std::abs(x);
  return p == 2.0 ? a * a : std::pow(a, p);
}

/// Forward differences in unit spacing over a set of unknowns.
///
/// Each entry is one cell of the (padded) grid carrying the pair of
/// differences u[xn] - u[self] and u[yn] - u[self]; -1 stands for a
/// Dirichlet zero. The 1-D variant only uses the x slot.
struct DifferenceStencil {
  std::size_t unknowns = 0;
  bool planar = true;
  std::vector<std::array<int, 3>> cells;  // self, x neighbour, y neighbour

  /// sum_c |D u|_c^p
  double energy(std::span<const double> u, double p) const;
  /// Same value; writes its gradient into grad (overwritten).
  double energy_gradient(std::span<const double> u, double p, std::span<double> grad) const;
  /// D^T D, the unit-spacing 5-point (or 3-point) Dirichlet Laplacian.
  Eigen::SparseMatrix<double> laplacian() const;
};

/// Unknowns are the mask cells in storage order.
struct MaskIndexing {
  std::vector<int> cell_to_unknown;         // -1 off the mask
  std::vector<std::size_t> unknown_to_cell;
};

MaskIndexing index_mask(const DomainMask& mask);
DifferenceStencil make_stencil(const DomainMask& mask, const MaskIndexing& idx);
DifferenceStencil make_stencil_1d(int n);

/// Sparse Cholesky of the stencil Laplacian; the descent preconditioner.
class LaplacianPreconditioner {
 public:
  explicit LaplacianPreconditioner(const DifferenceStencil& stencil);
  void apply(std::span<const double> g, std::span<double> z) const;

 private:
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor_;
};

}  // namespace cheegerlab::detail
