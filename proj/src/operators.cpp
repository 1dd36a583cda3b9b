#include "ddsplit/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ddsplit/errors.hpp"

namespace ddsplit {

const char* to_string(Symmetry s) {
  switch (s) {
    case Symmetry::Symmetric: return "symmetric";
    case Symmetry::Skew: return "skew";
    case Symmetry::General: return "general";
  }
  return "?";
}

namespace {

// max |M - sign * M^T| relative to max |M|
double asymmetry(const SparseMatrix& m, double sign) {
  const double scale = m.max_abs();
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (const Triplet& e : m.triplets()) {
    worst = std::max(worst, std::abs(e.value - sign * m.entry(e.col, e.row)));
  }
  return worst / scale;
}

}  // namespace

LinearGridOperator::LinearGridOperator(const Grid& grid, SparseMatrix matrix, Symmetry tag)
    : grid_(grid), matrix_(std::move(matrix)), tag_(tag) {
  const std::size_t n = grid_.interior_count();
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw ConfigError("operator is " + std::to_string(matrix_.rows()) + "x" +
                      std::to_string(matrix_.cols()) + ", grid has " + std::to_string(n) +
                      " interior nodes");
  }
  if (tag_ == Symmetry::Symmetric && asymmetry(matrix_, 1.0) > kSymmetryTolerance) {
    throw ConfigError("operator tagged symmetric is not symmetric");
  }
  if (tag_ == Symmetry::Skew && asymmetry(matrix_, -1.0) > kSymmetryTolerance) {
    throw ConfigError("operator tagged skew is not skew-symmetric");
  }
}

LinearGridOperator LinearGridOperator::with_inferred_symmetry(const Grid& grid, SparseMatrix matrix) {
  Symmetry tag = Symmetry::General;
  if (matrix.rows() == matrix.cols()) {
    if (asymmetry(matrix, 1.0) <= kSymmetryTolerance) {
      tag = Symmetry::Symmetric;
    } else if (asymmetry(matrix, -1.0) <= kSymmetryTolerance) {
      tag = Symmetry::Skew;
    }
  }
  return LinearGridOperator(grid, std::move(matrix), tag);
}

LinearGridOperator LinearGridOperator::zero(const Grid& grid, Symmetry tag) {
  const std::size_t n = grid.interior_count();
  return LinearGridOperator(grid, SparseMatrix(n, n, {}), tag);
}

GridFunction LinearGridOperator::apply(const GridFunction& y) const {
  if (!(y.grid() == grid_)) throw ConfigError("operand lives on a different grid");
  GridFunction out(grid_);
  matrix_.multiply(y.values(), out.values());
  return out;
}

LinearGridOperator operator+(const LinearGridOperator& a, const LinearGridOperator& b) {
  if (!(a.grid() == b.grid())) throw ConfigError("operators live on different grids");
  return LinearGridOperator::with_inferred_symmetry(a.grid(), combine(1.0, a.matrix(), 1.0, b.matrix()));
}

EdgeOperator::EdgeOperator(const Grid& grid, SparseMatrix matrix)
    : grid_(grid), matrix_(std::move(matrix)) {
  if (matrix_.rows() != grid_.edge_count() || matrix_.cols() != grid_.interior_count()) {
    throw ConfigError("edge operator shape does not match grid");
  }
}

std::vector<double> EdgeOperator::apply(const GridFunction& y) const {
  if (!(y.grid() == grid_)) throw ConfigError("operand lives on a different grid");
  std::vector<double> out(matrix_.rows());
  matrix_.multiply(y.values(), out);
  return out;
}

GridFunction EdgeOperator::apply_adjoint(std::span<const double> edge_values) const {
  if (edge_values.size() != matrix_.rows()) throw ConfigError("edge function has wrong length");
  GridFunction out(grid_);
  matrix_.multiply_transpose(edge_values, out.values());
  return out;
}

LinearGridOperator EdgeOperator::weighted_gram(std::span<const double> edge_weights) const {
  if (edge_weights.size() != matrix_.rows()) throw ConfigError("edge weights have wrong length");
  // Each edge row has at most two entries, so G^T W G is accumulated edge by edge.
  std::vector<Triplet> t;
  t.reserve(4 * matrix_.rows());
  const auto ptr = matrix_.row_offsets();
  const auto col = matrix_.column_indices();
  const auto val = matrix_.values();
  for (std::size_t e = 0; e < matrix_.rows(); ++e) {
    const double w = edge_weights[e];
    if (w < 0.0) throw ConfigError("negative edge weight");
    if (w == 0.0) continue;
    for (std::size_t a = ptr[e]; a < ptr[e + 1]; ++a) {
      for (std::size_t b = ptr[e]; b < ptr[e + 1]; ++b) {
        t.push_back({col[a], col[b], val[a] * w * val[b]});
      }
    }
  }
  const std::size_t n = grid_.interior_count();
  return LinearGridOperator(grid_, SparseMatrix(n, n, std::move(t)), Symmetry::Symmetric);
}

LinearGridOperator EdgeOperator::gram() const {
  return weighted_gram(std::vector<double>(matrix_.rows(), 1.0));
}

NodalField::NodalField(const Grid& grid, std::vector<double> values)
    : cells1_(grid.cells(Axis::X1)), values_(std::move(values)) {
  const auto expected = static_cast<std::size_t>(grid.cells(Axis::X1) + 1) *
                        static_cast<std::size_t>(grid.cells(Axis::X2) + 1);
  if (values_.size() != expected) {
    throw ConfigError("nodal field has " + std::to_string(values_.size()) + " values, expected " +
                      std::to_string(expected));
  }
}

NodalField NodalField::constant(const Grid& grid, double value) {
  const auto n = static_cast<std::size_t>(grid.cells(Axis::X1) + 1) *
                 static_cast<std::size_t>(grid.cells(Axis::X2) + 1);
  return NodalField(grid, std::vector<double>(n, value));
}

LinearGridOperator assemble_laplacian(const Grid& grid) {
  const double c1 = 1.0 / (grid.h1() * grid.h1());
  const double c2 = 1.0 / (grid.h2() * grid.h2());
  const int n1 = grid.cells(Axis::X1);
  const int n2 = grid.cells(Axis::X2);
  std::vector<Triplet> t;
  t.reserve(5 * grid.interior_count());
  for (int i2 = 1; i2 < n2; ++i2) {
    for (int i1 = 1; i1 < n1; ++i1) {
      const std::size_t r = grid.index(i1, i2);
      t.push_back({r, r, 2.0 * c1 + 2.0 * c2});
      if (i1 > 1) t.push_back({r, grid.index(i1 - 1, i2), -c1});
      if (i1 < n1 - 1) t.push_back({r, grid.index(i1 + 1, i2), -c1});
      if (i2 > 1) t.push_back({r, grid.index(i1, i2 - 1), -c2});
      if (i2 < n2 - 1) t.push_back({r, grid.index(i1, i2 + 1), -c2});
    }
  }
  const std::size_t n = grid.interior_count();
  return LinearGridOperator(grid, SparseMatrix(n, n, std::move(t)), Symmetry::Symmetric);
}

LinearGridOperator assemble_convection(const Grid& grid, const NodalField& v1, const NodalField& v2) {
  const auto nodes = static_cast<std::size_t>(grid.cells(Axis::X1) + 1) *
                     static_cast<std::size_t>(grid.cells(Axis::X2) + 1);
  if (v1.size() != nodes || v2.size() != nodes) {
    throw ConfigError("velocity field does not match grid");
  }
  const int n1 = grid.cells(Axis::X1);
  const int n2 = grid.cells(Axis::X2);
  const double d1 = 1.0 / (4.0 * grid.h1());
  const double d2 = 1.0 / (4.0 * grid.h2());
  std::vector<Triplet> t;
  t.reserve(4 * grid.interior_count());
  // Row x, neighbour x +- h e_a: +-(v(x +- h e_a) + v(x)) / (4 h_a). The coefficient
  // of the pair (x, x + h e_a) is the negative of (x + h e_a, x), so C^T = -C.
  for (int i2 = 1; i2 < n2; ++i2) {
    for (int i1 = 1; i1 < n1; ++i1) {
      const std::size_t r = grid.index(i1, i2);
      if (i1 < n1 - 1) t.push_back({r, grid.index(i1 + 1, i2), (v1.at(i1 + 1, i2) + v1.at(i1, i2)) * d1});
      if (i1 > 1) t.push_back({r, grid.index(i1 - 1, i2), -(v1.at(i1 - 1, i2) + v1.at(i1, i2)) * d1});
      if (i2 < n2 - 1) t.push_back({r, grid.index(i1, i2 + 1), (v2.at(i1, i2 + 1) + v2.at(i1, i2)) * d2});
      if (i2 > 1) t.push_back({r, grid.index(i1, i2 - 1), -(v2.at(i1, i2 - 1) + v2.at(i1, i2)) * d2});
    }
  }
  const std::size_t n = grid.interior_count();
  return LinearGridOperator(grid, SparseMatrix(n, n, std::move(t)), Symmetry::Skew);
}

SymmetricSkewParts split_symmetric_skew(const LinearGridOperator& a) {
  const SparseMatrix at = a.matrix().transpose();
  return {
      LinearGridOperator(a.grid(), combine(0.5, a.matrix(), 0.5, at), Symmetry::Symmetric),
      LinearGridOperator(a.grid(), combine(0.5, a.matrix(), -0.5, at), Symmetry::Skew),
  };
}

EdgeOperator gradient_factorization(const Grid& grid, std::span<const double> edge_diffusivity) {
  if (edge_diffusivity.size() != grid.edge_count()) {
    throw ConfigError("diffusivity needs one value per edge");
  }
  std::vector<Triplet> t;
  t.reserve(2 * grid.edge_count());
  for (std::size_t e = 0; e < grid.edge_count(); ++e) {
    const double k = edge_diffusivity[e];
    if (!(k > 0.0)) throw ConfigError("diffusivity must be positive on every edge");
    const Grid::Edge edge = grid.edge(e);
    const double c = std::sqrt(k) / grid.step(edge.axis);
    const int tail1 = edge.axis == Axis::X1 ? edge.head1 - 1 : edge.head1;
    const int tail2 = edge.axis == Axis::X2 ? edge.head2 - 1 : edge.head2;
    if (grid.is_interior(edge.head1, edge.head2)) t.push_back({e, grid.index(edge.head1, edge.head2), c});
    if (grid.is_interior(tail1, tail2)) t.push_back({e, grid.index(tail1, tail2), -c});
  }
  return EdgeOperator(grid, SparseMatrix(grid.edge_count(), grid.interior_count(), std::move(t)));
}

EdgeOperator gradient_factorization(const Grid& grid) {
  return gradient_factorization(grid, std::vector<double>(grid.edge_count(), 1.0));
}

}  // namespace ddsplit
