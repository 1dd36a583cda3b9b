#pragma once

#include <span>
#include <utility>
#include <vector>

#include "ddsplit/grid.hpp"
#include "ddsplit/sparse.hpp"

namespace ddsplit {

enum class Symmetry { Symmetric, Skew, General };

const char* to_string(Symmetry s);

// Relative tolerance used to validate symmetry tags.
inline constexpr double kSymmetryTolerance = 1e-13;

// Square sparse operator over the interior nodes of a grid. The symmetry tag is
// checked against the matrix when the operator is constructed.
class LinearGridOperator {
public:
  LinearGridOperator(const Grid& grid, SparseMatrix matrix, Symmetry tag);

  // Tags the matrix as Symmetric or Skew when it is, General otherwise.
  static LinearGridOperator with_inferred_symmetry(const Grid& grid, SparseMatrix matrix);
  static LinearGridOperator zero(const Grid& grid, Symmetry tag = Symmetry::Symmetric);

  const Grid& grid() const { return grid_; }
  const SparseMatrix& matrix() const { return matrix_; }
  Symmetry symmetry() const { return tag_; }
  std::size_t dimension() const { return matrix_.rows(); }

  void apply(std::span<const double> y, std::span<double> out) const { matrix_.multiply(y, out); }
  GridFunction apply(const GridFunction& y) const;

private:
  Grid grid_;
  SparseMatrix matrix_;
  Symmetry tag_;
};

LinearGridOperator operator+(const LinearGridOperator& a, const LinearGridOperator& b);

// Map from node functions to edge functions, G : H -> H~. Both spaces carry the
// same h1*h2 weight, so the adjoint is the matrix transpose.
class EdgeOperator {
public:
  EdgeOperator(const Grid& grid, SparseMatrix matrix);

  const Grid& grid() const { return grid_; }
  const SparseMatrix& matrix() const { return matrix_; }

  std::vector<double> apply(const GridFunction& y) const;
  GridFunction apply_adjoint(std::span<const double> edge_values) const;

  // G^T diag(weights) G, symmetric and nonnegative for weights >= 0.
  LinearGridOperator weighted_gram(std::span<const double> edge_weights) const;
  LinearGridOperator gram() const;

private:
  Grid grid_;
  SparseMatrix matrix_;
};

// Values at all (N1+1)(N2+1) grid nodes, boundary included, i1 fastest.
class NodalField {
public:
  NodalField(const Grid& grid, std::vector<double> values);
  static NodalField constant(const Grid& grid, double value);

  double at(int i1, int i2) const {
    return values_[static_cast<std::size_t>(i2) * static_cast<std::size_t>(cells1_ + 1) +
                   static_cast<std::size_t>(i1)];
  }
  std::size_t size() const { return values_.size(); }

private:
  int cells1_;
  std::vector<double> values_;
};

// Five-point Laplacian with homogeneous Dirichlet closure.
LinearGridOperator assemble_laplacian(const Grid& grid);

// Central convection operator in symmetric (half advective, half conservative)
// form; exactly skew-symmetric for any velocity field.
LinearGridOperator assemble_convection(const Grid& grid, const NodalField& v1, const NodalField& v2);

struct SymmetricSkewParts {
  LinearGridOperator symmetric;
  LinearGridOperator skew;
};

// A = D + C with D = (A + A^T)/2 and C = (A - A^T)/2.
SymmetricSkewParts split_symmetric_skew(const LinearGridOperator& a);

// G y on edge e = sqrt(k_e) (y_head - y_tail) / h_axis, boundary ends zero.
EdgeOperator gradient_factorization(const Grid& grid, std::span<const double> edge_diffusivity);
EdgeOperator gradient_factorization(const Grid& grid);

}  // namespace ddsplit
