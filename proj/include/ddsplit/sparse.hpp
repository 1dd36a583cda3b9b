#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace ddsplit {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

// Compressed sparse row matrix. Column indices are sorted within each row and
// duplicate triplets are summed on construction; exact zeros are dropped.
class SparseMatrix {
public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);

  static SparseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nonzeros() const { return values_.size(); }

  std::span<const std::size_t> row_offsets() const { return row_ptr_; }
  std::span<const std::size_t> column_indices() const { return col_idx_; }
  std::span<const double> values() const { return values_; }

  // out = M x
  void multiply(std::span<const double> x, std::span<double> out) const;
  // out = M^T x
  void multiply_transpose(std::span<const double> x, std::span<double> out) const;

  double entry(std::size_t row, std::size_t col) const;
  double max_abs() const;

  SparseMatrix transpose() const;
  std::vector<Triplet> triplets() const;
  // Row-major dense copy, for oracles and small-grid dumps.
  std::vector<double> dense() const;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

// a * A + b * B
SparseMatrix combine(double a, const SparseMatrix& A, double b, const SparseMatrix& B);

// max |A_ij - B_ij| over the union of both patterns.
double max_abs_difference(const SparseMatrix& A, const SparseMatrix& B);

// Coordinate list `row col value`, sorted by (row, col), 17 significant digits.
void write_coordinate_list(std::ostream& out, const SparseMatrix& m);

}  // namespace ddsplit
