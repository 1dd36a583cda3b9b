#include "ddsplit/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "ddsplit/errors.hpp"
#include "format.hpp"

namespace ddsplit {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets)
    : rows_(rows), cols_(cols) {
  for (const Triplet& t : triplets) {
    if (t.row >= rows || t.col >= cols) throw ConfigError("sparse triplet out of range");
  }
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  row_ptr_.assign(rows + 1, 0);
  col_idx_.reserve(triplets.size());
  values_.reserve(triplets.size());
  std::size_t k = 0;
  while (k < triplets.size()) {
    const std::size_t r = triplets[k].row;
    const std::size_t c = triplets[k].col;
    double v = 0.0;
    for (; k < triplets.size() && triplets[k].row == r && triplets[k].col == c; ++k) {
      v += triplets[k].value;
    }
    if (v != 0.0) {
      col_idx_.push_back(c);
      values_.push_back(v);
      ++row_ptr_[r + 1];
    }
  }
  for (std::size_t r = 0; r < rows; ++r) row_ptr_[r + 1] += row_ptr_[r];
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<Triplet> t;
  t.reserve(n);
  for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return SparseMatrix(n, n, std::move(t));
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> out) const {
  for (std::size_t r = 0; r < rows_; ++r) {
    double sum = 0.0;
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) sum += values_[k] * x[col_idx_[k]];
    out[r] = sum;
  }
}

void SparseMatrix::multiply_transpose(std::span<const double> x, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) out[col_idx_[k]] += values_[k] * x[r];
  }
}

double SparseMatrix::entry(std::size_t row, std::size_t col) const {
  const auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row]);
  const auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row + 1]);
  const auto it = std::lower_bound(first, last, col);
  if (it == last || *it != col) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

std::vector<Triplet> SparseMatrix::triplets() const {
  std::vector<Triplet> t;
  t.reserve(values_.size());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) t.push_back({r, col_idx_[k], values_[k]});
  }
  return t;
}

SparseMatrix SparseMatrix::transpose() const {
  auto t = triplets();
  for (Triplet& e : t) std::swap(e.row, e.col);
  return SparseMatrix(cols_, rows_, std::move(t));
}

std::vector<double> SparseMatrix::dense() const {
  std::vector<double> d(rows_ * cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) d[r * cols_ + col_idx_[k]] = values_[k];
  }
  return d;
}

SparseMatrix combine(double a, const SparseMatrix& A, double b, const SparseMatrix& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) throw ConfigError("matrix shape mismatch");
  auto t = A.triplets();
  for (Triplet& e : t) e.value *= a;
  for (Triplet e : B.triplets()) {
    e.value *= b;
    t.push_back(e);
  }
  return SparseMatrix(A.rows(), A.cols(), std::move(t));
}

double max_abs_difference(const SparseMatrix& A, const SparseMatrix& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) throw ConfigError("matrix shape mismatch");
  double m = 0.0;
  for (const Triplet& e : A.triplets()) m = std::max(m, std::abs(e.value - B.entry(e.row, e.col)));
  for (const Triplet& e : B.triplets()) m = std::max(m, std::abs(e.value - A.entry(e.row, e.col)));
  return m;
}

void write_coordinate_list(std::ostream& out, const SparseMatrix& m) {
  for (const Triplet& e : m.triplets()) out << e.row << ' ' << e.col << ' ' << fmt17(e.value) << '\n';
}

}  // namespace ddsplit
