#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace ddsplit {

enum class Axis { X1 = 0, X2 = 1 };

inline int axis_index(Axis a) { return static_cast<int>(a); }

// Uniform rectangular grid on [0,l1]x[0,l2] with N1 x N2 cells. Only interior
// nodes carry unknowns; boundary values are homogeneous Dirichlet.
//
// Interior nodes are numbered row-major with i1 fastest:
//   index(i1, i2) = (i2 - 1) * (N1 - 1) + (i1 - 1),  1 <= i_a <= N_a - 1.
//
// Edges (cell faces between neighbouring nodes with at least one interior end)
// are numbered axis-1 edges first, then axis-2 edges. An edge is identified by
// its head node (i1, i2); its tail is head - e_axis.
class Grid {
public:
  static Grid build(int cells1, int cells2, double length1, double length2);

  int cells(Axis a) const { return a == Axis::X1 ? n1_ : n2_; }
  double length(Axis a) const { return a == Axis::X1 ? l1_ : l2_; }
  double step(Axis a) const { return length(a) / cells(a); }
  double h1() const { return step(Axis::X1); }
  double h2() const { return step(Axis::X2); }
  double cell_measure() const { return h1() * h2(); }

  std::size_t interior_count() const {
    return static_cast<std::size_t>(n1_ - 1) * static_cast<std::size_t>(n2_ - 1);
  }
  std::size_t index(int i1, int i2) const {
    return static_cast<std::size_t>(i2 - 1) * static_cast<std::size_t>(n1_ - 1) +
           static_cast<std::size_t>(i1 - 1);
  }
  bool is_interior(int i1, int i2) const {
    return i1 >= 1 && i1 <= n1_ - 1 && i2 >= 1 && i2 <= n2_ - 1;
  }
  // Inverse of index(): node indices {i1, i2} of an interior slot.
  std::pair<int, int> node(std::size_t k) const {
    const auto row = static_cast<std::size_t>(n1_ - 1);
    return {static_cast<int>(k % row) + 1, static_cast<int>(k / row) + 1};
  }
  double x1(int i1) const { return i1 * h1(); }
  double x2(int i2) const { return i2 * h2(); }

  std::size_t edge_count(Axis a) const;
  std::size_t edge_count() const { return edge_count(Axis::X1) + edge_count(Axis::X2); }
  std::size_t edge_index(Axis a, int head1, int head2) const;

  struct Edge {
    Axis axis;
    int head1;
    int head2;
  };
  Edge edge(std::size_t e) const;

  bool operator==(const Grid&) const = default;

private:
  Grid(int n1, int n2, double l1, double l2) : n1_(n1), n2_(n2), l1_(l1), l2_(l2) {}

  int n1_;
  int n2_;
  double l1_;
  double l2_;
};

// Values at the interior nodes of a grid.
class GridFunction {
public:
  explicit GridFunction(const Grid& grid) : grid_(grid), values_(grid.interior_count(), 0.0) {}
  GridFunction(const Grid& grid, std::vector<double> values);

  static GridFunction sample(const Grid& grid, const std::function<double(double, double)>& f);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }
  double& operator[](std::size_t k) { return values_[k]; }
  double at(int i1, int i2) const { return values_[grid_.index(i1, i2)]; }

private:
  Grid grid_;
  std::vector<double> values_;
};

GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator*(double s, const GridFunction& a);

// (y, w) = sum over interior nodes of y w h1 h2.
double inner_product(const GridFunction& y, const GridFunction& w);
double norm(const GridFunction& y);
double max_abs(const GridFunction& y);

// sin(n1 pi x1) sin(n2 pi x2) exp(-pi^2 (n1^2 + n2^2) t) on the unit square.
GridFunction sample_exact(const Grid& grid, double t, int n1, int n2);

// CSV `i1,i2,x1,x2,value`, row-major, 17 significant digits.
void write_field_csv(std::ostream& out, const GridFunction& y);

}  // namespace ddsplit
