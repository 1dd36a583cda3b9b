#include "ddsplit/grid.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "ddsplit/errors.hpp"
#include "format.hpp"

namespace ddsplit {

Grid Grid::build(int cells1, int cells2, double length1, double length2) {
  if (cells1 < 2 || cells2 < 2) {
    throw ConfigError("grid needs at least 2 cells per axis, got " + std::to_string(cells1) +
                      "x" + std::to_string(cells2));
  }
  if (!(length1 > 0.0) || !(length2 > 0.0) || !std::isfinite(length1) ||
      !std::isfinite(length2)) {
    throw ConfigError("grid lengths must be positive and finite");
  }
  return Grid(cells1, cells2, length1, length2);
}

std::size_t Grid::edge_count(Axis a) const {
  const auto n1 = static_cast<std::size_t>(n1_);
  const auto n2 = static_cast<std::size_t>(n2_);
  return a == Axis::X1 ? n1 * (n2 - 1) : (n1 - 1) * n2;
}

std::size_t Grid::edge_index(Axis a, int head1, int head2) const {
  if (a == Axis::X1) {
    return static_cast<std::size_t>(head2 - 1) * static_cast<std::size_t>(n1_) +
           static_cast<std::size_t>(head1 - 1);
  }
  return edge_count(Axis::X1) +
         static_cast<std::size_t>(head2 - 1) * static_cast<std::size_t>(n1_ - 1) +
         static_cast<std::size_t>(head1 - 1);
}

Grid::Edge Grid::edge(std::size_t e) const {
  const std::size_t first = edge_count(Axis::X1);
  if (e < first) {
    const auto row = static_cast<std::size_t>(n1_);
    return {Axis::X1, static_cast<int>(e % row) + 1, static_cast<int>(e / row) + 1};
  }
  e -= first;
  const auto row = static_cast<std::size_t>(n1_ - 1);
  return {Axis::X2, static_cast<int>(e % row) + 1, static_cast<int>(e / row) + 1};
}

GridFunction::GridFunction(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.interior_count()) {
    throw ConfigError("grid function has " + std::to_string(values_.size()) +
                      " values, grid has " + std::to_string(grid_.interior_count()) +
                      " interior nodes");
  }
}

GridFunction GridFunction::sample(const Grid& grid,
                                  const std::function<double(double, double)>& f) {
  GridFunction y(grid);
  for (int i2 = 1; i2 < grid.cells(Axis::X2); ++i2) {
    for (int i1 = 1; i1 < grid.cells(Axis::X1); ++i1) {
      y.values_[grid.index(i1, i2)] = f(grid.x1(i1), grid.x2(i2));
    }
  }
  return y;
}

namespace {

void require_same_grid(const GridFunction& a, const GridFunction& b) {
  if (!(a.grid() == b.grid())) {
    throw ConfigError("grid functions live on different grids");
  }
}

}  // namespace

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b);
  GridFunction r(a);
  for (std::size_t k = 0; k < r.size(); ++k) r[k] += b[k];
  return r;
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b);
  GridFunction r(a);
  for (std::size_t k = 0; k < r.size(); ++k) r[k] -= b[k];
  return r;
}

GridFunction operator*(double s, const GridFunction& a) {
  GridFunction r(a);
  for (std::size_t k = 0; k < r.size(); ++k) r[k] *= s;
  return r;
}

double inner_product(const GridFunction& y, const GridFunction& w) {
  require_same_grid(y, w);
  double sum = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) sum += y[k] * w[k];
  return sum * y.grid().cell_measure();
}

double norm(const GridFunction& y) { return std::sqrt(inner_product(y, y)); }

double max_abs(const GridFunction& y) {
  double m = 0.0;
  for (double v : y.values()) m = std::max(m, std::abs(v));
  return m;
}

GridFunction sample_exact(const Grid& grid, double t, int n1, int n2) {
  if (grid.length(Axis::X1) != 1.0 || grid.length(Axis::X2) != 1.0) {
    throw ConfigError("exact solution is defined on the unit square only");
  }
  if (n1 < 1 || n2 < 1) throw ConfigError("mode numbers must be natural numbers");
  if (!(t >= 0.0)) throw ConfigError("time must be nonnegative");
  using std::numbers::pi;
  const double decay = std::exp(-pi * pi * (n1 * n1 + n2 * n2) * t);
  return GridFunction::sample(grid, [&](double x1, double x2) {
    return std::sin(n1 * pi * x1) * std::sin(n2 * pi * x2) * decay;
  });
}

void write_field_csv(std::ostream& out, const GridFunction& y) {
  const Grid& g = y.grid();
  out << "i1,i2,x1,x2,value\n";
  for (int i2 = 1; i2 < g.cells(Axis::X2); ++i2) {
    for (int i1 = 1; i1 < g.cells(Axis::X1); ++i1) {
      out << i1 << ',' << i2 << ',' << fmt17(g.x1(i1)) << ',' << fmt17(g.x2(i2)) << ','
          << fmt17(y.at(i1, i2)) << '\n';
    }
  }
}

}  // namespace ddsplit
