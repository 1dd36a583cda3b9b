#include "ddsplit/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "ddsplit/errors.hpp"
#include "format.hpp"

namespace ddsplit {

const char* to_string(OverlapVariant v) {
  switch (v) {
    case OverlapVariant::IntegerNode: return "integer";
    case OverlapVariant::HalfInteger: return "half";
    case OverlapVariant::Wide3h: return "wide3h";
  }
  return "?";
}

OverlapVariant parse_overlap(const std::string& name) {
  if (name == "integer") return OverlapVariant::IntegerNode;
  if (name == "half") return OverlapVariant::HalfInteger;
  if (name == "wide3h") return OverlapVariant::Wide3h;
  throw ConfigError("unknown overlap variant '" + name + "' (expected integer, half or wide3h)");
}

int ramp_width(OverlapVariant v) {
  switch (v) {
    case OverlapVariant::IntegerNode: return 1;
    case OverlapVariant::HalfInteger: return 2;
    case OverlapVariant::Wide3h: return 3;
  }
  return 0;
}

DecompositionSpec DecompositionSpec::equal_strips(const Grid& grid, Axis axis, int strip_count,
                                                  int group_count, OverlapVariant overlap) {
  DecompositionSpec spec;
  spec.axis = axis;
  spec.strip_count = strip_count;
  spec.group_count = group_count;
  spec.overlap = overlap;
  const int cells = grid.cells(axis);
  for (int k = 1; k < strip_count; ++k) spec.interfaces.push_back(k * cells / strip_count);
  return spec;
}

PartitionOfUnity::PartitionOfUnity(const Grid& grid, DecompositionSpec spec,
                                   std::vector<std::vector<double>> node_weights,
                                   std::vector<std::vector<double>> edge_weights)
    : grid_(grid), spec_(std::move(spec)), node_weights_(std::move(node_weights)),
      edge_weights_(std::move(edge_weights)) {
  if (node_weights_.empty() || node_weights_.size() != edge_weights_.size()) {
    throw ConfigError("partition needs matching node and edge weights for at least one group");
  }
  for (std::size_t a = 0; a < node_weights_.size(); ++a) {
    if (node_weights_[a].size() != grid_.interior_count() || edge_weights_[a].size() != grid_.edge_count()) {
      throw ConfigError("partition weights do not match grid");
    }
  }
}

namespace {

// Positions along the decomposition axis are measured in half cells so that
// nodes (2i), edge midpoints (2i - 1) and ramp ends are all integers.
struct Ramp {
  int centre;
  int half_width;
};

struct Share {
  int left_strip;
  double left;   // weight of left_strip
  double right;  // weight of left_strip + 1
};

Share share_at(int pos, std::span<const Ramp> ramps) {
  for (std::size_t k = 0; k < ramps.size(); ++k) {
    const Ramp& r = ramps[k];
    if (pos <= r.centre - r.half_width) return {static_cast<int>(k), 1.0, 0.0};
    if (pos < r.centre + r.half_width) {
      const int den = 2 * r.half_width;
      const int num = r.centre + r.half_width - pos;
      const double left = static_cast<double>(num) / den;
      return {static_cast<int>(k), left, static_cast<double>(den - num) / den};
    }
  }
  return {static_cast<int>(ramps.size()), 1.0, 0.0};
}

std::vector<Ramp> validated_ramps(const Grid& grid, const DecompositionSpec& spec) {
  if (spec.group_count < 1) throw ConfigError("group count must be at least 1");
  if (spec.strip_count < spec.group_count) {
    throw ConfigError("strip count " + std::to_string(spec.strip_count) + " is smaller than group count " +
                      std::to_string(spec.group_count));
  }
  if (spec.interfaces.size() != static_cast<std::size_t>(spec.strip_count - 1)) {
    throw ConfigError("expected " + std::to_string(spec.strip_count - 1) + " interface positions, got " +
                      std::to_string(spec.interfaces.size()));
  }
  const int cells = grid.cells(spec.axis);
  const int half_width = ramp_width(spec.overlap);  // in half cells
  const bool half_integer = spec.overlap == OverlapVariant::HalfInteger;
  std::vector<Ramp> ramps;
  for (int i : spec.interfaces) {
    const int lo = 1;
    const int hi = half_integer ? cells - 2 : cells - 1;
    if (i < lo || i > hi) {
      throw ConfigError("interface at node " + std::to_string(i) + " is outside the interior [" +
                        std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    const Ramp r{2 * i + (half_integer ? 1 : 0), half_width};
    if (!ramps.empty() && r.centre - r.half_width < ramps.back().centre + ramps.back().half_width) {
      throw ConfigError("interfaces " + std::to_string(ramps.back().centre / 2) + " and " + std::to_string(i) +
                        " are too close for " + to_string(spec.overlap) + " ramps of width " +
                        std::to_string(ramp_width(spec.overlap)));
    }
    ramps.push_back(r);
  }
  return ramps;
}

}  // namespace

PartitionOfUnity build_partition(const Grid& grid, const DecompositionSpec& spec) {
  const std::vector<Ramp> ramps = validated_ramps(grid, spec);
  const auto p = static_cast<std::size_t>(spec.group_count);
  std::vector<std::vector<double>> nodes(p, std::vector<double>(grid.interior_count(), 0.0));
  std::vector<std::vector<double>> edges(p, std::vector<double>(grid.edge_count(), 0.0));

  auto distribute = [&](std::vector<std::vector<double>>& w, std::size_t slot, int pos) {
    if (p == 1) {
      w[0][slot] = 1.0;
      return;
    }
    const Share s = share_at(pos, ramps);
    w[static_cast<std::size_t>(s.left_strip) % p][slot] += s.left;
    if (s.right != 0.0) w[static_cast<std::size_t>(s.left_strip + 1) % p][slot] += s.right;
  };

  const int a = axis_index(spec.axis);
  for (std::size_t k = 0; k < grid.interior_count(); ++k) {
    const auto [i1, i2] = grid.node(k);
    distribute(nodes, k, 2 * (a == 0 ? i1 : i2));
  }
  for (std::size_t e = 0; e < grid.edge_count(); ++e) {
    const Grid::Edge edge = grid.edge(e);
    const int head = a == 0 ? edge.head1 : edge.head2;
    // Edges along the decomposition axis sit at head - 1/2; transverse edges
    // share the axial position of their nodes.
    distribute(edges, e, edge.axis == spec.axis ? 2 * head - 1 : 2 * head);
  }
  return PartitionOfUnity(grid, spec, std::move(nodes), std::move(edges));
}

PartitionOfUnity trivial_partition(const Grid& grid) {
  DecompositionSpec spec;
  spec.strip_count = 1;
  spec.group_count = 1;
  return build_partition(grid, spec);
}

std::vector<LinearGridOperator> decompose_diffusion(const EdgeOperator& gradient, const PartitionOfUnity& pou) {
  if (!(gradient.grid() == pou.grid())) throw ConfigError("partition and gradient live on different grids");
  std::vector<LinearGridOperator> parts;
  for (int a = 0; a < pou.group_count(); ++a) parts.push_back(gradient.weighted_gram(pou.edge_weights(a)));
  return parts;
}

std::vector<LinearGridOperator> decompose_skew(const LinearGridOperator& skew, const PartitionOfUnity& pou) {
  if (!(skew.grid() == pou.grid())) throw ConfigError("partition and operator live on different grids");
  if (skew.symmetry() != Symmetry::Skew) throw ConfigError("skew decomposition needs a skew-tagged operator");
  const auto entries = skew.matrix().triplets();
  const std::size_t n = skew.dimension();
  std::vector<LinearGridOperator> parts;
  for (int a = 0; a < pou.group_count(); ++a) {
    const auto chi = pou.node_weights(a);
    std::vector<Triplet> t;
    t.reserve(entries.size());
    for (const Triplet& e : entries) t.push_back({e.row, e.col, e.value * (0.5 * (chi[e.row] + chi[e.col]))});
    parts.emplace_back(skew.grid(), SparseMatrix(n, n, std::move(t)), Symmetry::Skew);
  }
  return parts;
}

std::vector<LinearGridOperator> decompose(const LinearGridOperator& symmetric, const LinearGridOperator& skew,
                                          const EdgeOperator& gradient, const PartitionOfUnity& pou) {
  const auto d = decompose_diffusion(gradient, pou);
  const auto c = decompose_skew(skew, pou);
  std::vector<LinearGridOperator> parts;
  for (std::size_t a = 0; a < d.size(); ++a) parts.push_back(d[a] + c[a]);

  const SparseMatrix whole = combine(1.0, symmetric.matrix(), 1.0, skew.matrix());
  SparseMatrix sum(whole.rows(), whole.cols(), {});
  for (const auto& part : parts) sum = combine(1.0, sum, 1.0, part.matrix());
  if (max_abs_difference(sum, whole) > 1e-12 * whole.max_abs()) {
    throw ConfigError("decomposition operators do not sum to the problem operator");
  }

  std::mt19937_64 rng(20110112);
  std::normal_distribution<double> normal;
  std::vector<double> x(whole.rows()), ax(whole.rows());
  for (const auto& part : parts) {
    for (int probe = 0; probe < 8; ++probe) {
      double xx = 0.0;
      for (double& v : x) {
        v = normal(rng);
        xx += v * v;
      }
      part.apply(x, ax);
      double xax = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) xax += x[k] * ax[k];
      if (xax / xx < -1e-12 * std::max(1.0, part.matrix().max_abs())) {
        throw ConfigError("decomposition operator is not nonnegative");
      }
    }
  }
  return parts;
}

std::vector<std::size_t> interface_exchange_volume(const PartitionOfUnity& pou) {
  const Grid& grid = pou.grid();
  std::vector<std::size_t> counts;
  for (int a = 0; a < pou.group_count(); ++a) {
    const auto chi = pou.node_weights(a);
    const auto chi_edge = pou.edge_weights(a);
    std::vector<char> counted(grid.interior_count(), 0);
    for (std::size_t k = 0; k < chi.size(); ++k) counted[k] = chi[k] > 0.0 && chi[k] < 1.0;
    for (std::size_t e = 0; e < chi_edge.size(); ++e) {
      if (chi_edge[e] == 0.0) continue;
      const Grid::Edge edge = grid.edge(e);
      const int t1 = edge.axis == Axis::X1 ? edge.head1 - 1 : edge.head1;
      const int t2 = edge.axis == Axis::X2 ? edge.head2 - 1 : edge.head2;
      for (auto [i1, i2] : {std::pair{edge.head1, edge.head2}, std::pair{t1, t2}}) {
        if (grid.is_interior(i1, i2) && chi[grid.index(i1, i2)] == 0.0) counted[grid.index(i1, i2)] = 1;
      }
    }
    counts.push_back(static_cast<std::size_t>(std::count(counted.begin(), counted.end(), 1)));
  }
  return counts;
}

void write_partition_csv(std::ostream& nodes, std::ostream& edges, const PartitionOfUnity& pou) {
  const Grid& grid = pou.grid();
  nodes << "group,i1,i2,chi\n";
  edges << "group,axis,edge_i1,edge_i2,chi_tilde\n";
  for (int a = 0; a < pou.group_count(); ++a) {
    const auto chi = pou.node_weights(a);
    for (std::size_t k = 0; k < chi.size(); ++k) {
      const auto [i1, i2] = grid.node(k);
      nodes << a + 1 << ',' << i1 << ',' << i2 << ',' << fmt17(chi[k]) << '\n';
    }
    const auto chi_edge = pou.edge_weights(a);
    for (std::size_t e = 0; e < chi_edge.size(); ++e) {
      const Grid::Edge edge = grid.edge(e);
      const double m1 = edge.axis == Axis::X1 ? edge.head1 - 0.5 : edge.head1;
      const double m2 = edge.axis == Axis::X2 ? edge.head2 - 0.5 : edge.head2;
      edges << a + 1 << ',' << (edge.axis == Axis::X1 ? 1 : 2) << ',' << fmt17(m1) << ',' << fmt17(m2) << ','
            << fmt17(chi_edge[e]) << '\n';
    }
  }
}

}  // namespace ddsplit
