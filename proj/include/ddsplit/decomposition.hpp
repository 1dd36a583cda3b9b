#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ddsplit/grid.hpp"
#include "ddsplit/operators.hpp"

namespace ddsplit {

// Shape of the overlap ramp between neighbouring strips.
//   IntegerNode: edges 1 | 0 across one cell, node on the interface gets 1/2.
//   HalfInteger: ramp over two cells centred on a half-integer point; the
//                interface edge gets 1/2, its neighbour nodes 3/4 and 1/4.
//   Wide3h:      ramp over three cells centred on a node; edges 2/3 and 1/3.
enum class OverlapVariant { IntegerNode, HalfInteger, Wide3h };

const char* to_string(OverlapVariant v);
OverlapVariant parse_overlap(const std::string& name);

// Ramp length in cells.
int ramp_width(OverlapVariant v);

struct DecompositionSpec {
  Axis axis = Axis::X1;
  int strip_count = 4;
  int group_count = 2;
  OverlapVariant overlap = OverlapVariant::IntegerNode;
  // Node indices along `axis`, one per interface, strictly increasing. For
  // HalfInteger the ramp is centred at index + 1/2.
  std::vector<int> interfaces;

  // Interfaces at round-down(k * N / strip_count), k = 1..strip_count-1.
  static DecompositionSpec equal_strips(const Grid& grid, Axis axis, int strip_count,
                                        int group_count, OverlapVariant overlap);
};

// Node weights chi_a and edge weights chi~_a of each group a = 0..p-1. Strip s
// belongs to group s mod p.
class PartitionOfUnity {
public:
  PartitionOfUnity(const Grid& grid, DecompositionSpec spec, std::vector<std::vector<double>> node_weights,
                   std::vector<std::vector<double>> edge_weights);

  const Grid& grid() const { return grid_; }
  const DecompositionSpec& spec() const { return spec_; }
  int group_count() const { return static_cast<int>(node_weights_.size()); }
  std::span<const double> node_weights(int group) const { return node_weights_.at(static_cast<std::size_t>(group)); }
  std::span<const double> edge_weights(int group) const { return edge_weights_.at(static_cast<std::size_t>(group)); }

private:
  Grid grid_;
  DecompositionSpec spec_;
  std::vector<std::vector<double>> node_weights_;
  std::vector<std::vector<double>> edge_weights_;
};

PartitionOfUnity build_partition(const Grid& grid, const DecompositionSpec& spec);

// chi == 1 everywhere, a single group.
PartitionOfUnity trivial_partition(const Grid& grid);

// D_a = G^T diag(chi~_a) G
std::vector<LinearGridOperator> decompose_diffusion(const EdgeOperator& gradient, const PartitionOfUnity& pou);

// C_a = (diag(chi_a) C + C diag(chi_a)) / 2
std::vector<LinearGridOperator> decompose_skew(const LinearGridOperator& skew, const PartitionOfUnity& pou);

// A_a = D_a + C_a. Verifies sum_a A_a = D + C and x^T A_a x >= 0 on probe vectors.
std::vector<LinearGridOperator> decompose(const LinearGridOperator& symmetric, const LinearGridOperator& skew,
                                          const EdgeOperator& gradient, const PartitionOfUnity& pou);

// Per group: nodes with 0 < chi_a < 1, plus nodes outside the group's support
// that its stencil reads. Reporting only.
std::vector<std::size_t> interface_exchange_volume(const PartitionOfUnity& pou);

// `group,i1,i2,chi` and `group,axis,edge_i1,edge_i2,chi_tilde` (edge
// coordinates are midpoints in index units, e.g. 15.5). Groups are 1-based.
void write_partition_csv(std::ostream& nodes, std::ostream& edges, const PartitionOfUnity& pou);

}  // namespace ddsplit
