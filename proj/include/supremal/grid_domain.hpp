#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "supremal/core.hpp"

namespace supremal {

enum class Stencil {
  axis,  // 2-neighbor in 1-D, 4-neighbor in 2-D
  full,  // 8-neighbor in 2-D (default), same as axis in 1-D
};

/// Worst-case relative overestimation of euclidean lengths by grid paths.
double stencil_anisotropy(Stencil s, int dim);

struct DomainSpec {
  int dim = 1;
  std::array<std::array<double, 2>, 2> extent{{{0.0, 1.0}, {0.0, 1.0}}};
  double h = 0.1;
  std::vector<Box> obstacles;  // axis-aligned closed boxes removed from the domain
  Stencil stencil = Stencil::full;
};

struct StencilOffset {
  int dx = 0, dy = 0;
  double length = 0.0;  // euclidean, in units of h
};

/**
 * Discretized bounded open set: the nodes strictly inside the extent minus the
 * obstacle boxes, with an axis-aligned (optionally diagonal) neighbor stencil.
 *
 * Construction rejects an empty or disconnected node graph. Immutable after
 * construction; all queries are const and reentrant.
 */
class GridDomain {
 public:
  static GridDomain build(const DomainSpec& spec);

  int dim() const { return spec_.dim; }
  double h() const { return spec_.h; }
  Stencil stencil() const { return spec_.stencil; }
  const DomainSpec& spec() const { return spec_; }

  int shape(int axis) const { return shape_[axis]; }
  int node_count() const { return shape_[0] * shape_[1]; }
  bool masked(int node) const { return mask_[static_cast<size_t>(node)] != 0; }
  const std::vector<int>& masked_nodes() const { return masked_nodes_; }

  Vec2 coords(int node) const;
  int node_index(int ix, int iy) const { return ix + shape_[0] * iy; }
  /// Nearest node to p if it is on the lattice and masked.
  std::optional<int> node_at(const Vec2& p) const;

  const std::vector<StencilOffset>& offsets() const { return offsets_; }
  /// Neighbor of `node` along `off`, or -1 when off-grid or unmasked.
  int neighbor(int node, const StencilOffset& off) const;

  // Cells carry one forward-difference gradient each. A cell is interior when
  // its base node and the forward neighbors along every axis are masked.
  int cell_count() const { return static_cast<int>(cell_base_.size()); }
  int cell_base(int cell) const { return cell_base_[static_cast<size_t>(cell)]; }
  Vec2 cell_center(int cell) const;
  /// Cell index whose base node is `node`, or -1.
  int cell_at_node(int node) const { return node_to_cell_[static_cast<size_t>(node)]; }
  /// Interior cell containing point p (base node = floor lattice point), or -1.
  int cell_of_point(const Vec2& p) const;

 private:
  DomainSpec spec_;
  std::array<int, 2> shape_{1, 1};
  std::array<double, 2> origin_{0.0, 0.0};  // coordinate of node index 0 per axis
  std::vector<uint8_t> mask_;
  std::vector<int> masked_nodes_;
  std::vector<StencilOffset> offsets_;
  std::vector<int> cell_base_;
  std::vector<int> node_to_cell_;
};

struct GeodesicTable {
  int source = -1;
  std::vector<double> dist;  // per node, +inf when unreachable or unmasked
};

/// Single-source shortest paths over the node graph with euclidean edge lengths.
GeodesicTable geodesic_distance(const GridDomain& dom, int source);

/// All sources; O(N * Dijkstra). Intended for desk-scale domains.
std::vector<GeodesicTable> geodesic_all_pairs(const GridDomain& dom);

/**
 * Sampled estimate of the domain constant: max over sampled node pairs of
 * geodesic over euclidean distance. Always >= 1. `pair_count` >= the number
 * of available pairs degenerates to the full scan.
 */
double estimate_domain_constant(const GridDomain& dom, long pair_count, uint64_t seed = 1234);

}  // namespace supremal
