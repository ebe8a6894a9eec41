#pragma once

#include <string>
#include <vector>

#include "supremal/core.hpp"
#include "supremal/expression.hpp"
#include "supremal/grid_domain.hpp"
#include "supremal/supremand.hpp"

namespace supremal {

/// Scalar field on grid nodes. Values on unmasked nodes are ignored.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(const GridDomain& dom, double fill = 0.0)
      : dom_(&dom), values_(static_cast<size_t>(dom.node_count()), fill) {}

  static GridFunction from_expression(const GridDomain& dom, const ExprPtr& e);
  static GridFunction from_expression(const GridDomain& dom, std::string_view text) {
    return from_expression(dom, Expr::parse(text));
  }
  /// Affine field xi0 . x
  static GridFunction linear(const GridDomain& dom, const Vec2& xi0);

  const GridDomain& domain() const { return *dom_; }
  double operator[](int node) const { return values_[static_cast<size_t>(node)]; }
  double& operator[](int node) { return values_[static_cast<size_t>(node)]; }
  const std::vector<double>& values() const { return values_; }

  /// Forward-difference gradient of the interior cell `cell`.
  Vec2 gradient(int cell) const;

  GridFunction plus(const GridFunction& other, double weight = 1.0) const;
  GridFunction scaled(double s) const;
  GridFunction shifted(double c) const;

 private:
  const GridDomain* dom_ = nullptr;
  std::vector<double> values_;
};

/// Node subset of a domain, with the induced interior-cell subset.
struct SubMask {
  std::vector<uint8_t> nodes;  // per node
  std::vector<uint8_t> cells;  // per interior cell: all cell nodes in the subset

  static SubMask whole(const GridDomain& dom);
  static SubMask from_boxes(const GridDomain& dom, const std::vector<Box>& boxes);
  static SubMask union_of(const SubMask& a, const SubMask& b);
  int cell_count() const;
};

std::vector<Vec2> discrete_gradient(const GridFunction& u);

/// Discrete ess sup: max over the interior cells of A (whole mask by default).
double supremal_value(const BoundSupremand& f, const GridFunction& u, const SubMask* A = nullptr);

struct LipschitzSeminorms {
  double grad_sup = 0.0;      // max cell gradient euclidean norm
  double lip_euclid = 0.0;    // max pair quotient over euclidean distance
  double lip_geodesic = 0.0;  // max pair quotient over graph geodesic distance
};

/// O(N^2) pair scans; the overload taking precomputed geodesic tables avoids
/// re-running Dijkstra per field.
LipschitzSeminorms lipschitz_seminorms(const GridFunction& u);
LipschitzSeminorms lipschitz_seminorms(const GridFunction& u,
                                       const std::vector<GeodesicTable>& geodesics);

/**
 * ~u(x) = min over y in sub of { u(y) + L |x - y| } (euclidean). Leaves u
 * unchanged on sub, L-Lipschitz everywhere. Rejects L below the euclidean
 * Lipschitz constant of u on sub.
 */
GridFunction mcshane_extend(const GridFunction& u, const SubMask& sub, double L);

/**
 * Odd piecewise-affine wave: zero at the origin, derivative alternating
 * +-slope on intervals of width 1/(2n), amplitude slope/(2n). Cell gradients
 * are exactly +-slope when 1/(2n) is a multiple of h.
 */
GridFunction sawtooth(const GridDomain& dom, int n, double slope);

void write_field_csv(const GridFunction& u, const std::string& path);
GridFunction read_field_csv(const GridDomain& dom, const std::string& path);

}  // namespace supremal
