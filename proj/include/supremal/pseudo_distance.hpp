#pragma once

#include <optional>
#include <vector>

#include "supremal/core.hpp"
#include "supremal/grid_domain.hpp"
#include "supremal/grid_function.hpp"
#include "supremal/supremand.hpp"

namespace supremal {

/**
 * Directed difference-constraint system u(to) - u(from) <= w induced by the
 * sublevel sections of a supremand at one level: every stencil step inside an
 * interior cell is bounded by the section's support function along the step,
 * scaled by the step length. Unbounded supports (+inf) carry no edge.
 */
struct EdgeSystem {
  struct Edge {
    int from = -1, to = -1;
    double w = 0.0;
  };
  std::vector<Edge> edges;
  bool empty_level = false;
  int first_empty_cell = -1;
  double min_weight = kInf;
  // CSR adjacency over all nodes (out-edges)
  std::vector<int> head;
  std::vector<int> adj_to;
  std::vector<double> adj_w;
};

EdgeSystem build_edge_system(const BoundSupremand& f, double lambda, const GradientWindow& window,
                             const std::vector<uint8_t>* cell_filter = nullptr);

enum class DistanceMethod { fast, oracle, search };

/// Values d(x, y) = sup{u(x) - u(y) : per-cell gradients in the sampled
/// sublevel sets} for a fixed source y. May be asymmetric and infinite.
struct PseudoDistanceField {
  double lambda = 0.0;
  int source = -1;
  DistanceMethod method = DistanceMethod::fast;
  bool empty_level = false;
  std::vector<double> dist;  // per node; +inf unreachable; NaN when empty_level
};

/**
 * Shortest paths from y over the edge system: Dijkstra when all weights are
 * nonnegative, label-correcting otherwise. This evaluates the level-convexified
 * problem (support functions see only convex hulls of sections).
 */
PseudoDistanceField pseudo_distance_fast(const BoundSupremand& f, double lambda, int source,
                                         const GradientWindow& window,
                                         const std::vector<uint8_t>* cell_filter = nullptr);

/// Same constraint system driven to its fixed point by label-correcting
/// iteration; agrees with the fast method by construction.
PseudoDistanceField pseudo_distance_oracle(const BoundSupremand& f, double lambda, int source,
                                           const GradientWindow& window,
                                           const std::vector<uint8_t>* cell_filter = nullptr);

PseudoDistanceField distance_from_edges(const EdgeSystem& es, const GridDomain& dom, double lambda,
                                        int source, DistanceMethod method);

/**
 * Independent lower bound for small instances: maximize u(x) - u(y) over
 * explicitly constructed admissible fields (per-cell section samples in 1-D,
 * common-gradient affine fields in 2-D, plus random perturbations).
 * `attained` reports that the constraint-system value was reached exactly
 * (always the case on 1-D chains).
 */
struct SearchResult {
  PseudoDistanceField field;
  bool attained = false;
  int candidates = 0;
};

SearchResult admissible_search(const BoundSupremand& f, double lambda, int source,
                               const GradientWindow& window, int trials, uint64_t seed);

/// Distance fields from several sources sharing one edge system.
struct FieldSet {
  double lambda = 0.0;
  std::vector<int> sources;
  std::vector<PseudoDistanceField> fields;
  bool empty_level = false;
};

FieldSet multi_source_fields(const BoundSupremand& f, double lambda, const GradientWindow& window,
                             std::vector<int> sources, DistanceMethod method = DistanceMethod::fast,
                             const std::vector<uint8_t>* cell_filter = nullptr);

/// All masked nodes when the domain is small, else a seeded sample sized so
/// that sources x nodes stays near `pair_budget`.
std::vector<int> auto_sources(const GridDomain& dom, long pair_budget = 100000,
                              uint64_t seed = 99);

struct SandwichReport {
  bool pass = true;
  bool lower_checked = false, upper_checked = false;
  double worst_lower_slack = kInf;  // min over nodes of d - lower bound
  double worst_upper_slack = kInf;  // min over nodes of upper bound - d
  int worst_lower_node = -1, worst_upper_node = -1;
  double alpha_coeff = 0.0, beta_coeff = 0.0;
  int checked = 0;
};

/**
 * Verifies alpha |x-y| <= d(x, y) <= beta |x-y|_Omega nodewise with relative
 * slack `rel_tol` (stencil anisotropy) and absolute slack `abs_tol`. Missing
 * coefficients default to lambda/alpha_tag and lambda/beta_tag from the
 * supremand's declared bounds; a side with no coefficient is skipped.
 */
SandwichReport sandwich_check(const BoundSupremand& f, const PseudoDistanceField& field,
                              const GeodesicTable& geodesic,
                              std::optional<double> alpha_coeff = std::nullopt,
                              std::optional<double> beta_coeff = std::nullopt,
                              double rel_tol = 0.0, double abs_tol = 0.0);

}  // namespace supremal
