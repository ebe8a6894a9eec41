#pragma once

#include <vector>

#include "supremal/core.hpp"
#include "supremal/grid_function.hpp"
#include "supremal/relaxation.hpp"
#include "supremal/supremand.hpp"

namespace supremal {

struct RepresentationOptions {
  int budget = 200;          // competitor count cap
  GradientWindow window;     // candidate slopes are drawn from sampled profiles
  double min_radius_cells = 2.0;
};

/**
 * Upper estimate of the level-convex representation value at (cell, xi):
 * the minimum of the global sup-value over a competitor family of fields whose
 * gradient at the cell equals xi (affine fields, truncations, and two-sided
 * slope blends with slopes drawn from sampled profile minimizers). Bounded
 * above by the value of the pure affine competitor.
 */
double representation_value(const BoundSupremand& f, int cell, const Vec2& xi,
                            const RepresentationOptions& opts);

struct RepresentationTable {
  struct Row {
    Vec2 x{0.0, 0.0};
    Vec2 xi{0.0, 0.0};
    double f_value = 0.0;
    double phi = 0.0;
    bool phi_below_f = false;  // flags phi < f - tol (exceptional set probe)
  };
  std::vector<Row> rows;
};

RepresentationTable representation_table(const BoundSupremand& f, const std::vector<Vec2>& points,
                                         const std::vector<Vec2>& gradients,
                                         const RepresentationOptions& opts, double flag_tol = 1e-9);

struct LocalizedFit {
  // fitted localized supremand g, tabulated per profile class over the xi ladder
  struct ClassFit {
    int cls = -1;
    std::vector<double> g_values;  // per xi ladder entry
  };
  struct AssertRow {
    size_t region_index = 0;
    size_t probe_index = 0;
    double relax_lhs = 0.0;   // relax of the localized functional at the probe
    double fitted_rhs = 0.0;  // sup of g(x, Du) over the region's cells
    double residual = 0.0;
  };
  std::vector<double> xi_ladder;
  std::vector<ClassFit> fits;
  std::vector<AssertRow> checks;
  double max_residual = 0.0;
  bool pass = true;
};

/**
 * Fits the supremand of the localized relaxed functional: for each profile
 * class, relax affine probes restricted to the class's cells; then verifies
 * that sup over A of g(x, Du) reproduces the relaxed value on every supplied
 * region and probe field.
 */
LocalizedFit localized_relaxed_supremand(const BoundSupremand& f,
                                         const std::vector<SubMask>& regions,
                                         const std::vector<double>& xi_ladder,
                                         const std::vector<GridFunction>& probes,
                                         double bracket_lo, double bracket_hi,
                                         const RelaxOptions& opts, double tol);

}  // namespace supremal
