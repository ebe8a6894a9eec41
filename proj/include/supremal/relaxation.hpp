#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "supremal/core.hpp"
#include "supremal/grid_function.hpp"
#include "supremal/pseudo_distance.hpp"
#include "supremal/supremand.hpp"

namespace supremal {

struct QuotientResult {
  double value = 0.0;  // sup over sampled pairs with d > 0, clamped at 0
  long pairs_used = 0;
  bool all_filtered = false;
};

/**
 * Difference quotient R_d(u) = sup over pairs with d(x,y) > 0 of
 * (u(x) - u(y)) / d(x,y), evaluated on a multi-source field set. All pairs are
 * scanned when their count stays within `max_pairs`, else a seeded sample.
 */
QuotientResult difference_quotient(const FieldSet& set, const GridFunction& u,
                                   long max_pairs = 100000, uint64_t seed = 7);

struct RelaxOptions {
  GradientWindow window;
  double tol = 1e-4;                // bisection stops when the bracket is this wide
  std::optional<double> eps;        // level shift in R_{mu+eps}; default tol/2
  const SubMask* localize = nullptr;  // restrict the functional to cells of A
};

struct EnvelopeResult {
  double value = 0.0;
  double lo = 0.0, hi = 0.0;  // final bracket
  double eps_used = 0.0;
  bool bracketed = true;          // false: no level in the bracket had R <= 1
  bool at_lower_end = false;      // predicate already held at the bracket start
  bool empty_levels_seen = false;
  bool monotone_suspect = false;  // a probe above an accepting level failed
  std::vector<std::pair<double, double>> probes;  // (mu, R)
};

/**
 * Relaxed (lower-semicontinuous envelope) value at u: bisection for the
 * infimal mu with R_{d^{mu+eps}}(u) <= 1. The quotient is evaluated edgewise
 * on the difference-constraint system, which equals the pair supremum
 * whenever the level's edge weights are positive.
 */
EnvelopeResult relax_value(const BoundSupremand& f, const GridFunction& u, double bracket_lo,
                           double bracket_hi, const RelaxOptions& opts);

/// f_n(x, xi) = f(x, xi) v |xi|/n: decreasing coercive majorants of f.
Supremand coercive_approximation(const Supremand& f, int n);

struct LatticeOptions {
  RelaxOptions relax;
  double bracket_lo = 0.0, bracket_hi = 8.0;
  double tol = 1e-3;
};

struct LatticeReport {
  struct JoinRow {
    double f_value = 0.0, g_value = 0.0, join_value = 0.0;
    bool exact = false;
  };
  struct ShiftRow {
    double relax_f = 0.0, relax_f_or_c = 0.0, expected = 0.0;
    bool pass = false;
  };
  std::vector<JoinRow> join_rows;
  std::vector<ShiftRow> shift_rows;
  double c = 0.0;
  bool join_pass = true;
  bool shift_pass = true;
  // meet locality: (F ^ G)(u, A u B) versus the max over the parts
  double meet_union = 0.0, meet_parts = 0.0;
  bool pass() const { return join_pass && shift_pass; }
};

/**
 * Lattice identities on a sample of fields:
 *  (i) sup-value of f v g equals F(u) v G(u) exactly,
 *  (ii) relax(F v c) equals relax(F) v c within 2x bisection tolerance,
 *  (iii) reports the meet locality gap for sub-masks A, B (F ^ G is generally
 *        not supremal; the union value may exceed the max over parts).
 */
LatticeReport lattice_checks(const Supremand& f, const Supremand& g, double c,
                             const std::vector<GridFunction>& fields, const GridDomain& dom,
                             const SubMask& A, const SubMask& B, const LatticeOptions& opts);

using Functional = std::function<double(const GridFunction&)>;

struct LevelConvexityReport {
  double max_excess = -kInf;  // max of V(mix) - V(u) v V(v)
  int witness_pair = -1;
  double witness_theta = 0.0;
  bool pass = true;
};

/// Checks V(theta u + (1-theta) v) <= V(u) v V(v) + tol on every sampled pair.
LevelConvexityReport level_convexity_test(
    const Functional& V, const std::vector<std::pair<GridFunction, GridFunction>>& pairs,
    const std::vector<double>& thetas, double tol);

struct GammaLimitReport {
  struct Row {
    std::vector<double> sup_values;    // F_n(u), must be non-increasing
    std::vector<double> relax_values;  // relax(F_n)(u)
    double relax_f = 0.0;              // relax(F)(u)
    bool monotone = true;
    bool limit_matches = true;
  };
  std::vector<Row> rows;
  bool monotone_pass = true;
  bool limit_pass = true;
  LevelConvexityReport limit_level_convexity;  // of u -> relax(F_{n_max})(u)
  bool pass() const { return monotone_pass && limit_pass && limit_level_convexity.pass; }
};

/**
 * Decreasing coercive approximations F_n: checks F_n(u) non-increasing in n,
 * relax(F_n)(u) non-increasing and converging to relax(F)(u) within tol, and
 * level convexity of the tail functional on the supplied pairs.
 */
GammaLimitReport monotone_gamma_limit(const Supremand& f, const GridDomain& dom,
                                      const std::vector<int>& ns,
                                      const std::vector<GridFunction>& fields,
                                      const std::vector<std::pair<GridFunction, GridFunction>>& pairs,
                                      const std::vector<double>& thetas, double bracket_lo,
                                      double bracket_hi, double tol, const RelaxOptions& opts);

}  // namespace supremal
