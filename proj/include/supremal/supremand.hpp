#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "supremal/core.hpp"
#include "supremal/expression.hpp"
#include "supremal/grid_domain.hpp"

namespace supremal {

/// Spatial predicate: union of axis-aligned boxes, or the catch-all "else".
struct Region {
  std::vector<Box> boxes;
  bool catch_all = false;

  bool contains(const Vec2& p, int dim) const {
    if (catch_all) return true;
    for (const Box& b : boxes)
      if (b.contains(p, dim)) return true;
    return false;
  }
};

struct Piece {
  Region region;
  ExprPtr profile;
};

/**
 * The density f(x, xi): a list of (region, profile) pieces resolved by cell
 * center, first match wins. Optional declared bounds:
 *   coercivity beta:    f(x, xi) >= beta * |xi|
 *   linear_bound alpha: f(x, xi) <= alpha * |xi|
 * Immutable; all queries reentrant.
 */
class Supremand {
 public:
  Supremand(int dim, std::vector<Piece> pieces) : dim_(dim), pieces_(std::move(pieces)) {}

  static Supremand single(int dim, ExprPtr profile) {
    return Supremand(dim, {Piece{Region{{}, true}, std::move(profile)}});
  }
  static Supremand single(int dim, std::string_view profile_text) {
    return single(dim, Expr::parse(profile_text));
  }

  int dim() const { return dim_; }
  const std::vector<Piece>& pieces() const { return pieces_; }

  /// Index of the first piece covering p, or -1.
  int piece_index(const Vec2& p) const;
  double eval_at(const Vec2& x, const Vec2& xi) const;

  /// New supremand with every profile mapped (piece structure preserved).
  Supremand map_profiles(const std::function<ExprPtr(const ExprPtr&)>& fn) const;

  std::optional<double> coercivity;    // beta
  std::optional<double> linear_bound;  // alpha

 private:
  int dim_;
  std::vector<Piece> pieces_;
};

struct GradientWindow {
  double half_width = 10.0;
  double dxi = 0.01;

  int half_count() const { return static_cast<int>(std::llround(half_width / dxi)); }
};

/// Profile sampled on the symmetric gradient lattice k*dxi, |k| <= half_count.
struct SampledProfile {
  int dim = 1;
  int half_count = 0;
  double dxi = 0.0;
  std::vector<double> values;  // row-major, first axis fastest

  int side() const { return 2 * half_count + 1; }
  size_t size() const { return values.size(); }
  Vec2 point(size_t flat) const;
  size_t flat(int k1, int k2) const {
    return static_cast<size_t>(k1 + half_count) +
           static_cast<size_t>(side()) * static_cast<size_t>(dim == 2 ? k2 + half_count : 0);
  }
};

/**
 * Supremand resolved against a domain: every interior cell is assigned a
 * profile class (distinct expression set). Classes whose profiles do not
 * reference x share sublevel-set computations across cells.
 */
class BoundSupremand {
 public:
  static BoundSupremand bind(const Supremand& f, const GridDomain& dom);
  /// Pointwise maximum f v g (still a supremal density).
  static BoundSupremand bind_max(const Supremand& f, const Supremand& g, const GridDomain& dom);

  const GridDomain& domain() const { return *dom_; }
  int dim() const { return dim_; }
  int class_count() const { return static_cast<int>(classes_.size()); }
  int cell_class(int cell) const { return cell_class_[static_cast<size_t>(cell)]; }
  bool class_x_dependent(int cls) const { return classes_[static_cast<size_t>(cls)].x_dep; }

  double eval_class(int cls, const Vec2& x, const Vec2& xi) const;
  double eval_cell(int cell, const Vec2& xi) const;

  std::optional<double> coercivity;
  std::optional<double> linear_bound;

 private:
  struct ProfileClass {
    std::vector<ExprPtr> terms;  // value = max over terms
    bool x_dep = false;
  };
  const GridDomain* dom_ = nullptr;
  int dim_ = 1;
  std::vector<int> cell_class_;
  std::vector<ProfileClass> classes_;
};

/// Finite gradient samples of the sublevel set {xi : f(x, xi) <= lambda}.
struct SublevelSection {
  int cell = -1;
  double lambda = 0.0;
  std::vector<Vec2> samples;
};

SublevelSection sublevel_section(const BoundSupremand& f, int cell, double lambda,
                                 const GradientWindow& window);

/**
 * sup{ xi . dir : f(x, xi) <= lambda } over the sampled window.
 * Returns +inf when the sampled section touches the window boundary in the
 * queried direction (unbounded section), -inf when the section is empty.
 * `dir` must have unit euclidean length.
 */
double support_function(const BoundSupremand& f, int cell, double lambda, const Vec2& dir,
                        const GradientWindow& window);

/// Per-cell support values for every stencil direction of the bound domain.
struct SupportTable {
  std::vector<double> values;  // cell_count x offset_count, +inf = unconstrained
  bool empty_level = false;
  int first_empty_cell = -1;
  int dirs = 0;

  double at(int cell, int dir) const {
    return values[static_cast<size_t>(cell) * static_cast<size_t>(dirs) + static_cast<size_t>(dir)];
  }
};

/// Cells with filter[cell] == 0 are treated as unconstrained (+inf supports).
SupportTable build_support_table(const BoundSupremand& f, double lambda,
                                 const GradientWindow& window,
                                 const std::vector<uint8_t>* cell_filter = nullptr);

SampledProfile sample_profile(const std::function<double(const Vec2&)>& fn, int dim,
                              const GradientWindow& window);

/**
 * Largest level-convex minorant on the sample grid: sublevel sets are the
 * convex hulls of the sampled sublevel sets, ladder = the sorted sampled
 * values. Idempotent, dominated by the input.
 */
SampledProfile level_convex_envelope_profile(const SampledProfile& f);

struct EnvelopePair {
  SampledProfile f;
  SampledProfile envelope;
};

EnvelopePair level_convex_envelope(const BoundSupremand& f, int cell, const GradientWindow& window);

/// Advisory lower-semicontinuity probe: worst defect f(xi) - min over the
/// punctured one-step neighborhood, clamped at 0. ~Lip*dxi for continuous data.
struct LscReport {
  double max_defect = 0.0;
  Vec2 worst_point{0.0, 0.0};
};

LscReport lsc_defect(const SampledProfile& f);

}  // namespace supremal
