#include "supremal/representation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace supremal {

namespace {

// slopes worth descending to away from the pinned cell: sampled minimizers of
// every profile class, the zero slope, and the pinned gradient itself
std::vector<double> slope_candidates_1d(const BoundSupremand& f, const GradientWindow& window,
                                        double xi) {
  std::set<double> slopes{0.0, xi};
  const GridDomain& dom = f.domain();
  std::vector<uint8_t> done(static_cast<size_t>(f.class_count()), 0);
  for (int c = 0; c < dom.cell_count(); ++c) {
    int cls = f.cell_class(c);
    if (done[static_cast<size_t>(cls)] && !f.class_x_dependent(cls)) continue;
    done[static_cast<size_t>(cls)] = 1;
    Vec2 center = dom.cell_center(c);
    const int K = window.half_count();
    double best = kInf;
    for (int k = -K; k <= K; ++k)
      best = std::min(best, f.eval_class(cls, center, {k * window.dxi, 0.0}));
    double arg_lo = kInf, arg_hi = -kInf, arg_small = kInf;
    for (int k = -K; k <= K; ++k) {
      double v = f.eval_class(cls, center, {k * window.dxi, 0.0});
      if (v <= best + 1e-9) {
        double s = k * window.dxi;
        arg_lo = std::min(arg_lo, s);
        arg_hi = std::max(arg_hi, s);
        if (std::fabs(s) < std::fabs(arg_small)) arg_small = s;
      }
    }
    if (std::isfinite(arg_lo)) slopes.insert(arg_lo);
    if (std::isfinite(arg_hi)) slopes.insert(arg_hi);
    if (std::isfinite(arg_small)) slopes.insert(arg_small);
    if (f.class_x_dependent(cls)) break;  // one representative cell is enough here
  }
  return {slopes.begin(), slopes.end()};
}

std::vector<double> radius_ladder(const GridDomain& dom, double min_radius_cells) {
  double h = dom.h();
  double span = 0.0;
  for (int a = 0; a < dom.dim(); ++a)
    span = std::max(span, dom.spec().extent[a][1] - dom.spec().extent[a][0]);
  std::vector<double> radii;
  for (double r = min_radius_cells * h; r < span; r *= 2.0) radii.push_back(r);
  if (radii.empty()) radii.push_back(min_radius_cells * h);
  return radii;
}

}  // namespace

double representation_value(const BoundSupremand& f, int cell, const Vec2& xi,
                            const RepresentationOptions& opts) {
  const GridDomain& dom = f.domain();
  const double h = dom.h();
  Vec2 x0 = dom.coords(dom.cell_base(cell));

  double best = kInf;
  auto consider = [&](const GridFunction& u) {
    Vec2 g = u.gradient(cell);
    if (std::fabs(g[0] - xi[0]) > 1e-9 || (dom.dim() == 2 && std::fabs(g[1] - xi[1]) > 1e-9))
      return;  // competitor failed to pin the gradient
    best = std::min(best, supremal_value(f, u));
  };

  GridFunction affine(dom);
  for (int node : dom.masked_nodes()) affine[node] = dot(xi, dom.coords(node) - x0);
  consider(affine);

  std::vector<double> radii = radius_ladder(dom, opts.min_radius_cells);

  if (dom.dim() == 1) {
    std::vector<double> slopes = slope_candidates_1d(f, opts.window, xi[0]);
    long combos = static_cast<long>(radii.size()) * slopes.size() * slopes.size();
    while (combos > opts.budget && slopes.size() > 2) {
      slopes.pop_back();
      combos = static_cast<long>(radii.size()) * slopes.size() * slopes.size();
    }
    for (double r : radii) {
      for (double sr : slopes) {
        for (double sl : slopes) {
          GridFunction u(dom);
          for (int node : dom.masked_nodes()) {
            double z = dom.coords(node)[0] - x0[0];
            double v;
            if (z > r) {
              v = xi[0] * r + sr * (z - r);
            } else if (z < -r) {
              v = -xi[0] * r + sl * (z + r);
            } else {
              v = xi[0] * z;
            }
            u[node] = v;
          }
          consider(u);
        }
      }
    }
    return best;
  }

  // 2-D: truncated affine competitors (gradient xi near the cell, zero far)
  double mag = norm(xi);
  for (double r : radii) {
    double m = std::max(mag * r, 2.0 * h * std::max(mag, 1.0));
    GridFunction u(dom);
    for (int node : dom.masked_nodes()) {
      double v = dot(xi, dom.coords(node) - x0);
      u[node] = std::clamp(v, -m, m);
    }
    consider(u);
  }
  return best;
}

RepresentationTable representation_table(const BoundSupremand& f, const std::vector<Vec2>& points,
                                         const std::vector<Vec2>& gradients,
                                         const RepresentationOptions& opts, double flag_tol) {
  RepresentationTable table;
  const GridDomain& dom = f.domain();
  for (const Vec2& p : points) {
    int cell = dom.cell_of_point(p);
    if (cell < 0) throw DomainError("representation point has no interior cell");
    for (const Vec2& xi : gradients) {
      RepresentationTable::Row row;
      row.x = dom.cell_center(cell);
      row.xi = xi;
      row.f_value = f.eval_cell(cell, xi);
      row.phi = representation_value(f, cell, xi, opts);
      row.phi_below_f = row.phi < row.f_value - flag_tol;
      table.rows.push_back(row);
    }
  }
  return table;
}

LocalizedFit localized_relaxed_supremand(const BoundSupremand& f,
                                         const std::vector<SubMask>& regions,
                                         const std::vector<double>& xi_ladder,
                                         const std::vector<GridFunction>& probes,
                                         double bracket_lo, double bracket_hi,
                                         const RelaxOptions& opts, double tol) {
  if (f.dim() != 1) throw DomainError("localized supremand fitting is 1-D only");
  const GridDomain& dom = f.domain();
  LocalizedFit fit;
  fit.xi_ladder = xi_ladder;

  // probe each profile class on its own cells with affine fields
  std::vector<SubMask> class_masks(static_cast<size_t>(f.class_count()));
  for (auto& m : class_masks) {
    m.nodes.assign(static_cast<size_t>(dom.node_count()), 0);
    m.cells.assign(static_cast<size_t>(dom.cell_count()), 0);
  }
  for (int c = 0; c < dom.cell_count(); ++c)
    class_masks[static_cast<size_t>(f.cell_class(c))].cells[static_cast<size_t>(c)] = 1;

  for (int cls = 0; cls < f.class_count(); ++cls) {
    LocalizedFit::ClassFit cf;
    cf.cls = cls;
    RelaxOptions local = opts;
    local.localize = &class_masks[static_cast<size_t>(cls)];
    for (double xi : xi_ladder) {
      GridFunction u = GridFunction::linear(dom, {xi, 0.0});
      cf.g_values.push_back(relax_value(f, u, bracket_lo, bracket_hi, local).value);
    }
    fit.fits.push_back(std::move(cf));
  }

  auto g_of = [&](int cls, double xi) {
    const auto& ladder = fit.xi_ladder;
    const auto& vals = fit.fits[static_cast<size_t>(cls)].g_values;
    if (xi <= ladder.front()) return vals.front();
    if (xi >= ladder.back()) return vals.back();
    auto it = std::upper_bound(ladder.begin(), ladder.end(), xi);
    size_t j = static_cast<size_t>(it - ladder.begin());
    double t = (xi - ladder[j - 1]) / (ladder[j] - ladder[j - 1]);
    return (1 - t) * vals[j - 1] + t * vals[j];
  };

  for (size_t ri = 0; ri < regions.size(); ++ri) {
    RelaxOptions local = opts;
    local.localize = &regions[ri];
    for (size_t pi = 0; pi < probes.size(); ++pi) {
      LocalizedFit::AssertRow row;
      row.region_index = ri;
      row.probe_index = pi;
      row.relax_lhs = relax_value(f, probes[pi], bracket_lo, bracket_hi, local).value;
      double rhs = -kInf;
      for (int c = 0; c < dom.cell_count(); ++c) {
        if (!regions[ri].cells[static_cast<size_t>(c)]) continue;
        rhs = std::max(rhs, g_of(f.cell_class(c), probes[pi].gradient(c)[0]));
      }
      row.fitted_rhs = rhs;
      row.residual = std::fabs(row.relax_lhs - row.fitted_rhs);
      fit.max_residual = std::max(fit.max_residual, row.residual);
      fit.checks.push_back(row);
    }
  }
  fit.pass = fit.max_residual <= tol;
  return fit;
}

}  // namespace supremal
