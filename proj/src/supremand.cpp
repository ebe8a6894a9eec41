#include "supremal/supremand.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace supremal {

int Supremand::piece_index(const Vec2& p) const {
  for (size_t i = 0; i < pieces_.size(); ++i)
    if (pieces_[i].region.contains(p, dim_)) return static_cast<int>(i);
  return -1;
}

double Supremand::eval_at(const Vec2& x, const Vec2& xi) const {
  int pi = piece_index(x);
  if (pi < 0) throw DomainError("point not covered by any supremand piece");
  Expr::Context ctx;
  ctx.x = x;
  ctx.xi = xi;
  ctx.dim = dim_;
  return pieces_[static_cast<size_t>(pi)].profile->eval(ctx);
}

Supremand Supremand::map_profiles(const std::function<ExprPtr(const ExprPtr&)>& fn) const {
  std::vector<Piece> mapped;
  mapped.reserve(pieces_.size());
  for (const Piece& p : pieces_) mapped.push_back(Piece{p.region, fn(p.profile)});
  Supremand out(dim_, std::move(mapped));
  out.coercivity = coercivity;
  out.linear_bound = linear_bound;
  return out;
}

Vec2 SampledProfile::point(size_t flat_idx) const {
  int s = side();
  int k1 = static_cast<int>(flat_idx % static_cast<size_t>(s)) - half_count;
  int k2 = dim == 2 ? static_cast<int>(flat_idx / static_cast<size_t>(s)) - half_count : 0;
  return {k1 * dxi, dim == 2 ? k2 * dxi : 0.0};
}

BoundSupremand BoundSupremand::bind(const Supremand& f, const GridDomain& dom) {
  if (f.dim() != dom.dim()) throw DomainError("supremand/domain dimension mismatch");
  BoundSupremand b;
  b.dom_ = &dom;
  b.dim_ = f.dim();
  b.coercivity = f.coercivity;
  b.linear_bound = f.linear_bound;
  b.cell_class_.resize(static_cast<size_t>(dom.cell_count()));
  std::map<int, int> piece_to_class;
  for (int c = 0; c < dom.cell_count(); ++c) {
    Vec2 center = dom.cell_center(c);
    int pi = f.piece_index(center);
    if (pi < 0) {
      throw DomainError("cell center (" + std::to_string(center[0]) + ", " +
                        std::to_string(center[1]) + ") not covered by any supremand piece");
    }
    auto [it, fresh] = piece_to_class.try_emplace(pi, static_cast<int>(b.classes_.size()));
    if (fresh) {
      const ExprPtr& e = f.pieces()[static_cast<size_t>(pi)].profile;
      b.classes_.push_back(ProfileClass{{e}, e->depends_on_x()});
    }
    b.cell_class_[static_cast<size_t>(c)] = it->second;
  }
  return b;
}

BoundSupremand BoundSupremand::bind_max(const Supremand& f, const Supremand& g,
                                        const GridDomain& dom) {
  BoundSupremand bf = bind(f, dom);
  BoundSupremand bg = bind(g, dom);
  BoundSupremand b;
  b.dom_ = &dom;
  b.dim_ = f.dim();
  if (f.coercivity || g.coercivity)
    b.coercivity = std::max(f.coercivity.value_or(0.0), g.coercivity.value_or(0.0));
  if (f.linear_bound && g.linear_bound)
    b.linear_bound = std::max(*f.linear_bound, *g.linear_bound);
  b.cell_class_.resize(static_cast<size_t>(dom.cell_count()));
  std::map<std::pair<int, int>, int> pair_to_class;
  for (int c = 0; c < dom.cell_count(); ++c) {
    std::pair<int, int> key{bf.cell_class_[static_cast<size_t>(c)],
                            bg.cell_class_[static_cast<size_t>(c)]};
    auto [it, fresh] = pair_to_class.try_emplace(key, static_cast<int>(b.classes_.size()));
    if (fresh) {
      ProfileClass pc;
      const auto& cf = bf.classes_[static_cast<size_t>(key.first)];
      const auto& cg = bg.classes_[static_cast<size_t>(key.second)];
      pc.terms.insert(pc.terms.end(), cf.terms.begin(), cf.terms.end());
      pc.terms.insert(pc.terms.end(), cg.terms.begin(), cg.terms.end());
      pc.x_dep = cf.x_dep || cg.x_dep;
      b.classes_.push_back(std::move(pc));
    }
    b.cell_class_[static_cast<size_t>(c)] = it->second;
  }
  return b;
}

double BoundSupremand::eval_class(int cls, const Vec2& x, const Vec2& xi) const {
  Expr::Context ctx;
  ctx.x = x;
  ctx.xi = xi;
  ctx.dim = dim_;
  double v = -kInf;
  for (const ExprPtr& e : classes_[static_cast<size_t>(cls)].terms)
    v = std::max(v, e->eval(ctx));
  return v;
}

double BoundSupremand::eval_cell(int cell, const Vec2& xi) const {
  return eval_class(cell_class_[static_cast<size_t>(cell)], dom_->cell_center(cell), xi);
}

namespace {

constexpr double kSectionSlack = 1e-12;

// One pass over the window lattice collecting per-direction support maxima of
// the sublevel set. Boundary contact in a direction is reported as +inf.
struct SupportScan {
  std::vector<double> dir_support;  // -inf when empty
  bool empty = true;
};

SupportScan scan_supports(const std::function<double(const Vec2&)>& fn, int dim,
                          const GradientWindow& window, double lambda,
                          const std::vector<Vec2>& dirs) {
  const int K = window.half_count();
  SupportScan out;
  out.dir_support.assign(dirs.size(), -kInf);
  const double w_edge = K * window.dxi;
  auto visit = [&](const Vec2& xi) {
    if (fn(xi) > lambda + kSectionSlack) return;
    out.empty = false;
    for (size_t d = 0; d < dirs.size(); ++d)
      out.dir_support[d] = std::max(out.dir_support[d], dot(xi, dirs[d]));
  };
  if (dim == 1) {
    for (int k = -K; k <= K; ++k) visit({k * window.dxi, 0.0});
  } else {
    for (int k2 = -K; k2 <= K; ++k2)
      for (int k1 = -K; k1 <= K; ++k1) visit({k1 * window.dxi, k2 * window.dxi});
  }
  if (!out.empty) {
    for (size_t d = 0; d < dirs.size(); ++d) {
      // window support of xi.dir over the lattice = w_edge * |dir|_1
      double cap = w_edge * (std::fabs(dirs[d][0]) + (dim == 2 ? std::fabs(dirs[d][1]) : 0.0));
      if (out.dir_support[d] >= cap - 1e-9) out.dir_support[d] = kInf;
    }
  }
  return out;
}

}  // namespace

SublevelSection sublevel_section(const BoundSupremand& f, int cell, double lambda,
                                 const GradientWindow& window) {
  SublevelSection s;
  s.cell = cell;
  s.lambda = lambda;
  const int K = window.half_count();
  const int dim = f.dim();
  auto visit = [&](const Vec2& xi) {
    if (f.eval_cell(cell, xi) <= lambda + kSectionSlack) s.samples.push_back(xi);
  };
  if (dim == 1) {
    for (int k = -K; k <= K; ++k) visit({k * window.dxi, 0.0});
  } else {
    for (int k2 = -K; k2 <= K; ++k2)
      for (int k1 = -K; k1 <= K; ++k1) visit({k1 * window.dxi, k2 * window.dxi});
  }
  return s;
}

double support_function(const BoundSupremand& f, int cell, double lambda, const Vec2& dir,
                        const GradientWindow& window) {
  double len = f.dim() == 2 ? norm(dir) : std::fabs(dir[0]);
  if (std::fabs(len - 1.0) > 1e-9) throw DomainError("support direction must be a unit vector");
  auto fn = [&](const Vec2& xi) { return f.eval_cell(cell, xi); };
  SupportScan s = scan_supports(fn, f.dim(), window, lambda, {dir});
  return s.empty ? -kInf : s.dir_support[0];
}

SupportTable build_support_table(const BoundSupremand& f, double lambda,
                                 const GradientWindow& window,
                                 const std::vector<uint8_t>* cell_filter) {
  const GridDomain& dom = f.domain();
  const auto& offs = dom.offsets();
  std::vector<Vec2> dirs;
  dirs.reserve(offs.size());
  for (const auto& o : offs) dirs.push_back({o.dx / o.length, o.dy / o.length});

  SupportTable table;
  table.dirs = static_cast<int>(dirs.size());
  table.values.assign(static_cast<size_t>(dom.cell_count()) * dirs.size(), kInf);

  std::vector<SupportScan> class_scan(static_cast<size_t>(f.class_count()));
  std::vector<uint8_t> class_done(static_cast<size_t>(f.class_count()), 0);

  for (int c = 0; c < dom.cell_count(); ++c) {
    if (cell_filter && !(*cell_filter)[static_cast<size_t>(c)]) continue;  // unconstrained
    int cls = f.cell_class(c);
    const SupportScan* scan = nullptr;
    SupportScan local;
    if (!f.class_x_dependent(cls)) {
      if (!class_done[static_cast<size_t>(cls)]) {
        Vec2 center = dom.cell_center(c);
        auto fn = [&](const Vec2& xi) { return f.eval_class(cls, center, xi); };
        class_scan[static_cast<size_t>(cls)] = scan_supports(fn, f.dim(), window, lambda, dirs);
        class_done[static_cast<size_t>(cls)] = 1;
      }
      scan = &class_scan[static_cast<size_t>(cls)];
    } else {
      Vec2 center = dom.cell_center(c);
      auto fn = [&](const Vec2& xi) { return f.eval_class(cls, center, xi); };
      local = scan_supports(fn, f.dim(), window, lambda, dirs);
      scan = &local;
    }
    if (scan->empty) {
      table.empty_level = true;
      if (table.first_empty_cell < 0) table.first_empty_cell = c;
      continue;
    }
    for (size_t d = 0; d < dirs.size(); ++d)
      table.values[static_cast<size_t>(c) * dirs.size() + d] = scan->dir_support[d];
  }
  return table;
}

SampledProfile sample_profile(const std::function<double(const Vec2&)>& fn, int dim,
                              const GradientWindow& window) {
  if (!(window.half_width > 0) || !(window.dxi > 0)) throw DomainError("empty gradient window");
  SampledProfile p;
  p.dim = dim;
  p.half_count = window.half_count();
  p.dxi = window.dxi;
  const int K = p.half_count;
  if (dim == 1) {
    p.values.reserve(static_cast<size_t>(p.side()));
    for (int k = -K; k <= K; ++k) p.values.push_back(fn({k * window.dxi, 0.0}));
  } else {
    p.values.reserve(static_cast<size_t>(p.side()) * static_cast<size_t>(p.side()));
    for (int k2 = -K; k2 <= K; ++k2)
      for (int k1 = -K; k1 <= K; ++k1) p.values.push_back(fn({k1 * window.dxi, k2 * window.dxi}));
  }
  return p;
}

namespace {

SampledProfile envelope_1d(const SampledProfile& f) {
  const size_t n = f.size();
  SampledProfile out = f;
  out.values.assign(n, kInf);
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return f.values[a] < f.values[b]; });
  // the covered index range [lo, hi] is the hull of the sublevel samples
  size_t lo = n, hi = 0;
  bool any = false;
  size_t i = 0;
  while (i < n) {
    double level = f.values[order[i]];
    if (std::isinf(level)) break;
    size_t j = i;
    while (j < n && f.values[order[j]] <= level) {
      lo = any ? std::min(lo, order[j]) : order[j];
      hi = any ? std::max(hi, order[j]) : order[j];
      any = true;
      ++j;
    }
    for (size_t k = lo; k <= hi; ++k)
      if (std::isinf(out.values[k])) out.values[k] = level;
    i = j;
  }
  return out;
}

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Vec2> hull(2 * pts.size());
  size_t k = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  size_t lower = k + 1;
  for (size_t i = pts.size() - 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

bool in_hull(const std::vector<Vec2>& hull, const Vec2& p, double eps) {
  if (hull.empty()) return false;
  if (hull.size() == 1) return std::fabs(p[0] - hull[0][0]) <= eps && std::fabs(p[1] - hull[0][1]) <= eps;
  if (hull.size() == 2) {
    // segment: colinear and within the bounding box
    if (std::fabs(cross(hull[0], hull[1], p)) > eps) return false;
    return p[0] >= std::min(hull[0][0], hull[1][0]) - eps &&
           p[0] <= std::max(hull[0][0], hull[1][0]) + eps &&
           p[1] >= std::min(hull[0][1], hull[1][1]) - eps &&
           p[1] <= std::max(hull[0][1], hull[1][1]) + eps;
  }
  for (size_t i = 0; i < hull.size(); ++i) {
    const Vec2& a = hull[i];
    const Vec2& b = hull[(i + 1) % hull.size()];
    if (cross(a, b, p) < -eps) return false;
  }
  return true;
}

SampledProfile envelope_2d(const SampledProfile& f) {
  const size_t n = f.size();
  SampledProfile out = f;
  out.values.assign(n, kInf);
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return f.values[a] < f.values[b]; });
  std::vector<Vec2> pool;
  std::vector<size_t> open;  // not yet assigned
  open.reserve(n);
  for (size_t i = 0; i < n; ++i) open.push_back(i);
  const double eps = 1e-9 * f.dxi;
  size_t i = 0;
  while (i < n && !open.empty()) {
    double level = f.values[order[i]];
    if (std::isinf(level)) break;
    size_t j = i;
    while (j < n && f.values[order[j]] <= level) pool.push_back(f.point(order[j++]));
    std::vector<Vec2> hull = convex_hull(pool);
    std::vector<size_t> still_open;
    still_open.reserve(open.size());
    for (size_t idx : open) {
      if (in_hull(hull, f.point(idx), eps)) {
        out.values[idx] = level;
      } else {
        still_open.push_back(idx);
      }
    }
    open.swap(still_open);
    i = j;
  }
  return out;
}

}  // namespace

SampledProfile level_convex_envelope_profile(const SampledProfile& f) {
  return f.dim == 1 ? envelope_1d(f) : envelope_2d(f);
}

EnvelopePair level_convex_envelope(const BoundSupremand& f, int cell,
                                   const GradientWindow& window) {
  auto fn = [&](const Vec2& xi) { return f.eval_cell(cell, xi); };
  EnvelopePair pair;
  pair.f = sample_profile(fn, f.dim(), window);
  pair.envelope = level_convex_envelope_profile(pair.f);
  return pair;
}

LscReport lsc_defect(const SampledProfile& f) {
  LscReport rep;
  const int K = f.half_count;
  auto value = [&](int k1, int k2) { return f.values[f.flat(k1, k2)]; };
  for (int k2 = (f.dim == 2 ? -K : 0); k2 <= (f.dim == 2 ? K : 0); ++k2) {
    for (int k1 = -K; k1 <= K; ++k1) {
      double v = value(k1, k2);
      if (std::isinf(v)) continue;
      double m = kInf;
      for (int d2 = (f.dim == 2 ? -1 : 0); d2 <= (f.dim == 2 ? 1 : 0); ++d2) {
        for (int d1 = -1; d1 <= 1; ++d1) {
          if (d1 == 0 && d2 == 0) continue;
          int n1 = k1 + d1, n2 = k2 + d2;
          if (std::abs(n1) > K || std::abs(n2) > K) continue;
          m = std::min(m, value(n1, n2));
        }
      }
      double defect = std::max(0.0, v - m);
      if (std::isfinite(m) && defect > rep.max_defect) {
        rep.max_defect = defect;
        rep.worst_point = {k1 * f.dxi, f.dim == 2 ? k2 * f.dxi : 0.0};
      }
    }
  }
  return rep;
}

}  // namespace supremal
