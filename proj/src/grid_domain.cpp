#include "supremal/grid_domain.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "supremal/rng.hpp"

namespace supremal {

double stencil_anisotropy(Stencil s, int dim) {
  if (dim == 1) return 0.0;
  // chamfer metric worst case: sqrt(2)-1 for the 4-stencil, the 22.5 degree
  // direction for the 8-stencil
  if (s == Stencil::axis) return std::sqrt(2.0) - 1.0;
  return std::cos(M_PI / 8) + (std::sqrt(2.0) - 1.0) * std::sin(M_PI / 8) - 1.0;
}

GridDomain GridDomain::build(const DomainSpec& spec) {
  if (spec.dim != 1 && spec.dim != 2) throw DomainError("dim must be 1 or 2");
  if (!(spec.h > 0)) throw DomainError("spacing h must be positive");

  GridDomain d;
  d.spec_ = spec;
  for (int a = 0; a < spec.dim; ++a) {
    double lo = spec.extent[a][0], hi = spec.extent[a][1];
    if (!(hi > lo)) throw DomainError("extent must be nonempty per axis");
    // nodes strictly inside (lo, hi)
    int first = static_cast<int>(std::floor(lo / spec.h)) + 1;
    while (first * spec.h <= lo + 1e-12) ++first;
    int last = static_cast<int>(std::ceil(hi / spec.h)) - 1;
    while (last * spec.h >= hi - 1e-12) --last;
    if (last < first) throw DomainError("no interior nodes along an axis");
    d.origin_[a] = first * spec.h;
    d.shape_[a] = last - first + 1;
  }
  if (spec.dim == 1) {
    d.shape_[1] = 1;
    d.origin_[1] = 0.0;
  }

  const int n = d.node_count();
  d.mask_.assign(static_cast<size_t>(n), 0);
  for (int iy = 0; iy < d.shape_[1]; ++iy) {
    for (int ix = 0; ix < d.shape_[0]; ++ix) {
      int node = d.node_index(ix, iy);
      Vec2 p = d.coords(node);
      bool inside = true;
      for (const Box& b : spec.obstacles) {
        if (b.contains(p, spec.dim)) {
          inside = false;
          break;
        }
      }
      d.mask_[static_cast<size_t>(node)] = inside ? 1 : 0;
    }
  }

  if (spec.dim == 1) {
    d.offsets_ = {{1, 0, 1.0}, {-1, 0, 1.0}};
  } else if (spec.stencil == Stencil::axis) {
    d.offsets_ = {{1, 0, 1.0}, {-1, 0, 1.0}, {0, 1, 1.0}, {0, -1, 1.0}};
  } else {
    const double r2 = std::sqrt(2.0);
    d.offsets_ = {{1, 0, 1.0},  {-1, 0, 1.0}, {0, 1, 1.0},  {0, -1, 1.0},
                  {1, 1, r2},   {-1, -1, r2}, {1, -1, r2},  {-1, 1, r2}};
  }

  for (int node = 0; node < n; ++node) {
    if (d.mask_[static_cast<size_t>(node)]) d.masked_nodes_.push_back(node);
  }
  if (d.masked_nodes_.size() < 2) throw DomainError("domain has fewer than 2 interior nodes");

  // connectivity: flood fill over the stencil graph
  std::vector<uint8_t> seen(static_cast<size_t>(n), 0);
  std::queue<int> q;
  q.push(d.masked_nodes_.front());
  seen[static_cast<size_t>(d.masked_nodes_.front())] = 1;
  size_t reached = 1;
  while (!q.empty()) {
    int cur = q.front();
    q.pop();
    for (const auto& off : d.offsets_) {
      int nb = d.neighbor(cur, off);
      if (nb >= 0 && !seen[static_cast<size_t>(nb)]) {
        seen[static_cast<size_t>(nb)] = 1;
        ++reached;
        q.push(nb);
      }
    }
  }
  if (reached != d.masked_nodes_.size()) {
    throw DomainError("domain mask is disconnected: " + std::to_string(reached) + " of " +
                      std::to_string(d.masked_nodes_.size()) + " nodes reachable");
  }

  // interior cells: base + forward neighbor along every axis masked
  d.node_to_cell_.assign(static_cast<size_t>(n), -1);
  for (int node : d.masked_nodes_) {
    int ix = node % d.shape_[0];
    int iy = node / d.shape_[0];
    if (ix + 1 >= d.shape_[0] || !d.mask_[static_cast<size_t>(d.node_index(ix + 1, iy))]) continue;
    if (spec.dim == 2) {
      if (iy + 1 >= d.shape_[1] || !d.mask_[static_cast<size_t>(d.node_index(ix, iy + 1))]) continue;
    }
    d.node_to_cell_[static_cast<size_t>(node)] = static_cast<int>(d.cell_base_.size());
    d.cell_base_.push_back(node);
  }
  if (d.cell_base_.empty()) throw DomainError("domain has no interior cells");
  return d;
}

Vec2 GridDomain::coords(int node) const {
  int ix = node % shape_[0];
  int iy = node / shape_[0];
  return {origin_[0] + ix * spec_.h, spec_.dim == 2 ? origin_[1] + iy * spec_.h : 0.0};
}

std::optional<int> GridDomain::node_at(const Vec2& p) const {
  int idx[2] = {0, 0};
  for (int a = 0; a < spec_.dim; ++a) {
    double t = (p[a] - origin_[a]) / spec_.h;
    double r = std::round(t);
    if (std::fabs(t - r) > 1e-6) return std::nullopt;
    idx[a] = static_cast<int>(r);
    if (idx[a] < 0 || idx[a] >= shape_[a]) return std::nullopt;
  }
  int node = node_index(idx[0], idx[1]);
  if (!masked(node)) return std::nullopt;
  return node;
}

int GridDomain::neighbor(int node, const StencilOffset& off) const {
  int ix = node % shape_[0] + off.dx;
  int iy = node / shape_[0] + off.dy;
  if (ix < 0 || ix >= shape_[0] || iy < 0 || iy >= shape_[1]) return -1;
  int nb = node_index(ix, iy);
  return masked(nb) ? nb : -1;
}

Vec2 GridDomain::cell_center(int cell) const {
  Vec2 p = coords(cell_base_[static_cast<size_t>(cell)]);
  p[0] += 0.5 * spec_.h;
  if (spec_.dim == 2) p[1] += 0.5 * spec_.h;
  return p;
}

int GridDomain::cell_of_point(const Vec2& p) const {
  int idx[2] = {0, 0};
  for (int a = 0; a < spec_.dim; ++a) {
    double t = (p[a] - origin_[a]) / spec_.h;
    idx[a] = static_cast<int>(std::floor(t + 1e-9));
    if (idx[a] < 0 || idx[a] >= shape_[a]) return -1;
  }
  int node = node_index(idx[0], idx[1]);
  return node_to_cell_[static_cast<size_t>(node)];
}

GeodesicTable geodesic_distance(const GridDomain& dom, int source) {
  if (source < 0 || source >= dom.node_count() || !dom.masked(source))
    throw DomainError("geodesic source is outside the domain mask");
  GeodesicTable table;
  table.source = source;
  table.dist.assign(static_cast<size_t>(dom.node_count()), kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  table.dist[static_cast<size_t>(source)] = 0.0;
  heap.emplace(0.0, source);
  const double h = dom.h();
  while (!heap.empty()) {
    auto [d, node] = heap.top();
    heap.pop();
    if (d > table.dist[static_cast<size_t>(node)] + 1e-15) continue;
    for (const auto& off : dom.offsets()) {
      int nb = dom.neighbor(node, off);
      if (nb < 0) continue;
      double nd = d + off.length * h;
      if (nd < table.dist[static_cast<size_t>(nb)] - 1e-15) {
        table.dist[static_cast<size_t>(nb)] = nd;
        heap.emplace(nd, nb);
      }
    }
  }
  return table;
}

std::vector<GeodesicTable> geodesic_all_pairs(const GridDomain& dom) {
  std::vector<GeodesicTable> tables;
  tables.reserve(dom.masked_nodes().size());
  for (int src : dom.masked_nodes()) tables.push_back(geodesic_distance(dom, src));
  return tables;
}

double estimate_domain_constant(const GridDomain& dom, long pair_count, uint64_t seed) {
  if (pair_count < 1) throw DomainError("need at least one sampled pair");
  const auto& nodes = dom.masked_nodes();
  const long n = static_cast<long>(nodes.size());
  double worst = 1.0;

  auto scan_source = [&](int src) {
    GeodesicTable t = geodesic_distance(dom, src);
    Vec2 ps = dom.coords(src);
    for (int node : nodes) {
      if (node == src) continue;
      double eu = norm(dom.coords(node) - ps);
      if (eu <= 0) continue;
      worst = std::max(worst, t.dist[static_cast<size_t>(node)] / eu);
    }
  };

  if (pair_count >= n * (n - 1) / 2) {
    for (int src : nodes) scan_source(src);
    return worst;
  }
  // each source contributes n-1 pairs; sample enough sources to cover the budget
  long sources = std::min<long>(n, (pair_count + n - 2) / std::max<long>(1, n - 1));
  Rng rng(seed);
  for (long i = 0; i < sources; ++i) scan_source(nodes[rng.below(static_cast<uint64_t>(n))]);
  return worst;
}

}  // namespace supremal
