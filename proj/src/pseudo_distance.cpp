#include "supremal/pseudo_distance.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>

#include "supremal/rng.hpp"

namespace supremal {

namespace {

void build_csr(EdgeSystem& es, int node_count) {
  es.head.assign(static_cast<size_t>(node_count) + 1, 0);
  for (const auto& e : es.edges) ++es.head[static_cast<size_t>(e.from) + 1];
  for (size_t i = 1; i < es.head.size(); ++i) es.head[i] += es.head[i - 1];
  es.adj_to.resize(es.edges.size());
  es.adj_w.resize(es.edges.size());
  std::vector<int> cursor(es.head.begin(), es.head.end() - 1);
  for (const auto& e : es.edges) {
    int slot = cursor[static_cast<size_t>(e.from)]++;
    es.adj_to[static_cast<size_t>(slot)] = e.to;
    es.adj_w[static_cast<size_t>(slot)] = e.w;
  }
}

}  // namespace

EdgeSystem build_edge_system(const BoundSupremand& f, double lambda, const GradientWindow& window,
                             const std::vector<uint8_t>* cell_filter) {
  const GridDomain& dom = f.domain();
  SupportTable table = build_support_table(f, lambda, window, cell_filter);
  EdgeSystem es;
  es.empty_level = table.empty_level;
  es.first_empty_cell = table.first_empty_cell;
  if (es.empty_level) return es;

  const auto& offs = dom.offsets();
  const double h = dom.h();
  const int nx = dom.shape(0);
  for (int c = 0; c < dom.cell_count(); ++c) {
    if (cell_filter && !(*cell_filter)[static_cast<size_t>(c)]) continue;
    int base = dom.cell_base(c);
    for (size_t d = 0; d < offs.size(); ++d) {
      const auto& t = offs[d];
      // source node shifted so the step stays inside this cell's square
      int sx = base % nx + std::max(-t.dx, 0);
      int sy = base / nx + std::max(-t.dy, 0);
      int from = sx + nx * sy;
      int to = from + t.dx + nx * t.dy;
      if (!dom.masked(from) || !dom.masked(to)) continue;
      double support = table.at(c, static_cast<int>(d));
      if (std::isinf(support)) continue;  // unconstrained direction
      double w = support * t.length * h;
      es.edges.push_back({from, to, w});
      es.min_weight = std::min(es.min_weight, w);
    }
  }
  build_csr(es, dom.node_count());
  return es;
}

PseudoDistanceField distance_from_edges(const EdgeSystem& es, const GridDomain& dom, double lambda,
                                        int source, DistanceMethod method) {
  if (!dom.masked(source)) throw DomainError("distance source is outside the domain mask");
  PseudoDistanceField field;
  field.lambda = lambda;
  field.source = source;
  field.method = method;
  if (es.empty_level) {
    field.empty_level = true;
    field.dist.assign(static_cast<size_t>(dom.node_count()),
                      std::numeric_limits<double>::quiet_NaN());
    return field;
  }
  field.dist.assign(static_cast<size_t>(dom.node_count()), kInf);
  field.dist[static_cast<size_t>(source)] = 0.0;

  const bool nonneg = es.min_weight >= -1e-12;
  if (method == DistanceMethod::fast && nonneg) {
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
      auto [d, node] = heap.top();
      heap.pop();
      if (d > field.dist[static_cast<size_t>(node)] + 1e-15) continue;
      for (int k = es.head[static_cast<size_t>(node)]; k < es.head[static_cast<size_t>(node) + 1];
           ++k) {
        double nd = d + es.adj_w[static_cast<size_t>(k)];
        int to = es.adj_to[static_cast<size_t>(k)];
        if (nd < field.dist[static_cast<size_t>(to)] - 1e-15) {
          field.dist[static_cast<size_t>(to)] = nd;
          heap.emplace(nd, to);
        }
      }
    }
    return field;
  }

  // label-correcting fixed point (handles negative weights)
  std::deque<int> queue;
  std::vector<uint8_t> in_queue(static_cast<size_t>(dom.node_count()), 0);
  std::vector<int> pushes(static_cast<size_t>(dom.node_count()), 0);
  queue.push_back(source);
  in_queue[static_cast<size_t>(source)] = 1;
  while (!queue.empty()) {
    int node = queue.front();
    queue.pop_front();
    in_queue[static_cast<size_t>(node)] = 0;
    double d = field.dist[static_cast<size_t>(node)];
    for (int k = es.head[static_cast<size_t>(node)]; k < es.head[static_cast<size_t>(node) + 1];
         ++k) {
      double nd = d + es.adj_w[static_cast<size_t>(k)];
      int to = es.adj_to[static_cast<size_t>(k)];
      if (nd < field.dist[static_cast<size_t>(to)] - 1e-15) {
        field.dist[static_cast<size_t>(to)] = nd;
        if (!in_queue[static_cast<size_t>(to)]) {
          if (++pushes[static_cast<size_t>(to)] > dom.node_count() + 1)
            throw DomainError("difference-constraint system is infeasible (negative cycle)");
          in_queue[static_cast<size_t>(to)] = 1;
          queue.push_back(to);
        }
      }
    }
  }
  return field;
}

PseudoDistanceField pseudo_distance_fast(const BoundSupremand& f, double lambda, int source,
                                         const GradientWindow& window,
                                         const std::vector<uint8_t>* cell_filter) {
  EdgeSystem es = build_edge_system(f, lambda, window, cell_filter);
  return distance_from_edges(es, f.domain(), lambda, source, DistanceMethod::fast);
}

PseudoDistanceField pseudo_distance_oracle(const BoundSupremand& f, double lambda, int source,
                                           const GradientWindow& window,
                                           const std::vector<uint8_t>* cell_filter) {
  EdgeSystem es = build_edge_system(f, lambda, window, cell_filter);
  return distance_from_edges(es, f.domain(), lambda, source, DistanceMethod::oracle);
}

SearchResult admissible_search(const BoundSupremand& f, double lambda, int source,
                               const GradientWindow& window, int trials, uint64_t seed) {
  const GridDomain& dom = f.domain();
  SearchResult out;
  out.field.lambda = lambda;
  out.field.source = source;
  out.field.method = DistanceMethod::search;
  out.field.dist.assign(static_cast<size_t>(dom.node_count()), -kInf);
  out.field.dist[static_cast<size_t>(source)] = 0.0;
  Rng rng(seed);

  auto consider = [&](const GridFunction& u) {
    double uy = u[source];
    for (int node : dom.masked_nodes()) {
      double v = u[node] - uy;
      if (v > out.field.dist[static_cast<size_t>(node)])
        out.field.dist[static_cast<size_t>(node)] = v;
    }
    ++out.candidates;
  };

  if (dom.dim() == 1) {
    const int cells = dom.cell_count();
    std::vector<SublevelSection> sections(static_cast<size_t>(cells));
    for (int c = 0; c < cells; ++c) {
      sections[static_cast<size_t>(c)] = sublevel_section(f, c, lambda, window);
      if (sections[static_cast<size_t>(c)].samples.empty()) {
        out.field.empty_level = true;
        out.field.dist.assign(static_cast<size_t>(dom.node_count()),
                              std::numeric_limits<double>::quiet_NaN());
        return out;
      }
    }
    const auto& nodes = dom.masked_nodes();
    auto integrate = [&](const std::function<double(int)>& slope_of_cell) {
      GridFunction u(dom);
      // nodes on a connected 1-D chain are index-ordered
      for (size_t i = 0; i + 1 < nodes.size(); ++i) {
        int cell = dom.cell_at_node(nodes[i]);
        u[nodes[i + 1]] = u[nodes[i]] + dom.h() * slope_of_cell(cell);
      }
      return u;
    };
    // extremal choice: max slope right of the source, min slope left
    auto section_extreme = [&](int cell, bool want_max) {
      double best = want_max ? -kInf : kInf;
      for (const Vec2& s : sections[static_cast<size_t>(cell)].samples)
        best = want_max ? std::max(best, s[0]) : std::min(best, s[0]);
      return best;
    };
    GridFunction extremal = integrate([&](int cell) {
      int base = dom.cell_base(cell);
      return section_extreme(cell, base >= source);
    });
    consider(extremal);
    out.attained = true;
    for (int t = 0; t < trials; ++t) {
      consider(integrate([&](int cell) {
        const auto& s = sections[static_cast<size_t>(cell)].samples;
        return s[rng.below(s.size())][0];
      }));
    }
    return out;
  }

  // 2-D: affine fields with a gradient admissible at every cell
  int probe_cell = 0;
  SublevelSection probe = sublevel_section(f, probe_cell, lambda, window);
  if (probe.samples.empty()) {
    out.field.empty_level = true;
    out.field.dist.assign(static_cast<size_t>(dom.node_count()),
                          std::numeric_limits<double>::quiet_NaN());
    return out;
  }
  std::vector<Vec2> candidates = probe.samples;
  if (static_cast<int>(candidates.size()) > trials) {
    std::vector<Vec2> sub;
    sub.reserve(static_cast<size_t>(trials));
    for (int t = 0; t < trials; ++t) sub.push_back(candidates[rng.below(candidates.size())]);
    candidates.swap(sub);
  }
  Vec2 py = dom.coords(source);
  for (const Vec2& xi : candidates) {
    bool ok = true;
    for (int c = 0; c < dom.cell_count() && ok; ++c)
      ok = f.eval_cell(c, xi) <= lambda + 1e-12;
    if (!ok) continue;
    GridFunction u(dom);
    for (int node : dom.masked_nodes()) u[node] = dot(xi, dom.coords(node) - py);
    consider(u);
  }
  return out;
}

FieldSet multi_source_fields(const BoundSupremand& f, double lambda, const GradientWindow& window,
                             std::vector<int> sources, DistanceMethod method,
                             const std::vector<uint8_t>* cell_filter) {
  EdgeSystem es = build_edge_system(f, lambda, window, cell_filter);
  FieldSet set;
  set.lambda = lambda;
  set.sources = std::move(sources);
  set.empty_level = es.empty_level;
  set.fields.reserve(set.sources.size());
  for (int src : set.sources)
    set.fields.push_back(distance_from_edges(es, f.domain(), lambda, src, method));
  return set;
}

std::vector<int> auto_sources(const GridDomain& dom, long pair_budget, uint64_t seed) {
  const auto& nodes = dom.masked_nodes();
  const long n = static_cast<long>(nodes.size());
  if (n <= 2500) return nodes;  // all pairs at desk scale
  long count = std::max<long>(2, pair_budget / std::max<long>(1, n));
  count = std::min(count, n);
  Rng rng(seed);
  std::vector<int> sources;
  sources.reserve(static_cast<size_t>(count));
  for (long i = 0; i < count; ++i) sources.push_back(nodes[rng.below(static_cast<uint64_t>(n))]);
  std::sort(sources.begin(), sources.end());
  sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
  return sources;
}

SandwichReport sandwich_check(const BoundSupremand& f, const PseudoDistanceField& field,
                              const GeodesicTable& geodesic, std::optional<double> alpha_coeff,
                              std::optional<double> beta_coeff, double rel_tol, double abs_tol) {
  if (field.empty_level) throw DomainError("sandwich_check on an empty level");
  if (geodesic.source != field.source)
    throw DomainError("sandwich_check: geodesic table source differs from the field source");
  SandwichReport rep;
  if (!alpha_coeff && f.linear_bound && *f.linear_bound > 0)
    alpha_coeff = field.lambda / *f.linear_bound;
  if (!beta_coeff && f.coercivity && *f.coercivity > 0) beta_coeff = field.lambda / *f.coercivity;
  rep.lower_checked = alpha_coeff.has_value();
  rep.upper_checked = beta_coeff.has_value();
  rep.alpha_coeff = alpha_coeff.value_or(0.0);
  rep.beta_coeff = beta_coeff.value_or(0.0);

  const GridDomain& dom = f.domain();
  Vec2 py = dom.coords(field.source);
  for (int node : dom.masked_nodes()) {
    if (node == field.source) continue;
    ++rep.checked;
    double d = field.dist[static_cast<size_t>(node)];
    if (alpha_coeff) {
      double eu = norm(dom.coords(node) - py);
      double bound = *alpha_coeff * eu * (1.0 - rel_tol) - abs_tol;
      double slack = d - bound;  // +inf distance always satisfies the lower bound
      if (slack < rep.worst_lower_slack) {
        rep.worst_lower_slack = slack;
        rep.worst_lower_node = node;
      }
      if (slack < -1e-9) rep.pass = false;
    }
    if (beta_coeff) {
      double ge = geodesic.dist[static_cast<size_t>(node)];
      double bound = *beta_coeff * ge * (1.0 + rel_tol) + abs_tol;
      double slack = bound - d;
      if (slack < rep.worst_upper_slack) {
        rep.worst_upper_slack = slack;
        rep.worst_upper_node = node;
      }
      if (slack < -1e-9) rep.pass = false;
    }
  }
  return rep;
}

}  // namespace supremal
