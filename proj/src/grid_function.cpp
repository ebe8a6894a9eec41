#include "supremal/grid_function.hpp"

#include <algorithm>
#include <cmath>

#include "supremal/csv.hpp"

namespace supremal {

GridFunction GridFunction::from_expression(const GridDomain& dom, const ExprPtr& e) {
  GridFunction u(dom);
  Expr::Context ctx;
  ctx.dim = dom.dim();
  ctx.allow_xi = false;
  for (int node : dom.masked_nodes()) {
    ctx.x = dom.coords(node);
    u[node] = e->eval(ctx);
  }
  return u;
}

GridFunction GridFunction::linear(const GridDomain& dom, const Vec2& xi0) {
  GridFunction u(dom);
  for (int node : dom.masked_nodes()) u[node] = dot(xi0, dom.coords(node));
  return u;
}

Vec2 GridFunction::gradient(int cell) const {
  const GridDomain& dom = *dom_;
  int base = dom.cell_base(cell);
  int nx = dom.shape(0);
  double h = dom.h();
  Vec2 g{(values_[static_cast<size_t>(base + 1)] - values_[static_cast<size_t>(base)]) / h, 0.0};
  if (dom.dim() == 2)
    g[1] = (values_[static_cast<size_t>(base + nx)] - values_[static_cast<size_t>(base)]) / h;
  return g;
}

GridFunction GridFunction::plus(const GridFunction& other, double weight) const {
  GridFunction out = *this;
  for (size_t i = 0; i < values_.size(); ++i) out.values_[i] += weight * other.values_[i];
  return out;
}

GridFunction GridFunction::scaled(double s) const {
  GridFunction out = *this;
  for (double& v : out.values_) v *= s;
  return out;
}

GridFunction GridFunction::shifted(double c) const {
  GridFunction out = *this;
  for (double& v : out.values_) v += c;
  return out;
}

SubMask SubMask::whole(const GridDomain& dom) {
  SubMask m;
  m.nodes.assign(static_cast<size_t>(dom.node_count()), 0);
  for (int node : dom.masked_nodes()) m.nodes[static_cast<size_t>(node)] = 1;
  m.cells.assign(static_cast<size_t>(dom.cell_count()), 1);
  return m;
}

namespace {

void derive_cells(const GridDomain& dom, SubMask& m) {
  m.cells.assign(static_cast<size_t>(dom.cell_count()), 0);
  int nx = dom.shape(0);
  for (int c = 0; c < dom.cell_count(); ++c) {
    int base = dom.cell_base(c);
    bool in = m.nodes[static_cast<size_t>(base)] && m.nodes[static_cast<size_t>(base + 1)];
    if (dom.dim() == 2) in = in && m.nodes[static_cast<size_t>(base + nx)];
    m.cells[static_cast<size_t>(c)] = in ? 1 : 0;
  }
}

}  // namespace

SubMask SubMask::from_boxes(const GridDomain& dom, const std::vector<Box>& boxes) {
  SubMask m;
  m.nodes.assign(static_cast<size_t>(dom.node_count()), 0);
  for (int node : dom.masked_nodes()) {
    Vec2 p = dom.coords(node);
    for (const Box& b : boxes) {
      // strictly inside the open box
      bool in = true;
      for (int a = 0; a < dom.dim(); ++a)
        in = in && p[a] > b.lo[a] + 1e-12 && p[a] < b.hi[a] - 1e-12;
      if (in) {
        m.nodes[static_cast<size_t>(node)] = 1;
        break;
      }
    }
  }
  derive_cells(dom, m);
  return m;
}

SubMask SubMask::union_of(const SubMask& a, const SubMask& b) {
  SubMask m = a;
  for (size_t i = 0; i < m.nodes.size(); ++i) m.nodes[i] = m.nodes[i] || b.nodes[i];
  for (size_t i = 0; i < m.cells.size(); ++i) m.cells[i] = m.cells[i] || b.cells[i];
  return m;
}

int SubMask::cell_count() const {
  int n = 0;
  for (uint8_t c : cells) n += c;
  return n;
}

std::vector<Vec2> discrete_gradient(const GridFunction& u) {
  const GridDomain& dom = u.domain();
  std::vector<Vec2> g(static_cast<size_t>(dom.cell_count()));
  for (int c = 0; c < dom.cell_count(); ++c) g[static_cast<size_t>(c)] = u.gradient(c);
  return g;
}

double supremal_value(const BoundSupremand& f, const GridFunction& u, const SubMask* A) {
  const GridDomain& dom = f.domain();
  double best = -kInf;
  bool any = false;
  for (int c = 0; c < dom.cell_count(); ++c) {
    if (A && !A->cells[static_cast<size_t>(c)]) continue;
    any = true;
    best = std::max(best, f.eval_cell(c, u.gradient(c)));
  }
  if (!any) throw DomainError("sub-mask contains no interior cell");
  return best;
}

namespace {

LipschitzSeminorms seminorms_impl(const GridFunction& u,
                                  const std::vector<GeodesicTable>* geodesics) {
  const GridDomain& dom = u.domain();
  LipschitzSeminorms out;
  for (int c = 0; c < dom.cell_count(); ++c) {
    Vec2 g = u.gradient(c);
    out.grad_sup = std::max(out.grad_sup, dom.dim() == 2 ? norm(g) : std::fabs(g[0]));
  }
  const auto& nodes = dom.masked_nodes();
  std::vector<Vec2> pos(nodes.size());
  for (size_t i = 0; i < nodes.size(); ++i) pos[i] = dom.coords(nodes[i]);
  for (size_t i = 0; i < nodes.size(); ++i) {
    const GeodesicTable* table = nullptr;
    GeodesicTable local;
    if (geodesics) {
      table = &(*geodesics)[i];
    } else {
      local = geodesic_distance(dom, nodes[i]);
      table = &local;
    }
    double ui = u[nodes[i]];
    for (size_t j = i + 1; j < nodes.size(); ++j) {
      double dv = std::fabs(u[nodes[j]] - ui);
      if (dv == 0.0) continue;
      double eu = norm(pos[j] - pos[i]);
      if (eu > 0) out.lip_euclid = std::max(out.lip_euclid, dv / eu);
      double ge = table->dist[static_cast<size_t>(nodes[j])];
      if (ge > 0 && std::isfinite(ge)) out.lip_geodesic = std::max(out.lip_geodesic, dv / ge);
    }
  }
  return out;
}

}  // namespace

LipschitzSeminorms lipschitz_seminorms(const GridFunction& u) { return seminorms_impl(u, nullptr); }

LipschitzSeminorms lipschitz_seminorms(const GridFunction& u,
                                       const std::vector<GeodesicTable>& geodesics) {
  return seminorms_impl(u, &geodesics);
}

GridFunction mcshane_extend(const GridFunction& u, const SubMask& sub, double L) {
  const GridDomain& dom = u.domain();
  std::vector<int> anchors;
  for (int node : dom.masked_nodes())
    if (sub.nodes[static_cast<size_t>(node)]) anchors.push_back(node);
  if (anchors.empty()) throw DomainError("mcshane_extend: empty sub-mask");

  // reject L below the euclidean seminorm of u on sub
  for (size_t i = 0; i < anchors.size(); ++i) {
    Vec2 pi = dom.coords(anchors[i]);
    for (size_t j = i + 1; j < anchors.size(); ++j) {
      double eu = norm(dom.coords(anchors[j]) - pi);
      if (eu <= 0) continue;
      if (std::fabs(u[anchors[j]] - u[anchors[i]]) > L * eu + 1e-9)
        throw DomainError("mcshane_extend: L is below the Lipschitz constant of u on sub");
    }
  }

  GridFunction out(dom);
  for (int node : dom.masked_nodes()) {
    Vec2 p = dom.coords(node);
    double best = kInf;
    for (int a : anchors) best = std::min(best, u[a] + L * norm(dom.coords(a) - p));
    out[node] = best;
  }
  return out;
}

GridFunction sawtooth(const GridDomain& dom, int n, double slope) {
  if (dom.dim() != 1) throw DomainError("sawtooth is 1-D only");
  if (n < 1 || !(slope > 0)) throw DomainError("sawtooth needs n >= 1 and slope > 0");
  const double period = 1.0 / n;
  const double half = 0.5 / n;
  auto wave = [&](double x) {
    double ax = std::fabs(x);
    double t = std::fmod(ax, period);
    double v = t <= half ? slope * t : slope * (period - t);
    return x < 0 ? -v : v;  // odd extension
  };
  GridFunction u(dom);
  for (int node : dom.masked_nodes()) u[node] = wave(dom.coords(node)[0]);
  return u;
}

void write_field_csv(const GridFunction& u, const std::string& path) {
  const GridDomain& dom = u.domain();
  std::vector<std::string> header =
      dom.dim() == 2 ? std::vector<std::string>{"x", "y", "value"} : std::vector<std::string>{"x", "value"};
  CsvWriter w(path, header);
  for (int node : dom.masked_nodes()) {
    Vec2 p = dom.coords(node);
    if (dom.dim() == 2) {
      w.row({p[0], p[1], u[node]});
    } else {
      w.row({p[0], u[node]});
    }
  }
  w.close();
}

GridFunction read_field_csv(const GridDomain& dom, const std::string& path) {
  CsvTable t = read_csv(path);
  const size_t coords = dom.dim() == 2 ? 2 : 1;
  GridFunction u(dom);
  std::vector<uint8_t> seen(static_cast<size_t>(dom.node_count()), 0);
  for (const auto& row : t.rows) {
    if (row.size() < coords + 1) throw ConfigError("field CSV row too short in " + path);
    Vec2 p{row[0], coords == 2 ? row[1] : 0.0};
    auto node = dom.node_at(p);
    if (!node) throw ConfigError("field CSV point off the domain lattice in " + path);
    u[*node] = row[coords];
    seen[static_cast<size_t>(*node)] = 1;
  }
  for (int node : dom.masked_nodes())
    if (!seen[static_cast<size_t>(node)])
      throw ConfigError("field CSV misses a domain node in " + path);
  return u;
}

}  // namespace supremal
