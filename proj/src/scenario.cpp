#include "supremal/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "supremal/csv.hpp"
#include "supremal/expression.hpp"
#include "supremal/grid_domain.hpp"
#include "supremal/grid_function.hpp"
#include "supremal/pseudo_distance.hpp"
#include "supremal/relaxation.hpp"
#include "supremal/representation.hpp"
#include "supremal/rng.hpp"
#include "supremal/supremand.hpp"

namespace supremal {

using nlohmann::json;

namespace {

std::string fmt(double v) { return CsvWriter::format_double(v); }

int line_of_byte(const std::string& text, size_t byte) {
  int line = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

Vec2 parse_point(const json& j, int dim) {
  Vec2 p{0.0, 0.0};
  if (j.is_number()) {
    p[0] = j.get<double>();
    return p;
  }
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw ConfigError("point must be a number (1-D) or an array matching the dimension");
  for (int a = 0; a < dim; ++a) p[a] = j[static_cast<size_t>(a)].get<double>();
  return p;
}

Box parse_box(const json& j, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw ConfigError("box needs one [lo, hi] per axis");
  Box b;
  for (int a = 0; a < dim; ++a) {
    const json& iv = j[static_cast<size_t>(a)];
    if (!iv.is_array() || iv.size() != 2) throw ConfigError("box interval must be [lo, hi]");
    b.lo[a] = iv[0].get<double>();
    b.hi[a] = iv[1].get<double>();
  }
  return b;
}

std::vector<Box> parse_boxes(const json& j, int dim) {
  std::vector<Box> boxes;
  if (!j.is_array()) throw ConfigError("region must be an array of boxes or \"else\"");
  for (const json& bj : j) boxes.push_back(parse_box(bj, dim));
  return boxes;
}

Region parse_region(const json& j, int dim) {
  Region r;
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "else" || s == "all") {
      r.catch_all = true;
      return r;
    }
    throw ConfigError("region string must be \"else\" or \"all\"");
  }
  r.boxes = parse_boxes(j, dim);
  return r;
}

Supremand parse_supremand(const json& j, int dim) {
  if (!j.contains("pieces") || !j["pieces"].is_array() || j["pieces"].empty())
    throw ConfigError("supremand needs a nonempty pieces array");
  std::vector<Piece> pieces;
  for (const json& pj : j["pieces"]) {
    Piece p;
    p.region = parse_region(pj.at("region"), dim);
    p.profile = Expr::parse(pj.at("profile").get<std::string>());
    pieces.push_back(std::move(p));
  }
  Supremand f(dim, std::move(pieces));
  if (j.contains("coercivity") && !j["coercivity"].is_null())
    f.coercivity = j["coercivity"].get<double>();
  if (j.contains("linear_bound") && !j["linear_bound"].is_null())
    f.linear_bound = j["linear_bound"].get<double>();
  return f;
}

struct Context {
  std::string name;
  uint64_t seed = 1;
  double tol_override = -1.0;  // <0: none
  std::string out_dir;
  GridDomain dom;
  GradientWindow window;
  std::map<std::string, Supremand> supremands;
  std::map<std::string, BoundSupremand> bound;
  std::map<std::string, GridFunction> fields;
  Report* report = nullptr;

  const BoundSupremand& get_bound(const std::string& fname) {
    auto it = bound.find(fname);
    if (it != bound.end()) return it->second;
    auto fit = supremands.find(fname);
    if (fit == supremands.end()) throw ConfigError("unknown supremand '" + fname + "'");
    auto [ins, _] = bound.emplace(fname, BoundSupremand::bind(fit->second, dom));
    return ins->second;
  }

  const Supremand& get_supremand(const std::string& fname) const {
    auto it = supremands.find(fname);
    if (it == supremands.end()) throw ConfigError("unknown supremand '" + fname + "'");
    return it->second;
  }

  GridFunction get_field(const json& j) {
    if (j.is_string()) {
      std::string s = j.get<std::string>();
      auto it = fields.find(s);
      if (it != fields.end()) return it->second;
      try {
        return GridFunction::from_expression(dom, s);
      } catch (const ExprError&) {
        throw ConfigError("unknown field '" + s + "' (not a name, not an expression)");
      }
    }
    throw ConfigError("field reference must be a name or expression string");
  }

  double op_tol(const json& j, const char* key, double fallback) const {
    if (tol_override >= 0) return tol_override;
    return j.value(key, fallback);
  }

  std::string export_path(const std::string& file) const {
    if (out_dir.empty()) return {};
    std::filesystem::create_directories(out_dir);
    return (std::filesystem::path(out_dir) / file).string();
  }
};

void assert_close(OpResult& res, const std::string& what, double got, double expect, double tol) {
  OpResult::Assertion a;
  a.what = what;
  bool both_inf = std::isinf(got) && std::isinf(expect) && (got > 0) == (expect > 0);
  a.pass = both_inf || std::fabs(got - expect) <= tol;
  a.detail = "got " + fmt(got) + ", expected " + fmt(expect) + " within " + fmt(tol);
  res.assertions.push_back(std::move(a));
}

void assert_true(OpResult& res, const std::string& what, bool pass, const std::string& detail) {
  res.assertions.push_back({what, pass, detail});
}

// random piecewise-affine field: independent cell slopes, integrated from the
// first node; `flip_sign` draws the magnitude from [lo, hi] with random sign
GridFunction random_slope_field(const GridDomain& dom, Rng& rng, double lo, double hi,
                                bool flip_sign) {
  if (dom.dim() != 1) throw ConfigError("random slope fields are 1-D");
  GridFunction u(dom);
  const auto& nodes = dom.masked_nodes();
  for (size_t i = 0; i + 1 < nodes.size(); ++i) {
    double s = rng.uniform(lo, hi);
    if (flip_sign && rng.below(2) == 0) s = -s;
    u[nodes[i + 1]] = u[nodes[i]] + dom.h() * s;
  }
  return u;
}

double eval_xy_expr(const ExprPtr& e, const Vec2& x, const Vec2& xi, int dim) {
  Expr::Context ctx;
  ctx.x = x;
  ctx.xi = xi;
  ctx.dim = dim;
  return e->eval(ctx);
}

// ---------------------------------------------------------------------------
// operation handlers

OpResult op_eval(Context& cx, const json& j) {
  OpResult res{"eval", {}, {}};
  const BoundSupremand& f = cx.get_bound(j.at("f").get<std::string>());
  Vec2 x = parse_point(j.at("x"), cx.dom.dim());
  Vec2 xi = parse_point(j.at("xi"), cx.dom.dim());
  int cell = cx.dom.cell_of_point(x);
  if (cell < 0) throw ConfigError("eval point has no interior cell");
  double v = f.eval_cell(cell, xi);
  res.detail = "f(" + fmt(x[0]) + ", " + fmt(xi[0]) + ") = " + fmt(v);
  if (j.contains("expect"))
    assert_close(res, "eval value", v, j["expect"].get<double>(), cx.op_tol(j, "tol", 0.0));
  return res;
}

OpResult op_supremal(Context& cx, const json& j) {
  OpResult res{"supremal", {}, {}};
  const BoundSupremand& f = cx.get_bound(j.at("f").get<std::string>());
  GridFunction u = cx.get_field(j.at("u"));
  std::optional<SubMask> mask;
  if (j.contains("region")) mask = SubMask::from_boxes(cx.dom, parse_boxes(j["region"], cx.dom.dim()));
  double v = supremal_value(f, u, mask ? &*mask : nullptr);
  res.detail = "F(u" + std::string(mask ? ", A" : "") + ") = " + fmt(v);
  if (j.contains("expect"))
    assert_close(res, "supremal value", v, j["expect"].get<double>(), cx.op_tol(j, "tol", 0.0));
  return res;
}

OpResult op_geodesic(Context& cx, const json& j) {
  OpResult res{"geodesic", {}, {}};
  auto source = cx.dom.node_at(parse_point(j.at("source"), cx.dom.dim()));
  if (!source) throw ConfigError("geodesic source is not a domain node");
  GeodesicTable t = geodesic_distance(cx.dom, *source);
  res.detail = "source node " + std::to_string(*source);
  if (j.contains("to")) {
    auto target = cx.dom.node_at(parse_point(j["to"], cx.dom.dim()));
    if (!target) throw ConfigError("geodesic target is not a domain node");
    double d = t.dist[static_cast<size_t>(*target)];
    res.detail += ", dist to target " + fmt(d);
    if (j.contains("expect"))
      assert_close(res, "geodesic distance", d, j["expect"].get<double>(),
                   cx.op_tol(j, "tol", 1e-9));
  }
  if (j.contains("export")) {
    std::string path = cx.export_path(j["export"].get<std::string>());
    if (!path.empty()) {
      std::vector<std::string> hdr = cx.dom.dim() == 2 ? std::vector<std::string>{"x", "y", "dist"}
                                                       : std::vector<std::string>{"x", "dist"};
      CsvWriter w(path, hdr);
      for (int node : cx.dom.masked_nodes()) {
        Vec2 p = cx.dom.coords(node);
        if (cx.dom.dim() == 2) {
          w.row({p[0], p[1], t.dist[static_cast<size_t>(node)]});
        } else {
          w.row({p[0], t.dist[static_cast<size_t>(node)]});
        }
      }
      w.close();
      cx.report->exported_files.push_back(path);
    }
  }
  return res;
}

OpResult op_domain_constant(Context& cx, const json& j) {
  OpResult res{"domain_constant", {}, {}};
  long pairs = j.value("pairs", 10000L);
  double c = estimate_domain_constant(cx.dom, pairs, cx.seed);
  res.detail = "C_estimate = " + fmt(c) + " over " + std::to_string(pairs) + " pairs";
  if (j.contains("expect"))
    assert_close(res, "domain constant", c, j["expect"].get<double>(), cx.op_tol(j, "tol", 1e-6));
  if (j.contains("expect_min"))
    assert_true(res, "domain constant lower bound", c >= j["expect_min"].get<double>(),
                "got " + fmt(c));
  return res;
}

OpResult op_distance(Context& cx, const json& j) {
  OpResult res{"distance", {}, {}};
  const BoundSupremand& f = cx.get_bound(j.at("f").get<std::string>());
  double lambda = j.at("lambda").get<double>();
  auto source = cx.dom.node_at(parse_point(j.at("source"), cx.dom.dim()));
  if (!source) throw ConfigError("distance source is not a domain node");
  std::optional<SubMask> mask;
  if (j.contains("region")) mask = SubMask::from_boxes(cx.dom, parse_boxes(j["region"], cx.dom.dim()));
  const std::vector<uint8_t>* filter = mask ? &mask->cells : nullptr;
  std::string method = j.value("method", "fast");

  PseudoDistanceField field;
  if (method == "fast" || method == "both") {
    field = pseudo_distance_fast(f, lambda, *source, cx.window, filter);
  } else if (method == "oracle") {
    field = pseudo_distance_oracle(f, lambda, *source, cx.window, filter);
  } else {
    throw ConfigError("distance method must be fast, oracle or both");
  }
  if (field.empty_level) {
    res.detail = "empty level sentinel (some cell has no admissible gradient)";
    assert_true(res, "level nonempty", !j.value("expect_nonempty", true), "empty level sentinel");
    return res;
  }
  if (method == "both") {
    PseudoDistanceField o = pseudo_distance_oracle(f, lambda, *source, cx.window, filter);
    double worst = 0.0;
    for (int node : cx.dom.masked_nodes()) {
      double a = field.dist[static_cast<size_t>(node)], b = o.dist[static_cast<size_t>(node)];
      if (std::isinf(a) && std::isinf(b)) continue;
      worst = std::max(worst, std::fabs(a - b));
    }
    assert_true(res, "fast/oracle agreement", worst <= 1e-9, "max diff " + fmt(worst));
  }
  res.detail = "lambda " + fmt(lambda) + ", source node " + std::to_string(*source);
  if (j.contains("expect")) {
    ExprPtr e = Expr::parse(j["expect"].get<std::string>());
    double tol = cx.op_tol(j, "tol", 1e-9);
    double worst = 0.0;
    int worst_node = -1;
    for (int node : cx.dom.masked_nodes()) {
      double want = eval_xy_expr(e, cx.dom.coords(node), {0, 0}, cx.dom.dim());
      double got = field.dist[static_cast<size_t>(node)];
      if (std::isinf(want) && std::isinf(got)) continue;
      double err = std::fabs(got - want);
      if (err > worst) {
        worst = err;
        worst_node = node;
      }
    }
    assert_true(res, "distance field matches closed form", worst <= tol,
                "max error " + fmt(worst) + " at node " + std::to_string(worst_node));
  }
  if (j.contains("export")) {
    std::string path = cx.export_path(j["export"].get<std::string>());
    if (!path.empty()) {
      std::vector<std::string> hdr = cx.dom.dim() == 2
                                         ? std::vector<std::string>{"x", "y", "lambda", "d", "method"}
                                         : std::vector<std::string>{"x", "lambda", "d", "method"};
      CsvWriter w(path, hdr);
      for (int node : cx.dom.masked_nodes()) {
        Vec2 p = cx.dom.coords(node);
        std::string m = field.method == DistanceMethod::fast ? "fast" : "oracle";
        if (cx.dom.dim() == 2) {
          w.row({p[0], p[1], lambda, field.dist[static_cast<size_t>(node)], m});
        } else {
          w.row({p[0], lambda, field.dist[static_cast<size_t>(node)], m});
        }
      }
      w.close();
      cx.report->exported_files.push_back(path);
    }
  }
  return res;
}

OpResult op_sandwich(Context& cx, const json& j) {
  OpResult res{"sandwich", {}, {}};
  const BoundSupremand& f = cx.get_bound(j.at("f").get<std::string>());
  double lambda = j.at("lambda").get<double>();
  int source_count = j.value("sources", 3);
  double rel = j.value("rel_tol", stencil_anisotropy(cx.dom.stencil(), cx.dom.dim()));
  std::optional<double> alpha, beta;
  if (j.contains("alpha_coeff")) alpha = j["alpha_coeff"].get<double>();
  if (j.contains("beta_coeff")) beta = j["beta_coeff"].get<double>();

  Rng rng(cx.seed + 17);
  const auto& nodes = cx.dom.masked_nodes();
  double worst_lower = kInf, worst_upper = kInf;
  bool pass = true;
  double abs_tol = j.value("abs_tol", -1.0);
  for (int s = 0; s < source_count; ++s) {
    int source = nodes[rng.below(nodes.size())];
    PseudoDistanceField field = pseudo_distance_fast(f, lambda, source, cx.window);
    if (field.empty_level) throw ConfigError("sandwich: empty level");
    GeodesicTable geo = geodesic_distance(cx.dom, source);
    double abs_eff = abs_tol;
    if (abs_eff < 0) {
      double a = alpha ? *alpha : (f.linear_bound ? lambda / *f.linear_bound : 0.0);
      double b = beta ? *beta : (f.coercivity ? lambda / *f.coercivity : 0.0);
      abs_eff = 2 * cx.dom.h() * std::max(a, b);
    }
    SandwichReport rep = sandwich_check(f, field, geo, alpha, beta, rel, abs_eff);
    pass = pass && rep.pass;
    worst_lower = std::min(worst_lower, rep.worst_lower_slack);
    worst_upper = std::min(worst_upper, rep.worst_upper_slack);
  }
  res.detail = "lambda " + fmt(lambda) + ", " + std::to_string(source_count) +
               " sources, worst slack lower " + fmt(worst_lower) + " upper " + fmt(worst_upper);
  assert_true(res, "sandwich bounds", pass, res.detail);
  return res;
}

OpResult op_relax(Context& cx, const json& j) {
  OpResult res{"relax", {}, {}};
  const BoundSupremand& f = cx.get_bound(j.at("f").get<std::string>());
  GridFunction u = j.contains("u_csv")
                       ? read_field_csv(cx.dom, j["u_csv"].get<std::string>())
                       : cx.get_field(j.at("u"));
  const json& br = j.at("bracket");
  RelaxOptions opts;
  opts.window = cx.window;
  opts.tol = j.value("tol", 1e-4);
  if (j.contains("eps")) opts.eps = j["eps"].get<double>();
  std::optional<SubMask> mask;
  if (j.contains("region")) {
    mask = SubMask::from_boxes(cx.dom, parse_boxes(j["region"], cx.dom.dim()));
    opts.localize = &*mask;
  }
  double lo = br[0].get<double>();
  std::string witness_note;
  if (j.contains("witness")) {
    // declared witness field: the shifted pipeline floors the level ladder at
    // c = F(witness) and reports the envelope joined with c
    GridFunction w = cx.get_field(j["witness"]);
    double c = supremal_value(f, w, mask ? &*mask : nullptr);
    lo = std::max(lo, c);
    witness_note = ", witness level " + fmt(c);
  }
  EnvelopeResult r = relax_value(f, u, lo, br[1].get<double>(), opts);
  res.detail = "value " + fmt(r.value) + " bracket [" + fmt(r.lo) + ", " + fmt(r.hi) +
               "] eps " + fmt(r.eps_used) + witness_note + (r.bracketed ? "" : " (not bracketed)") +
               (r.monotone_suspect ? " (non-monotone probes)" : "");
  if (j.contains("expect"))
    assert_close(res, "relaxed value", r.value, j["expect"].get<double>(),
                 cx.op_tol(j, "expect_tol", 2 * opts.tol));
  if (j.contains("export")) {
    std::string path = cx.export_path(j["export"].get<std::string>());
    if (!path.empty()) {
      CsvWriter w(path, {"mu", "R"});
      for (const auto& [mu, R] : r.probes) w.row({mu, R});
      w.close();
      cx.report->exported_files.push_back(path);
    }
  }
  return res;
}

OpResult op_envelope(Context& cx, const json& j) {
  OpResult res{"envelope", {}, {}};
  const BoundSupremand& f = cx.get_bound(j.at("f").get<std::string>());
  int cell = 0;
  if (j.contains("at")) {
    cell = cx.dom.cell_of_point(parse_point(j["at"], cx.dom.dim()));
    if (cell < 0) throw ConfigError("envelope point has no interior cell");
  }
  GradientWindow window = cx.window;
  if (j.contains("window")) window.half_width = j["window"].get<double>();
  if (j.contains("dxi")) window.dxi = j["dxi"].get<double>();
  EnvelopePair pair = level_convex_envelope(f, cell, window);
  res.detail = "cell " + std::to_string(cell) + ", " + std::to_string(pair.f.size()) + " samples";
  if (j.contains("expect")) {
    ExprPtr e = Expr::parse(j["expect"].get<std::string>());
    double tol = cx.op_tol(j, "tol", 1e-6);
    double worst = 0.0;
    for (size_t i = 0; i < pair.envelope.size(); ++i) {
      Vec2 xi = pair.envelope.point(i);
      double want = eval_xy_expr(e, {0, 0}, xi, f.dim());
      worst = std::max(worst, std::fabs(pair.envelope.values[i] - want));
    }
    assert_true(res, "envelope matches closed form", worst <= tol, "max error " + fmt(worst));
  }
  SampledProfile again = level_convex_envelope_profile(pair.envelope);
  bool idem = again.values == pair.envelope.values;
  assert_true(res, "envelope idempotent on the sample grid", idem, idem ? "exact" : "differs");
  if (j.contains("export")) {
    std::string path = cx.export_path(j["export"].get<std::string>());
    if (!path.empty()) {
      if (f.dim() == 1) {
        CsvWriter w(path, {"xi", "f", "flc"});
        for (size_t i = 0; i < pair.f.size(); ++i)
          w.row({pair.f.point(i)[0], pair.f.values[i], pair.envelope.values[i]});
        w.close();
      } else {
        CsvWriter w(path, {"xi1", "xi2", "f", "flc"});
        for (size_t i = 0; i < pair.f.size(); ++i) {
          Vec2 xi = pair.f.point(i);
          w.row({xi[0], xi[1], pair.f.values[i], pair.envelope.values[i]});
        }
        w.close();
      }
      cx.report->exported_files.push_back(path);
    }
  }
  return res;
}

OpResult op_represent(Context& cx, const json& j) {
  OpResult res{"represent", {}, {}};
  const BoundSupremand& f = cx.get_bound(j.at("f").get<std::string>());
  RepresentationOptions opts;
  opts.window = cx.window;
  opts.budget = j.value("budget", 200);
  std::vector<Vec2> xs, xis;
  for (const json& xj : j.at("xs")) xs.push_back(parse_point(xj, cx.dom.dim()));
  for (const json& gj : j.at("xis")) xis.push_back(parse_point(gj, cx.dom.dim()));
  RepresentationTable table = representation_table(f, xs, xis, opts);
  res.detail = std::to_string(table.rows.size()) + " (x, xi) samples";

  bool none_below = true;
  for (const auto& row : table.rows) none_below = none_below && !row.phi_below_f;
  assert_true(res, "phi dominates f on samples", none_below, "");

  if (j.contains("expect")) {
    struct ExpectPiece {
      Region region;
      ExprPtr value;
    };
    std::vector<ExpectPiece> expects;
    for (const json& ej : j["expect"])
      expects.push_back({parse_region(ej.at("region"), cx.dom.dim()),
                         Expr::parse(ej.at("value").get<std::string>())});
    double tol = cx.op_tol(j, "tol", 1e-6);
    double worst = 0.0;
    for (const auto& row : table.rows) {
      const ExpectPiece* piece = nullptr;
      for (const auto& e : expects)
        if (e.region.contains(row.x, cx.dom.dim())) {
          piece = &e;
          break;
        }
      if (!piece) throw ConfigError("representation expectation does not cover a sampled x");
      double want = eval_xy_expr(piece->value, row.x, row.xi, cx.dom.dim());
      worst = std::max(worst, std::fabs(row.phi - want));
    }
    assert_true(res, "phi matches closed form", worst <= tol, "max error " + fmt(worst));
  }
  if (j.contains("export")) {
    std::string path = cx.export_path(j["export"].get<std::string>());
    if (!path.empty()) {
      CsvWriter w(path, {"x", "xi", "f", "phi"});
      for (const auto& row : table.rows) w.row({row.x[0], row.xi[0], row.f_value, row.phi});
      w.close();
      cx.report->exported_files.push_back(path);
    }
  }
  return res;
}

OpResult op_localized(Context& cx, const json& j) {
  OpResult res{"localized", {}, {}};
  const BoundSupremand& f = cx.get_bound(j.at("f").get<std::string>());
  std::vector<SubMask> regions;
  for (const json& rj : j.at("regions"))
    regions.push_back(SubMask::from_boxes(cx.dom, parse_boxes(rj, cx.dom.dim())));
  std::vector<double> ladder;
  for (const json& xj : j.at("xis")) ladder.push_back(xj.get<double>());
  const json& br = j.at("bracket");
  double tol = cx.op_tol(j, "tol", 2e-3);
  RelaxOptions opts;
  opts.window = cx.window;
  opts.tol = tol / 4;

  std::vector<GridFunction> probes;
  for (double xi : ladder) probes.push_back(GridFunction::linear(cx.dom, {xi, 0.0}));
  int extra = j.value("probes", 0);
  Rng rng(cx.seed + 41);
  double span = std::max(std::fabs(ladder.front()), std::fabs(ladder.back()));
  for (int i = 0; i < extra; ++i)
    probes.push_back(random_slope_field(cx.dom, rng, 0.0, span, true));

  LocalizedFit fit = localized_relaxed_supremand(f, regions, ladder, probes, br[0].get<double>(),
                                                 br[1].get<double>(), opts, tol);
  res.detail = std::to_string(fit.fits.size()) + " classes, max residual " + fmt(fit.max_residual);
  assert_true(res, "localized supremand fit", fit.pass, res.detail);

  if (j.contains("expect_g")) {
    struct ExpectPiece {
      Region region;
      ExprPtr value;
    };
    std::vector<ExpectPiece> expects;
    for (const json& ej : j["expect_g"])
      expects.push_back({parse_region(ej.at("region"), cx.dom.dim()),
                         Expr::parse(ej.at("value").get<std::string>())});
    double worst = 0.0;
    for (int c = 0; c < cx.dom.cell_count(); ++c) {
      int cls = f.cell_class(c);
      Vec2 center = cx.dom.cell_center(c);
      const ExpectPiece* piece = nullptr;
      for (const auto& e : expects)
        if (e.region.contains(center, cx.dom.dim())) {
          piece = &e;
          break;
        }
      if (!piece) continue;
      for (size_t k = 0; k < ladder.size(); ++k) {
        double want = eval_xy_expr(piece->value, center, {ladder[k], 0.0}, cx.dom.dim());
        worst = std::max(worst,
                         std::fabs(fit.fits[static_cast<size_t>(cls)].g_values[k] - want));
      }
    }
    assert_true(res, "fitted g matches closed form", worst <= tol, "max error " + fmt(worst));
  }
  if (j.contains("export")) {
    std::string path = cx.export_path(j["export"].get<std::string>());
    if (!path.empty()) {
      CsvWriter w(path, {"x", "xi", "f", "g"});
      for (int c = 0; c < cx.dom.cell_count(); ++c) {
        int cls = f.cell_class(c);
        Vec2 center = cx.dom.cell_center(c);
        for (size_t k = 0; k < ladder.size(); ++k) {
          w.row({center[0], ladder[k], f.eval_cell(c, {ladder[k], 0.0}),
                 fit.fits[static_cast<size_t>(cls)].g_values[k]});
        }
      }
      w.close();
      cx.report->exported_files.push_back(path);
    }
  }
  return res;
}

OpResult op_lattice_meet(Context& cx, const json& j) {
  OpResult res{"lattice_meet", {}, {}};
  const BoundSupremand& bf = cx.get_bound(j.at("f").get<std::string>());
  const BoundSupremand& bg = cx.get_bound(j.at("g").get<std::string>());
  GridFunction u = j.contains("u") ? cx.get_field(j["u"]) : GridFunction(cx.dom);
  SubMask A = SubMask::from_boxes(cx.dom, parse_boxes(j.at("A"), cx.dom.dim()));
  SubMask B = SubMask::from_boxes(cx.dom, parse_boxes(j.at("B"), cx.dom.dim()));
  SubMask both = SubMask::union_of(A, B);
  auto meet = [&](const SubMask& m) {
    return std::min(supremal_value(bf, u, &m), supremal_value(bg, u, &m));
  };
  double on_union = meet(both);
  double on_parts = std::max(meet(A), meet(B));
  res.detail = "(F^G)(u, AuB) = " + fmt(on_union) + ", parts max = " + fmt(on_parts);
  if (j.contains("expect_union"))
    assert_close(res, "meet on union", on_union, j["expect_union"].get<double>(), 0.0);
  if (j.contains("expect_parts"))
    assert_close(res, "meet max over parts", on_parts, j["expect_parts"].get<double>(), 0.0);
  if (j.value("expect_strict_gap", false))
    assert_true(res, "union value exceeds parts (not supremal)", on_union > on_parts,
                fmt(on_union) + " > " + fmt(on_parts));
  return res;
}

OpResult op_lattice_join(Context& cx, const json& j) {
  OpResult res{"lattice_join", {}, {}};
  const Supremand& f = cx.get_supremand(j.at("f").get<std::string>());
  const Supremand& g = cx.get_supremand(j.at("g").get<std::string>());
  const BoundSupremand& bf = cx.get_bound(j.at("f").get<std::string>());
  const BoundSupremand& bg = cx.get_bound(j.at("g").get<std::string>());
  BoundSupremand bfg = BoundSupremand::bind_max(f, g, cx.dom);
  bool all_exact = true;
  int count = 0;
  for (const json& fj : j.at("fields")) {
    GridFunction u = cx.get_field(fj);
    double lhs = supremal_value(bfg, u);
    double rhs = std::max(supremal_value(bf, u), supremal_value(bg, u));
    all_exact = all_exact && lhs == rhs;
    ++count;
  }
  res.detail = std::to_string(count) + " fields";
  assert_true(res, "sup-value of f v g equals F v G exactly", all_exact, res.detail);
  return res;
}

OpResult op_lattice_shift(Context& cx, const json& j) {
  OpResult res{"lattice_shift", {}, {}};
  const Supremand& f = cx.get_supremand(j.at("f").get<std::string>());
  double c = j.at("c").get<double>();
  const json& br = j.at("bracket");
  LatticeOptions opts;
  opts.relax.window = cx.window;
  opts.relax.tol = j.value("relax_tol", 1e-3);
  opts.bracket_lo = br[0].get<double>();
  opts.bracket_hi = br[1].get<double>();
  opts.tol = cx.op_tol(j, "tol", 1e-3);

  std::vector<GridFunction> fields;
  for (const json& fj : j.at("fields")) fields.push_back(cx.get_field(fj));
  SubMask whole = SubMask::whole(cx.dom);
  LatticeReport rep = lattice_checks(f, f, c, fields, cx.dom, whole, whole, opts);
  res.detail = "c = " + fmt(c) + ", " + std::to_string(fields.size()) + " fields";
  assert_true(res, "relax(F v c) = relax(F) v c", rep.shift_pass, res.detail);
  return res;
}

OpResult op_level_convexity(Context& cx, const json& j) {
  OpResult res{"level_convexity", {}, {}};
  const BoundSupremand& f = cx.get_bound(j.at("f").get<std::string>());
  std::string functional = j.at("functional").get<std::string>();
  int pair_count = j.value("pairs", 20);
  int theta_count = j.value("thetas", 5);
  double tol = cx.op_tol(j, "tol", 1e-3);
  double lo = -3, hi = 3;
  if (j.contains("slope_range")) {
    lo = j["slope_range"][0].get<double>();
    hi = j["slope_range"][1].get<double>();
  }

  std::vector<std::pair<GridFunction, GridFunction>> pairs;
  if (j.contains("include_pair")) {
    double s1 = j["include_pair"][0].get<double>();
    double s2 = j["include_pair"][1].get<double>();
    pairs.emplace_back(GridFunction::linear(cx.dom, {s1, 0.0}),
                       GridFunction::linear(cx.dom, {s2, 0.0}));
  }
  Rng rng(cx.seed + 101);
  while (static_cast<int>(pairs.size()) < pair_count) {
    pairs.emplace_back(random_slope_field(cx.dom, rng, lo, hi, false),
                       random_slope_field(cx.dom, rng, lo, hi, false));
  }
  std::vector<double> thetas;
  for (int t = 1; t <= theta_count; ++t) thetas.push_back(double(t) / (theta_count + 1));

  Functional V;
  RelaxOptions opts;
  opts.window = cx.window;
  opts.tol = j.value("relax_tol", 2.5e-4);
  double blo = 0, bhi = 8;
  if (j.contains("bracket")) {
    blo = j["bracket"][0].get<double>();
    bhi = j["bracket"][1].get<double>();
  }
  if (functional == "relax") {
    V = [&](const GridFunction& u) { return relax_value(f, u, blo, bhi, opts).value; };
  } else if (functional == "supremal") {
    V = [&](const GridFunction& u) { return supremal_value(f, u); };
  } else {
    throw ConfigError("level_convexity functional must be relax or supremal");
  }
  LevelConvexityReport rep = level_convexity_test(V, pairs, thetas, tol);
  res.detail = "max excess " + fmt(rep.max_excess) + " (pair " +
               std::to_string(rep.witness_pair) + ", theta " + fmt(rep.witness_theta) + ")";
  std::string expect = j.value("expect", "pass");
  if (expect == "pass") {
    assert_true(res, "level convexity holds on samples", rep.pass, res.detail);
  } else if (expect == "violation") {
    assert_true(res, "level convexity violated by a witness", rep.max_excess > tol, res.detail);
  } else {
    throw ConfigError("level_convexity expect must be pass or violation");
  }
  return res;
}

OpResult op_gamma_limit(Context& cx, const json& j) {
  OpResult res{"gamma_limit", {}, {}};
  const Supremand& f = cx.get_supremand(j.at("f").get<std::string>());
  std::vector<int> ns;
  for (const json& nj : j.at("ns")) ns.push_back(nj.get<int>());
  int field_count = j.value("field_count", 6);
  double lo = 1.3, hi = 3.0;
  if (j.contains("slope_range")) {
    lo = j["slope_range"][0].get<double>();
    hi = j["slope_range"][1].get<double>();
  }
  Rng rng(cx.seed + 211);
  std::vector<GridFunction> fields;
  for (int i = 0; i < field_count; ++i)
    fields.push_back(random_slope_field(cx.dom, rng, lo, hi, true));
  std::vector<std::pair<GridFunction, GridFunction>> pairs;
  for (size_t i = 0; i + 1 < fields.size(); i += 2) pairs.emplace_back(fields[i], fields[i + 1]);
  std::vector<double> thetas{0.25, 0.5, 0.75};

  const json& br = j.at("bracket");
  double tol = cx.op_tol(j, "tol", 5e-3);
  RelaxOptions opts;
  opts.window = cx.window;
  opts.tol = j.value("relax_tol", 2.5e-4);
  GammaLimitReport rep =
      monotone_gamma_limit(f, cx.dom, ns, fields, pairs, thetas, br[0].get<double>(),
                           br[1].get<double>(), tol, opts);
  res.detail = std::to_string(fields.size()) + " fields, n up to " + std::to_string(ns.back());
  assert_true(res, "relax(F_n) decreasing", rep.monotone_pass, "");
  assert_true(res, "relax(F_n) reaches relax(F)", rep.limit_pass, "");
  assert_true(res, "tail functional level convex", rep.limit_level_convexity.pass,
              "max excess " + fmt(rep.limit_level_convexity.max_excess));
  return res;
}

OpResult op_difference_quotient(Context& cx, const json& j) {
  OpResult res{"difference_quotient", {}, {}};
  const BoundSupremand& f = cx.get_bound(j.at("f").get<std::string>());
  double lambda = j.at("lambda").get<double>();
  GridFunction u = cx.get_field(j.at("u"));
  FieldSet set = multi_source_fields(f, lambda, cx.window, auto_sources(cx.dom), DistanceMethod::fast);
  QuotientResult q = difference_quotient(set, u);
  res.detail = "R = " + fmt(q.value) + " over " + std::to_string(q.pairs_used) + " pairs" +
               (q.all_filtered ? " (all pairs filtered; 0 by convention)" : "");
  if (j.contains("expect"))
    assert_close(res, "difference quotient", q.value, j["expect"].get<double>(),
                 cx.op_tol(j, "tol", 1e-6));
  return res;
}

OpResult op_lipschitz(Context& cx, const json& j) {
  OpResult res{"lipschitz", {}, {}};
  GridFunction u = cx.get_field(j.at("u"));
  LipschitzSeminorms s = lipschitz_seminorms(u);
  res.detail = "grad_sup " + fmt(s.grad_sup) + ", lip_euclid " + fmt(s.lip_euclid) +
               ", lip_geodesic " + fmt(s.lip_geodesic);
  double tol = cx.op_tol(j, "tol", 1e-9);
  if (j.contains("expect_grad_sup"))
    assert_close(res, "grad_sup", s.grad_sup, j["expect_grad_sup"].get<double>(), tol);
  if (j.contains("expect_lip_geodesic"))
    assert_close(res, "lip_geodesic", s.lip_geodesic, j["expect_lip_geodesic"].get<double>(), tol);
  if (j.contains("ratio_bound")) {
    double ratio = s.grad_sup > 0 ? std::fabs(s.grad_sup - s.lip_geodesic) / s.grad_sup : 0.0;
    assert_true(res, "grad_sup/lip_geodesic ratio bound", ratio <= j["ratio_bound"].get<double>(),
                "ratio " + fmt(ratio));
  }
  return res;
}

OpResult run_operation(Context& cx, const json& j) {
  std::string op = j.at("op").get<std::string>();
  if (op == "eval") return op_eval(cx, j);
  if (op == "supremal") return op_supremal(cx, j);
  if (op == "geodesic") return op_geodesic(cx, j);
  if (op == "domain_constant") return op_domain_constant(cx, j);
  if (op == "distance") return op_distance(cx, j);
  if (op == "sandwich") return op_sandwich(cx, j);
  if (op == "relax") return op_relax(cx, j);
  if (op == "envelope") return op_envelope(cx, j);
  if (op == "represent") return op_represent(cx, j);
  if (op == "localized") return op_localized(cx, j);
  if (op == "lattice_meet") return op_lattice_meet(cx, j);
  if (op == "lattice_join") return op_lattice_join(cx, j);
  if (op == "lattice_shift") return op_lattice_shift(cx, j);
  if (op == "level_convexity") return op_level_convexity(cx, j);
  if (op == "gamma_limit") return op_gamma_limit(cx, j);
  if (op == "difference_quotient") return op_difference_quotient(cx, j);
  if (op == "lipschitz") return op_lipschitz(cx, j);
  throw ConfigError("unknown operation '" + op + "'");
}

Report run_parsed(const json& cfg, const std::string& text, const std::string& name,
                  const std::vector<std::string>& extra_ops, const RunOptions& run) {
  if (!cfg.contains("version") || cfg["version"].get<int>() != 1)
    throw ConfigError("config version must be 1");

  Report report;
  report.name = name;
  report.config_echo = text;

  Context cx;
  cx.name = name;
  cx.seed = run.seed.value_or(cfg.value("seed", uint64_t{1}));
  cx.tol_override = run.tol.value_or(-1.0);
  cx.out_dir = run.out_dir.value_or(cfg.value("out", std::string{}));
  {
    const json& dj = cfg.at("domain");
    DomainSpec spec;
    spec.dim = dj.at("dim").get<int>();
    const json& ext = dj.at("extent");
    for (int a = 0; a < spec.dim; ++a) {
      spec.extent[a][0] = ext[static_cast<size_t>(a)][0].get<double>();
      spec.extent[a][1] = ext[static_cast<size_t>(a)][1].get<double>();
    }
    spec.h = dj.at("h").get<double>();
    if (dj.contains("obstacles")) spec.obstacles = parse_boxes(dj["obstacles"], spec.dim);
    std::string st = dj.value("stencil", "full");
    if (st == "axis") {
      spec.stencil = Stencil::axis;
    } else if (st == "full") {
      spec.stencil = Stencil::full;
    } else {
      throw ConfigError("stencil must be axis or full");
    }
    cx.dom = GridDomain::build(spec);
  }
  report.seed = cx.seed;
  cx.report = &report;

  if (cfg.contains("gradient_window")) {
    cx.window.half_width = cfg["gradient_window"].value("half_width", 10.0);
    cx.window.dxi = cfg["gradient_window"].value("dxi", 0.01);
  }
  if (cfg.contains("supremands")) {
    for (auto it = cfg["supremands"].begin(); it != cfg["supremands"].end(); ++it)
      cx.supremands.emplace(it.key(), parse_supremand(it.value(), cx.dom.dim()));
  }
  if (cfg.contains("fields")) {
    for (auto it = cfg["fields"].begin(); it != cfg["fields"].end(); ++it)
      cx.fields.emplace(it.key(),
                        GridFunction::from_expression(cx.dom, it.value().get<std::string>()));
  }

  std::vector<json> ops;
  if (!extra_ops.empty()) {
    for (const std::string& t : extra_ops) ops.push_back(json::parse(t));
  } else if (cfg.contains("operations")) {
    for (const json& oj : cfg["operations"]) ops.push_back(oj);
  }
  for (size_t i = 0; i < ops.size(); ++i) {
    try {
      report.ops.push_back(run_operation(cx, ops[i]));
    } catch (const json::exception& e) {
      throw ConfigError("operation " + std::to_string(i + 1) + ": " + e.what());
    } catch (const ExprError& e) {
      throw ConfigError("operation " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return report;
}

Report run_text_impl(const std::string& text, const std::string& name,
                     const std::vector<std::string>& extra_ops, const RunOptions& run) {
  json cfg;
  try {
    cfg = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error at line " + std::to_string(line_of_byte(text, e.byte)) +
                      ": " + e.what());
  }
  try {
    return run_parsed(cfg, text, name, extra_ops, run);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config error: ") + e.what());
  }
}

}  // namespace

int Report::assertion_count() const {
  int n = 0;
  for (const auto& o : ops) n += static_cast<int>(o.assertions.size());
  return n;
}

void Report::print(std::ostream& os, bool echo_config) const {
  os << "# scenario " << name << " (seed " << seed << ")\n";
  int passed = 0, total = 0;
  for (const auto& op : ops) {
    os << "* " << op.op << (op.detail.empty() ? "" : ": " + op.detail) << "\n";
    for (const auto& a : op.assertions) {
      ++total;
      if (a.pass) ++passed;
      os << "  [" << (a.pass ? " ok " : "FAIL") << "] " << a.what
         << (a.detail.empty() ? "" : " -- " + a.detail) << "\n";
    }
  }
  for (const auto& f : exported_files) os << "* wrote " << f << "\n";
  os << "result: " << (pass() ? "PASS" : "FAIL") << " (" << passed << "/" << total
     << " assertions)\n";
  if (echo_config) {
    os << "## config\n" << config_echo;
    if (config_echo.empty() || config_echo.back() != '\n') os << "\n";
  }
}

Report run_scenario_text(const std::string& json_text, const std::string& name,
                         const RunOptions& opts) {
  return run_text_impl(json_text, name, {}, opts);
}

Report run_scenario_file(const std::string& path, const RunOptions& opts) {
  if (is_builtin(path)) return run_scenario_text(builtin_config(path), path, opts);
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return run_scenario_text(ss.str(), path, opts);
}

Report run_scenario_with_ops(const std::string& json_text, const std::string& name,
                             const std::vector<std::string>& op_json_texts,
                             const RunOptions& opts) {
  return run_text_impl(json_text, name, op_json_texts, opts);
}

// ---------------------------------------------------------------------------
// built-in scenarios

namespace {

const std::map<std::string, std::string>& builtin_map() {
  static const std::map<std::string, std::string> builtins = {
      {"example-fg-meet", R"CFG({
  "version": 1,
  "seed": 7,
  "domain": {"dim": 1, "extent": [[-2, 2]], "h": 0.01},
  "gradient_window": {"half_width": 5.0, "dxi": 0.01},
  "supremands": {
    "f": {"pieces": [{"region": [[[-1, 0]]], "profile": "1"},
                     {"region": "else", "profile": "3"}]},
    "g": {"pieces": [{"region": [[[-1, 0]]], "profile": "4"},
                     {"region": "else", "profile": "2"}]}
  },
  "fields": {"u": "x"},
  "operations": [
    {"op": "supremal", "f": "f", "u": "u", "region": [[[-1, -0.5]]], "expect": 1, "tol": 0},
    {"op": "supremal", "f": "g", "u": "u", "region": [[[-1, -0.5]]], "expect": 4, "tol": 0},
    {"op": "supremal", "f": "f", "u": "u", "region": [[[0, 1]]], "expect": 3, "tol": 0},
    {"op": "supremal", "f": "g", "u": "u", "region": [[[0, 1]]], "expect": 2, "tol": 0},
    {"op": "lattice_meet", "f": "f", "g": "g", "u": "u", "A": [[[-1, -0.5]]], "B": [[[0, 1]]],
     "expect_union": 3, "expect_parts": 2, "expect_strict_gap": true},
    {"op": "lattice_join", "f": "f", "g": "g", "fields": ["u", "2*x", "0.5*x*x"]}
  ]
})CFG"},
      {"example-boh", R"CFG({
  "version": 1,
  "seed": 11,
  "domain": {"dim": 1, "extent": [[-2, 2]], "h": 0.01},
  "gradient_window": {"half_width": 10.0, "dxi": 0.01},
  "supremands": {
    "f": {"pieces": [{"region": [[[-1, 1]]], "profile": "max(1 - abs(xi), 0)"},
                     {"region": "else", "profile": "2 + abs(xi)"}]}
  },
  "fields": {"u1": "x"},
  "operations": [
    {"op": "eval", "f": "f", "x": 0.5, "xi": 0, "expect": 1, "tol": 0},
    {"op": "eval", "f": "f", "x": 1.5, "xi": 2, "expect": 4, "tol": 0},
    {"op": "supremal", "f": "f", "u": "u1", "expect": 3, "tol": 1e-9},
    {"op": "represent", "f": "f", "xs": [-0.5, 0, 0.5], "xis": [-2, -1, 0, 1, 2],
     "expect": [{"region": [[[-1, 1]]], "value": "2"},
                {"region": "else", "value": "2 + abs(xi)"}],
     "tol": 1e-6, "export": "representation.csv"},
    {"op": "represent", "f": "f", "xs": [-1.5, 1.5], "xis": [-2, -1, 0, 1, 2],
     "expect": [{"region": [[[-1, 1]]], "value": "2"},
                {"region": "else", "value": "2 + abs(xi)"}],
     "tol": 1e-6},
    {"op": "localized", "f": "f", "regions": [[[[-0.75, 0.75]]], [[[-2, 2]]]],
     "xis": [-3, -2, -1, -0.5, 0, 0.5, 1, 2, 3], "probes": 10, "bracket": [0, 8], "tol": 0.012,
     "expect_g": [{"region": [[[-1, 1]]], "value": "0"},
                  {"region": "else", "value": "2 + abs(xi)"}],
     "export": "localized.csv"},
    {"op": "relax", "f": "f", "u": "u1", "region": [[[-0.75, 0.75]]], "bracket": [0, 8],
     "tol": 0.001, "expect": 0, "expect_tol": 0.001},
    {"op": "relax", "f": "f", "u": "u1", "bracket": [0, 8], "tol": 0.001,
     "expect": 3, "expect_tol": 0.005}
  ]
})CFG"},
      {"sandwich-suite", R"CFG({
  "version": 1,
  "seed": 5,
  "domain": {"dim": 2, "extent": [[0, 2], [0, 2]], "h": 0.05, "stencil": "full"},
  "gradient_window": {"half_width": 5.0, "dxi": 0.01},
  "supremands": {
    "f_half": {"pieces": [{"region": "all", "profile": "0.5 * pow(xi1*xi1 + xi2*xi2, 0.5)"}],
               "coercivity": 0.5, "linear_bound": 0.5},
    "f_one": {"pieces": [{"region": "all", "profile": "pow(xi1*xi1 + xi2*xi2, 0.5)"}],
              "coercivity": 1, "linear_bound": 1},
    "f_two": {"pieces": [{"region": "all", "profile": "2 * pow(xi1*xi1 + xi2*xi2, 0.5)"}],
              "coercivity": 2, "linear_bound": 2}
  },
  "operations": [
    {"op": "sandwich", "f": "f_half", "lambda": 1, "sources": 3},
    {"op": "sandwich", "f": "f_half", "lambda": 2, "sources": 3},
    {"op": "sandwich", "f": "f_one", "lambda": 1, "sources": 3},
    {"op": "sandwich", "f": "f_one", "lambda": 2, "sources": 3},
    {"op": "sandwich", "f": "f_two", "lambda": 1, "sources": 3},
    {"op": "sandwich", "f": "f_two", "lambda": 2, "sources": 3},
    {"op": "domain_constant", "pairs": 5000, "expect": 1.0, "tol": 0.09}
  ]
})CFG"},
      {"sandwich-suite-1d", R"CFG({
  "version": 1,
  "seed": 5,
  "domain": {"dim": 1, "extent": [[-2, 2]], "h": 0.01},
  "gradient_window": {"half_width": 5.0, "dxi": 0.01},
  "supremands": {
    "f_half": {"pieces": [{"region": "all", "profile": "0.5 * abs(xi)"}],
               "coercivity": 0.5, "linear_bound": 0.5},
    "f_one": {"pieces": [{"region": "all", "profile": "abs(xi)"}],
              "coercivity": 1, "linear_bound": 1},
    "f_two": {"pieces": [{"region": "all", "profile": "2 * abs(xi)"}],
              "coercivity": 2, "linear_bound": 2}
  },
  "operations": [
    {"op": "sandwich", "f": "f_half", "lambda": 1, "sources": 3},
    {"op": "sandwich", "f": "f_half", "lambda": 2, "sources": 3},
    {"op": "sandwich", "f": "f_one", "lambda": 1, "sources": 3},
    {"op": "sandwich", "f": "f_one", "lambda": 2, "sources": 3},
    {"op": "sandwich", "f": "f_two", "lambda": 1, "sources": 3},
    {"op": "sandwich", "f": "f_two", "lambda": 2, "sources": 3},
    {"op": "distance", "f": "f_one", "lambda": 2, "source": 0, "method": "both",
     "expect": "2 * abs(x)", "tol": 1e-9},
    {"op": "domain_constant", "pairs": 2000, "expect": 1.0, "tol": 1e-9}
  ]
})CFG"},
      {"main-theorem-suite", R"CFG({
  "version": 1,
  "seed": 21,
  "domain": {"dim": 1, "extent": [[-1, 1]], "h": 0.02},
  "gradient_window": {"half_width": 6.0, "dxi": 0.01},
  "supremands": {
    "dw": {"pieces": [{"region": "all", "profile": "min(pow(xi + 1, 2), pow(xi - 1, 2))"}]}
  },
  "operations": [
    {"op": "level_convexity", "functional": "relax", "f": "dw", "pairs": 20,
     "slope_range": [-3, 3], "thetas": 5, "tol": 0.001, "bracket": [0, 18],
     "include_pair": [1, -1], "expect": "pass"},
    {"op": "level_convexity", "functional": "supremal", "f": "dw", "pairs": 20,
     "slope_range": [-3, 3], "thetas": 5, "tol": 0.001,
     "include_pair": [1, -1], "expect": "violation"},
    {"op": "envelope", "f": "dw", "expect": "pow(max(abs(xi) - 1, 0), 2)", "tol": 0.2,
     "export": "envelope.csv"},
    {"op": "gamma_limit", "f": "dw", "ns": [1, 2, 4, 8, 16, 32, 64], "field_count": 6,
     "slope_range": [1.3, 3], "bracket": [0, 18], "tol": 0.005}
  ]
})CFG"}};
  return builtins;
}

}  // namespace

std::vector<std::string> list_builtins() {
  std::vector<std::string> names;
  for (const auto& [name, cfg] : builtin_map()) names.push_back(name);
  return names;  // std::map iterates sorted
}

bool is_builtin(const std::string& name) { return builtin_map().count(name) > 0; }

const std::string& builtin_config(const std::string& name) {
  auto it = builtin_map().find(name);
  if (it == builtin_map().end()) throw ConfigError("unknown builtin scenario '" + name + "'");
  return it->second;
}

}  // namespace supremal
