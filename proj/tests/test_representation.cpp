#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "supremal/representation.hpp"
#include "supremal/rng.hpp"

using namespace supremal;

namespace {

GridDomain interval_domain(double lo, double hi, double h) {
  DomainSpec s;
  s.dim = 1;
  s.extent[0] = {lo, hi};
  s.h = h;
  return GridDomain::build(s);
}

Supremand two_regime() {
  std::vector<Piece> pieces;
  pieces.push_back({Region{{Box{{-1.0, 0.0}, {1.0, 0.0}}}, false}, Expr::parse("max(1 - abs(xi), 0)")});
  pieces.push_back({Region{{}, true}, Expr::parse("2 + abs(xi)")});
  return Supremand(1, std::move(pieces));
}

RepresentationOptions default_opts() {
  RepresentationOptions o;
  o.window = GradientWindow{10.0, 0.01};
  return o;
}

}  // namespace

TEST_CASE("representation values of the two-regime density") {
  GridDomain dom = interval_domain(-2.0, 2.0, 0.01);
  BoundSupremand f = BoundSupremand::bind(two_regime(), dom);
  RepresentationOptions opts = default_opts();
  // inside the bump every pinned gradient costs exactly the outside floor 2
  for (double x : {-0.5, 0.0, 0.5}) {
    for (double xi : {-2.0, -1.0, 0.0, 0.5, 1.0, 2.0}) {
      int cell = dom.cell_of_point({x, 0.0});
      CHECK(representation_value(f, cell, {xi, 0.0}, opts) == doctest::Approx(2.0).epsilon(1e-9));
    }
  }
  // outside: the pinned cell itself contributes 2 + |xi|
  for (double x : {-1.5, 1.5}) {
    for (double xi : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
      int cell = dom.cell_of_point({x, 0.0});
      CHECK(representation_value(f, cell, {xi, 0.0}, opts) ==
            doctest::Approx(2.0 + std::fabs(xi)).epsilon(1e-9));
    }
  }
}

TEST_CASE("spatially homogeneous norm keeps its own profile") {
  GridDomain dom = interval_domain(-1.0, 1.0, 0.02);
  BoundSupremand f = BoundSupremand::bind(Supremand::single(1, "abs(xi)"), dom);
  RepresentationOptions opts = default_opts();
  for (double xi : {-2.0, -0.5, 0.0, 1.0, 3.0}) {
    int cell = dom.cell_of_point({0.3, 0.0});
    CHECK(representation_value(f, cell, {xi, 0.0}, opts) ==
          doctest::Approx(std::fabs(xi)).epsilon(1e-9));
  }
}

TEST_CASE("double well representation descends into the wells") {
  GridDomain dom = interval_domain(-1.0, 1.0, 0.02);
  BoundSupremand f =
      BoundSupremand::bind(Supremand::single(1, "min(pow(xi + 1, 2), pow(xi - 1, 2))"), dom);
  RepresentationOptions opts = default_opts();
  opts.window = GradientWindow{6.0, 0.01};
  int cell = dom.cell_of_point({0.0, 0.0});
  // away from the pinned cell the field can ride the zero set at slopes +-1,
  // so only the pinned cell's own cost remains
  for (double xi : {0.0, 0.5, 1.0, 2.0}) {
    double f_val = f.eval_cell(cell, {xi, 0.0});
    CHECK(representation_value(f, cell, {xi, 0.0}, opts) == doctest::Approx(f_val).epsilon(1e-9));
  }
}

TEST_CASE("representation table flags and dominance") {
  GridDomain dom = interval_domain(-2.0, 2.0, 0.01);
  BoundSupremand f = BoundSupremand::bind(two_regime(), dom);
  RepresentationOptions opts = default_opts();
  RepresentationTable table = representation_table(
      f, {{-1.5, 0.0}, {-0.5, 0.0}, {0.5, 0.0}, {1.5, 0.0}},
      {{-1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}, opts);
  CHECK(table.rows.size() == 12);
  for (const auto& row : table.rows) {
    CHECK_FALSE(row.phi_below_f);  // phi >= f at every sample
    CHECK(row.phi >= row.f_value - 1e-9);
  }
}

TEST_CASE("representation profile is level convex in the gradient") {
  GridDomain dom = interval_domain(-2.0, 2.0, 0.02);
  BoundSupremand f = BoundSupremand::bind(two_regime(), dom);
  RepresentationOptions opts = default_opts();
  Rng rng(3);
  for (double x : {0.25, 1.5}) {
    int cell = dom.cell_of_point({x, 0.0});
    for (int k = 0; k < 30; ++k) {
      double a = rng.uniform(-2.5, 2.5), b = rng.uniform(-2.5, 2.5);
      double theta = rng.uniform();
      double va = representation_value(f, cell, {a, 0.0}, opts);
      double vb = representation_value(f, cell, {b, 0.0}, opts);
      double vm = representation_value(f, cell, {theta * a + (1 - theta) * b, 0.0}, opts);
      CHECK(vm <= std::max(va, vb) + 1e-9);
    }
  }
}

TEST_CASE("localized relaxation is strictly below the representation profile inside") {
  GridDomain dom = interval_domain(-2.0, 2.0, 0.01);
  BoundSupremand f = BoundSupremand::bind(two_regime(), dom);
  RepresentationOptions ropts = default_opts();
  SubMask A = SubMask::from_boxes(dom, {Box{{-0.75, 0.0}, {0.75, 0.0}}});
  RelaxOptions opts;
  opts.window = GradientWindow{10.0, 0.01};
  opts.tol = 1e-3;
  opts.localize = &A;
  Rng rng(7);
  GridFunction u(dom);
  const auto& nodes = dom.masked_nodes();
  for (size_t i = 0; i + 1 < nodes.size(); ++i)
    u[nodes[i + 1]] = u[nodes[i]] + dom.h() * rng.uniform(-2.0, 2.0);
  double relaxed = relax_value(f, u, 0.0, 8.0, opts).value;
  CHECK(relaxed == 0.0);
  // sup over A of phi(x, Du) stays at the representation floor 2
  double phi_sup = -kInf;
  for (int c = 0; c < dom.cell_count(); ++c) {
    if (!A.cells[static_cast<size_t>(c)]) continue;
    phi_sup = std::max(phi_sup, representation_value(f, c, u.gradient(c), ropts));
  }
  CHECK(phi_sup == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(phi_sup > relaxed + 1.5);  // the advertised strict gap
}

TEST_CASE("fitted localized supremand reproduces the two-regime split") {
  GridDomain dom = interval_domain(-2.0, 2.0, 0.01);
  BoundSupremand f = BoundSupremand::bind(two_regime(), dom);
  std::vector<double> ladder{-3.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0};
  std::vector<GridFunction> probes;
  for (double xi : ladder) probes.push_back(GridFunction::linear(dom, {xi, 0.0}));
  std::vector<SubMask> regions;
  regions.push_back(SubMask::from_boxes(dom, {Box{{-0.75, 0.0}, {0.75, 0.0}}}));
  regions.push_back(SubMask::from_boxes(dom, {Box{{-2.0, 0.0}, {2.0, 0.0}}}));
  RelaxOptions opts;
  opts.window = GradientWindow{10.0, 0.01};
  opts.tol = 2.5e-4;
  LocalizedFit fit = localized_relaxed_supremand(f, regions, ladder, probes, 0.0, 8.0, opts, 0.012);
  CHECK(fit.pass);
  REQUIRE(fit.fits.size() == 2);
  // identify the classes by a sample cell
  int inside_cls = f.cell_class(dom.cell_of_point({0.0, 0.0}));
  int outside_cls = f.cell_class(dom.cell_of_point({1.5, 0.0}));
  for (size_t k = 0; k < ladder.size(); ++k) {
    CHECK(fit.fits[static_cast<size_t>(inside_cls)].g_values[k] <= 1e-9);
    CHECK(fit.fits[static_cast<size_t>(outside_cls)].g_values[k] ==
          doctest::Approx(2.0 + std::fabs(ladder[k])).epsilon(2e-3));
  }
  // whole-domain slope-1 probe: relaxed value 3
  GridFunction u1 = GridFunction::linear(dom, {1.0, 0.0});
  RelaxOptions global = opts;
  EnvelopeResult g = relax_value(f, u1, 0.0, 8.0, global);
  CHECK(g.value == doctest::Approx(3.0).epsilon(2e-3));
}

TEST_CASE("localized fitting rejects 2-D domains") {
  DomainSpec s;
  s.dim = 2;
  s.extent[0] = {0.0, 1.0};
  s.extent[1] = {0.0, 1.0};
  s.h = 0.25;
  GridDomain dom = GridDomain::build(s);
  BoundSupremand f = BoundSupremand::bind(Supremand::single(2, "abs(xi1)"), dom);
  RelaxOptions opts;
  CHECK_THROWS_AS(localized_relaxed_supremand(f, {}, {0.0}, {}, 0.0, 1.0, opts, 1e-3),
                  DomainError);
}

TEST_CASE("clamped 2-D competitors pin the gradient") {
  DomainSpec s;
  s.dim = 2;
  s.extent[0] = {0.0, 1.0};
  s.extent[1] = {0.0, 1.0};
  s.h = 0.1;
  GridDomain dom = GridDomain::build(s);
  BoundSupremand f = BoundSupremand::bind(Supremand::single(2, "pow(xi1*xi1 + xi2*xi2, 0.5)"), dom);
  RepresentationOptions opts;
  opts.window = GradientWindow{4.0, 0.05};
  int cell = dom.cell_of_point({0.5, 0.5});
  Vec2 xi{1.0, -0.5};
  double phi = representation_value(f, cell, xi, opts);
  CHECK(phi == doctest::Approx(norm(xi)).epsilon(1e-9));
}
