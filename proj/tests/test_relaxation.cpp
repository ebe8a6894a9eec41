#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "supremal/relaxation.hpp"
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

Supremand double_well() { return Supremand::single(1, "min(pow(xi + 1, 2), pow(xi - 1, 2))"); }

Supremand two_regime() {
  std::vector<Piece> pieces;
  pieces.push_back({Region{{Box{{-1.0, 0.0}, {1.0, 0.0}}}, false}, Expr::parse("max(1 - abs(xi), 0)")});
  pieces.push_back({Region{{}, true}, Expr::parse("2 + abs(xi)")});
  return Supremand(1, std::move(pieces));
}

double dw_envelope(double xi) {
  double a = std::fabs(xi);
  return a <= 1.0 ? 0.0 : (a - 1.0) * (a - 1.0);
}

RelaxOptions opts_with(double tol, const SubMask* A = nullptr) {
  RelaxOptions o;
  o.window = GradientWindow{8.0, 0.01};
  o.tol = tol;
  o.localize = A;
  return o;
}

GridFunction random_slopes(const GridDomain& dom, Rng& rng, double lo, double hi) {
  GridFunction u(dom);
  const auto& nodes = dom.masked_nodes();
  for (size_t i = 0; i + 1 < nodes.size(); ++i)
    u[nodes[i + 1]] = u[nodes[i]] + dom.h() * rng.uniform(lo, hi);
  return u;
}

}  // namespace

TEST_CASE("difference quotient basics") {
  GridDomain dom = interval_domain(0.0, 1.0, 0.02);
  BoundSupremand f = BoundSupremand::bind(Supremand::single(1, "abs(xi)"), dom);
  GradientWindow win{8.0, 0.01};
  FieldSet set = multi_source_fields(f, 2.0, win, dom.masked_nodes());

  GridFunction c(dom, 4.0);
  CHECK(difference_quotient(set, c).value == 0.0);

  // admissible field: R <= 1
  GridFunction u = GridFunction::linear(dom, {1.5, 0.0});
  CHECK(difference_quotient(set, u).value <= 1.0 + 1e-9);

  // slope-3 affine against level 2: R = 3/2
  GridFunction v = GridFunction::linear(dom, {3.0, 0.0});
  CHECK(difference_quotient(set, v).value == doctest::Approx(1.5).epsilon(1e-9));
}

TEST_CASE("difference quotient invariances on samples") {
  GridDomain dom = interval_domain(0.0, 1.0, 0.05);
  BoundSupremand f = BoundSupremand::bind(double_well(), dom);
  GradientWindow win{6.0, 0.01};
  FieldSet set = multi_source_fields(f, 0.5, win, dom.masked_nodes());
  Rng rng(3);
  GridFunction u = random_slopes(dom, rng, -2.0, 2.0);
  GridFunction v = random_slopes(dom, rng, -2.0, 2.0);
  double ru = difference_quotient(set, u).value;
  CHECK(difference_quotient(set, u.shifted(3.7)).value == doctest::Approx(ru).epsilon(1e-12));
  CHECK(difference_quotient(set, u.scaled(0.4)).value == doctest::Approx(0.4 * ru).epsilon(1e-9));
  // convexity of R on the half/half blend
  double rv = difference_quotient(set, v).value;
  double rmix = difference_quotient(set, u.scaled(0.5).plus(v, 0.5)).value;
  CHECK(rmix <= 0.5 * ru + 0.5 * rv + 1e-9);
  // lower semicontinuity under uniform perturbations: a perturbation of size
  // amp moves any quotient by at most 2 amp / min positive distance
  double d_min = kInf;
  for (const auto& field : set.fields)
    for (double d : field.dist)
      if (d > 1e-15 && std::isfinite(d)) d_min = std::min(d_min, d);
  for (double amp : {1e-3, 1e-4, 1e-5}) {
    GridFunction w = u;
    for (int node : dom.masked_nodes()) w[node] += amp * rng.uniform(-1.0, 1.0);
    CHECK(difference_quotient(set, w).value >= ru - 2 * amp / d_min - 1e-9);
  }
}

TEST_CASE("all pairs filtered reports zero by convention") {
  GridDomain dom = interval_domain(0.0, 1.0, 0.05);
  BoundSupremand f = BoundSupremand::bind(Supremand::single(1, "abs(xi)"), dom);
  GradientWindow win{8.0, 0.01};
  FieldSet set = multi_source_fields(f, 0.0, win, dom.masked_nodes());  // d == 0 everywhere
  GridFunction u = GridFunction::linear(dom, {1.0, 0.0});
  QuotientResult q = difference_quotient(set, u);
  CHECK(q.value == 0.0);
  CHECK(q.all_filtered);
}

TEST_CASE("relaxed value of a coercive norm equals the sup value") {
  GridDomain dom = interval_domain(0.0, 1.0, 0.02);
  BoundSupremand f = BoundSupremand::bind(Supremand::single(1, "abs(xi)"), dom);
  RelaxOptions opts = opts_with(1e-4);
  GridFunction u = GridFunction::linear(dom, {3.0, 0.0});
  EnvelopeResult r = relax_value(f, u, 0.0, 8.0, opts);
  CHECK(std::fabs(r.value - supremal_value(f, u)) <= 2 * opts.tol + 0.011);
  CHECK(r.lo <= r.value);
  CHECK(r.value <= r.hi);
}

TEST_CASE("relaxed value of affine fields matches the level-convex envelope") {
  GridDomain dom = interval_domain(-1.0, 1.0, 0.02);
  BoundSupremand f = BoundSupremand::bind(double_well(), dom);
  RelaxOptions opts = opts_with(2.5e-4);
  for (double xi0 : {0.0, 0.5, 0.9, 1.0, 1.5, -2.5, 3.0}) {
    GridFunction u = GridFunction::linear(dom, {xi0, 0.0});
    EnvelopeResult r = relax_value(f, u, 0.0, 8.0, opts);
    // support quantization can shift the level by ~2 sqrt(lambda) dxi
    CHECK(std::fabs(r.value - dw_envelope(xi0)) <= 2 * opts.tol + 0.08);
  }
}

TEST_CASE("relaxation is localized by the sub-mask") {
  GridDomain dom = interval_domain(-2.0, 2.0, 0.01);
  BoundSupremand f = BoundSupremand::bind(two_regime(), dom);
  SubMask A = SubMask::from_boxes(dom, {Box{{-0.75, 0.0}, {0.75, 0.0}}});
  RelaxOptions opts = opts_with(1e-3, &A);
  Rng rng(9);
  for (int k = 0; k < 5; ++k) {
    GridFunction u = random_slopes(dom, rng, -2.0, 2.0);
    EnvelopeResult r = relax_value(f, u, 0.0, 8.0, opts);
    CHECK(r.value == 0.0);  // predicate already true at the bracket start
    CHECK(r.at_lower_end);
  }
}

TEST_CASE("relax never exceeds the sup value on 1-D fields") {
  GridDomain dom = interval_domain(-1.0, 1.0, 0.05);
  BoundSupremand f = BoundSupremand::bind(double_well(), dom);
  RelaxOptions opts = opts_with(1e-3);
  Rng rng(5);
  for (int k = 0; k < 10; ++k) {
    // slopes on the gradient sampling lattice: the admissibility of u at its
    // own level is then visible to the sampled sections and the bound is sharp
    GridFunction u(dom);
    const auto& nodes = dom.masked_nodes();
    for (size_t i = 0; i + 1 < nodes.size(); ++i) {
      double s = std::round(rng.uniform(-3.0, 3.0) / opts.window.dxi) * opts.window.dxi;
      u[nodes[i + 1]] = u[nodes[i]] + dom.h() * s;
    }
    EnvelopeResult r = relax_value(f, u, 0.0, 18.0, opts);
    CHECK(r.value <= supremal_value(f, u) + 2 * opts.tol);
  }
  // off-lattice slopes add at most the section quantization ~ |f'| dxi
  for (int k = 0; k < 5; ++k) {
    GridFunction u = random_slopes(dom, rng, -3.0, 3.0);
    EnvelopeResult r = relax_value(f, u, 0.0, 18.0, opts);
    CHECK(r.value <= supremal_value(f, u) + 2 * opts.tol + 2.0 * 4.0 * opts.window.dxi);
  }
}

TEST_CASE("edgewise predicate agrees with the literal pair quotient") {
  GridDomain dom = interval_domain(0.0, 1.0, 0.05);
  BoundSupremand f = BoundSupremand::bind(double_well(), dom);
  GradientWindow win{8.0, 0.01};
  Rng rng(7);
  GridFunction u = random_slopes(dom, rng, -2.5, 2.5);
  for (double lambda : {0.3, 0.6, 1.2}) {
    FieldSet set = multi_source_fields(f, lambda, win, dom.masked_nodes());
    double literal = difference_quotient(set, u).value;
    EdgeSystem es = build_edge_system(f, lambda, win);
    double edgewise = 0.0;
    for (const auto& e : es.edges)
      if (e.w > 1e-15) edgewise = std::max(edgewise, (u[e.to] - u[e.from]) / e.w);
    CHECK(literal == doctest::Approx(edgewise).epsilon(1e-9));
  }
}

TEST_CASE("relaxation minimum agrees with the sup-value minimum") {
  GridDomain dom = interval_domain(-1.0, 1.0, 0.05);
  BoundSupremand f = BoundSupremand::bind(double_well(), dom);
  RelaxOptions opts = opts_with(1e-3);
  std::vector<GridFunction> sample{GridFunction::linear(dom, {1.0, 0.0}),
                                   GridFunction::linear(dom, {0.0, 0.0}),
                                   GridFunction::linear(dom, {-2.0, 0.0})};
  double min_sup = kInf, min_relax = kInf;
  for (const GridFunction& u : sample) {
    min_sup = std::min(min_sup, supremal_value(f, u));
    min_relax = std::min(min_relax, relax_value(f, u, 0.0, 8.0, opts).value);
  }
  CHECK(min_sup == doctest::Approx(0.0));
  CHECK(min_relax <= min_sup + 2 * opts.tol);
}

TEST_CASE("relaxed value is invariant under constants and shifts with the gradient") {
  GridDomain dom = interval_domain(-1.0, 1.0, 0.05);
  BoundSupremand f = BoundSupremand::bind(Supremand::single(1, "abs(xi)"), dom);
  RelaxOptions opts = opts_with(1e-3);
  Rng rng(15);
  GridFunction u = random_slopes(dom, rng, -2.0, 2.0);
  double base = relax_value(f, u, 0.0, 8.0, opts).value;
  CHECK(relax_value(f, u.shifted(5.0), 0.0, 8.0, opts).value == base);  // same trajectory
  // homogeneous density: adding an affine part shifts the value consistently
  GridFunction v = u.plus(GridFunction::linear(dom, {1.0, 0.0}));
  double shifted = relax_value(f, v, 0.0, 8.0, opts).value;
  CHECK(shifted <= base + 1.0 + 2 * opts.tol + 0.011);
  CHECK(shifted >= base - 1.0 - 2 * opts.tol - 0.011);
}

TEST_CASE("unreachable bracket reports the flag") {
  GridDomain dom = interval_domain(0.0, 1.0, 0.05);
  BoundSupremand f = BoundSupremand::bind(Supremand::single(1, "abs(xi)"), dom);
  GridFunction u = GridFunction::linear(dom, {5.0, 0.0});
  RelaxOptions opts = opts_with(1e-3);
  EnvelopeResult r = relax_value(f, u, 0.0, 2.0, opts);
  CHECK_FALSE(r.bracketed);
  CHECK(r.value == 2.0);
}

TEST_CASE("coercive approximation dominates, decreases, and scales") {
  GridDomain dom = interval_domain(-1.0, 1.0, 0.05);
  Supremand zero = Supremand::single(1, "0");
  RelaxOptions opts = opts_with(2.5e-4);
  for (int n : {1, 2, 4}) {
    Supremand fn = coercive_approximation(zero, n);
    BoundSupremand bn = BoundSupremand::bind(fn, dom);
    CHECK(fn.coercivity == doctest::Approx(1.0 / n));
    for (double xi0 : {0.5, 2.0}) {
      GridFunction u = GridFunction::linear(dom, {xi0, 0.0});
      CHECK(supremal_value(bn, u) == doctest::Approx(xi0 / n).epsilon(1e-9));
      EnvelopeResult r = relax_value(bn, u, 0.0, 8.0, opts);
      CHECK(std::fabs(r.value - xi0 / n) <= 2 * opts.tol + 0.011);
    }
  }
  // F_n decreasing in n, above F
  BoundSupremand b2 = BoundSupremand::bind(coercive_approximation(double_well(), 2), dom);
  BoundSupremand b4 = BoundSupremand::bind(coercive_approximation(double_well(), 4), dom);
  BoundSupremand bf = BoundSupremand::bind(double_well(), dom);
  Rng rng(12);
  for (int k = 0; k < 5; ++k) {
    GridFunction u = random_slopes(dom, rng, -3.0, 3.0);
    double f2 = supremal_value(b2, u), f4 = supremal_value(b4, u), f0 = supremal_value(bf, u);
    CHECK(f4 <= f2 + 1e-12);
    CHECK(f0 <= f4 + 1e-12);
  }
}

TEST_CASE("coercive approximation makes the bump sections bounded") {
  GridDomain dom = interval_domain(-2.0, 2.0, 0.02);
  Supremand fn = coercive_approximation(two_regime(), 8);
  BoundSupremand b = BoundSupremand::bind(fn, dom);
  GradientWindow win{30.0, 0.05};
  int inside = dom.cell_of_point({0.0, 0.0});
  double s = support_function(b, inside, 0.5, {1.0, 0.0}, win);
  CHECK(std::isfinite(s));
  CHECK(s == doctest::Approx(8 * 0.5).epsilon(0.02));  // {|xi|/8 <= 1/2}
}

TEST_CASE("lattice identities") {
  GridDomain dom = interval_domain(-1.0, 1.0, 0.05);
  Supremand f = double_well();
  Supremand g = Supremand::single(1, "0.5 * abs(xi)");
  LatticeOptions opts;
  opts.relax.window = GradientWindow{8.0, 0.01};
  opts.relax.tol = 1e-3;
  opts.bracket_lo = 0.0;
  opts.bracket_hi = 12.0;
  std::vector<GridFunction> fields;
  Rng rng(19);
  for (int k = 0; k < 5; ++k) fields.push_back(random_slopes(dom, rng, -3.0, 3.0));
  SubMask whole = SubMask::whole(dom);

  // c below the infimum: relax(F v c) = relax(F)
  LatticeReport below = lattice_checks(f, g, -0.5, fields, dom, whole, whole, opts);
  CHECK(below.join_pass);
  CHECK(below.shift_pass);
  for (const auto& row : below.shift_rows) CHECK(row.expected == row.relax_f);

  // c in the middle of the value range
  LatticeReport mid = lattice_checks(f, g, 0.5, fields, dom, whole, whole, opts);
  CHECK(mid.shift_pass);

  // c above every sampled value: both sides equal c
  LatticeOptions high = opts;
  high.bracket_hi = 16.0;
  LatticeReport above = lattice_checks(f, g, 10.0, fields, dom, whole, whole, high);
  CHECK(above.shift_pass);
  for (const auto& row : above.shift_rows)
    CHECK(row.relax_f_or_c == doctest::Approx(10.0).epsilon(1e-3));
}

TEST_CASE("level convexity: relaxation passes, raw sup value fails") {
  GridDomain dom = interval_domain(-1.0, 1.0, 0.02);
  BoundSupremand f = BoundSupremand::bind(double_well(), dom);
  RelaxOptions opts = opts_with(2.5e-4);
  std::vector<std::pair<GridFunction, GridFunction>> pairs;
  pairs.emplace_back(GridFunction::linear(dom, {1.0, 0.0}), GridFunction::linear(dom, {-1.0, 0.0}));
  Rng rng(33);
  for (int k = 0; k < 8; ++k)
    pairs.emplace_back(random_slopes(dom, rng, -3.0, 3.0), random_slopes(dom, rng, -3.0, 3.0));
  std::vector<double> thetas{1.0 / 6, 2.0 / 6, 3.0 / 6, 4.0 / 6, 5.0 / 6};

  Functional relax_fn = [&](const GridFunction& u) {
    return relax_value(f, u, 0.0, 18.0, opts).value;
  };
  LevelConvexityReport ok = level_convexity_test(relax_fn, pairs, thetas, 1e-3);
  CHECK(ok.pass);

  Functional sup_fn = [&](const GridFunction& u) { return supremal_value(f, u); };
  LevelConvexityReport bad = level_convexity_test(sup_fn, pairs, thetas, 1e-3);
  CHECK_FALSE(bad.pass);
  CHECK(bad.max_excess >= 1.0 - 1e-9);  // the affine pair: F(u_0) = 1 above 0 v 0

  // a convex norm stays level convex for the raw sup value
  BoundSupremand n = BoundSupremand::bind(Supremand::single(1, "abs(xi)"), dom);
  Functional nsup = [&](const GridFunction& u) { return supremal_value(n, u); };
  CHECK(level_convexity_test(nsup, pairs, thetas, 1e-9).pass);
}

TEST_CASE("monotone gamma limit of the coercive ladder") {
  GridDomain dom = interval_domain(-1.0, 1.0, 0.05);
  RelaxOptions opts = opts_with(2.5e-4);
  Rng rng(41);
  std::vector<GridFunction> fields;
  for (int k = 0; k < 4; ++k) {
    GridFunction u(dom);
    const auto& nodes = dom.masked_nodes();
    for (size_t i = 0; i + 1 < nodes.size(); ++i) {
      double s = rng.uniform(1.3, 3.0);
      if (rng.below(2) == 0) s = -s;
      u[nodes[i + 1]] = u[nodes[i]] + dom.h() * s;
    }
    fields.push_back(u);
  }
  std::vector<std::pair<GridFunction, GridFunction>> pairs{{fields[0], fields[1]},
                                                           {fields[2], fields[3]}};
  GammaLimitReport rep = monotone_gamma_limit(double_well(), dom, {1, 2, 4, 8, 16, 32, 64}, fields,
                                              pairs, {0.25, 0.5, 0.75}, 0.0, 18.0, 5e-3, opts);
  CHECK(rep.monotone_pass);
  CHECK(rep.limit_pass);
  CHECK(rep.limit_level_convexity.pass);
  CHECK(rep.pass());
  // zero density: relax(F_n)(u_xi) = |xi|/n decreasing to 0
  GammaLimitReport zero =
      monotone_gamma_limit(Supremand::single(1, "0"), dom, {1, 2, 4},
                           {GridFunction::linear(dom, {2.0, 0.0})}, {}, {}, 0.0, 8.0, 2.1, opts);
  CHECK(zero.monotone_pass);
  CHECK(zero.rows[0].relax_values[0] == doctest::Approx(2.0).epsilon(0.02));
  CHECK(zero.rows[0].relax_values[2] == doctest::Approx(0.5).epsilon(0.02));
  CHECK(zero.rows[0].relax_f <= 2 * opts.tol);
}

TEST_CASE("non-monotone ladders are rejected") {
  GridDomain dom = interval_domain(-1.0, 1.0, 0.1);
  RelaxOptions opts = opts_with(1e-3);
  CHECK_THROWS_AS(monotone_gamma_limit(double_well(), dom, {4, 2}, {}, {}, {}, 0.0, 8.0, 1e-2, opts),
                  DomainError);
}
