#include "supremal/relaxation.hpp"

#include <algorithm>
#include <cmath>

#include "supremal/rng.hpp"

namespace supremal {

QuotientResult difference_quotient(const FieldSet& set, const GridFunction& u, long max_pairs,
                                   uint64_t seed) {
  if (set.empty_level) throw DomainError("difference quotient over an empty level");
  const GridDomain& dom = u.domain();
  const auto& nodes = dom.masked_nodes();
  QuotientResult out;
  double sup = -kInf;
  long total = static_cast<long>(set.sources.size()) * static_cast<long>(nodes.size());
  Rng rng(seed);

  auto visit = [&](size_t si, int x) {
    int y = set.sources[si];
    if (x == y) return;
    double d = set.fields[si].dist[static_cast<size_t>(x)];
    if (!(d > 1e-15)) return;  // positivity filter
    ++out.pairs_used;
    if (std::isinf(d)) {
      sup = std::max(sup, 0.0);
      return;
    }
    sup = std::max(sup, (u[x] - u[y]) / d);
  };

  if (total <= max_pairs) {
    for (size_t si = 0; si < set.sources.size(); ++si)
      for (int x : nodes) visit(si, x);
  } else {
    for (long i = 0; i < max_pairs; ++i)
      visit(rng.below(set.sources.size()), nodes[rng.below(nodes.size())]);
  }
  out.all_filtered = out.pairs_used == 0;
  out.value = std::max(sup, 0.0);
  return out;
}

namespace {

// Edgewise form of the difference quotient: equals the pair supremum whenever
// the level's edge weights are positive (telescoping along shortest paths).
double edgewise_quotient(const EdgeSystem& es, const GridFunction& u) {
  double r = 0.0;
  for (const auto& e : es.edges) {
    double du = u[e.to] - u[e.from];
    if (e.w > 1e-15) {
      r = std::max(r, du / e.w);
    } else if (du > std::max(1e-12, e.w + 1e-12)) {
      return kInf;  // zero/negative-weight constraint violated
    }
  }
  return r;
}

}  // namespace

EnvelopeResult relax_value(const BoundSupremand& f, const GridFunction& u, double bracket_lo,
                           double bracket_hi, const RelaxOptions& opts) {
  if (!(bracket_hi >= bracket_lo)) throw DomainError("relax_value: empty bracket");
  EnvelopeResult res;
  res.eps_used = opts.eps.value_or(opts.tol / 2);
  const std::vector<uint8_t>* filter = opts.localize ? &opts.localize->cells : nullptr;

  auto probe = [&](double mu) {
    EdgeSystem es = build_edge_system(f, mu + res.eps_used, opts.window, filter);
    double r;
    if (es.empty_level) {
      res.empty_levels_seen = true;
      r = kInf;
    } else {
      r = edgewise_quotient(es, u);
    }
    res.probes.emplace_back(mu, r);
    return r <= 1.0 + 1e-9;
  };

  double lo = bracket_lo, hi = bracket_hi;
  if (probe(lo)) {
    res.value = lo;
    res.lo = res.hi = lo;
    res.at_lower_end = true;
    return res;
  }
  if (!probe(hi)) {
    res.value = hi;
    res.lo = res.hi = hi;
    res.bracketed = false;
    return res;
  }
  while (hi - lo > opts.tol) {
    double mid = 0.5 * (lo + hi);
    if (probe(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  res.lo = lo;
  res.hi = hi;
  res.value = 0.5 * (lo + hi);
  // diagnostic: the quotient should be non-increasing in the probed level
  double lowest_accept = kInf;
  for (const auto& [mu, r] : res.probes)
    if (r <= 1.0 + 1e-9) lowest_accept = std::min(lowest_accept, mu);
  for (const auto& [mu, r] : res.probes)
    if (mu > lowest_accept + 1e-15 && r > 1.0 + 1e-9) res.monotone_suspect = true;
  return res;
}

Supremand coercive_approximation(const Supremand& f, int n) {
  if (n < 1) throw DomainError("coercive_approximation needs n >= 1");
  ExprPtr bump = Expr::binary(Expr::Kind::mul, Expr::constant(1.0 / n),
                              Expr::gradient_norm(f.dim()));
  Supremand fn = f.map_profiles(
      [&](const ExprPtr& p) { return Expr::binary(Expr::Kind::max_fn, p, bump); });
  fn.coercivity = std::max(f.coercivity.value_or(0.0), 1.0 / n);
  if (f.linear_bound) fn.linear_bound = std::max(*f.linear_bound, 1.0 / n);
  return fn;
}

LatticeReport lattice_checks(const Supremand& f, const Supremand& g, double c,
                             const std::vector<GridFunction>& fields, const GridDomain& dom,
                             const SubMask& A, const SubMask& B, const LatticeOptions& opts) {
  LatticeReport rep;
  rep.c = c;
  BoundSupremand bf = BoundSupremand::bind(f, dom);
  BoundSupremand bg = BoundSupremand::bind(g, dom);
  BoundSupremand bfg = BoundSupremand::bind_max(f, g, dom);

  for (const GridFunction& u : fields) {
    LatticeReport::JoinRow row;
    row.f_value = supremal_value(bf, u);
    row.g_value = supremal_value(bg, u);
    row.join_value = supremal_value(bfg, u);
    row.exact = row.join_value == std::max(row.f_value, row.g_value);
    rep.join_pass = rep.join_pass && row.exact;
    rep.join_rows.push_back(row);
  }

  Supremand f_or_c = f.map_profiles(
      [&](const ExprPtr& p) { return Expr::binary(Expr::Kind::max_fn, p, Expr::constant(c)); });
  BoundSupremand bfc = BoundSupremand::bind(f_or_c, dom);
  for (const GridFunction& u : fields) {
    LatticeReport::ShiftRow row;
    row.relax_f = relax_value(bf, u, opts.bracket_lo, opts.bracket_hi, opts.relax).value;
    row.relax_f_or_c = relax_value(bfc, u, opts.bracket_lo, opts.bracket_hi, opts.relax).value;
    row.expected = std::max(row.relax_f, c);
    row.pass = std::fabs(row.relax_f_or_c - row.expected) <= 2 * opts.relax.tol + 2 * opts.tol;
    rep.shift_pass = rep.shift_pass && row.pass;
    rep.shift_rows.push_back(row);
  }

  if (!fields.empty()) {
    const GridFunction& u = fields.front();
    SubMask both = SubMask::union_of(A, B);
    auto meet = [&](const SubMask& m) {
      return std::min(supremal_value(bf, u, &m), supremal_value(bg, u, &m));
    };
    rep.meet_union = meet(both);
    rep.meet_parts = std::max(meet(A), meet(B));
  }
  return rep;
}

LevelConvexityReport level_convexity_test(
    const Functional& V, const std::vector<std::pair<GridFunction, GridFunction>>& pairs,
    const std::vector<double>& thetas, double tol) {
  LevelConvexityReport rep;
  for (size_t i = 0; i < pairs.size(); ++i) {
    double vu = V(pairs[i].first);
    double vv = V(pairs[i].second);
    double cap = std::max(vu, vv);
    for (double theta : thetas) {
      GridFunction blend = pairs[i].first.scaled(theta).plus(pairs[i].second, 1.0 - theta);
      double excess = V(blend) - cap;
      if (excess > rep.max_excess) {
        rep.max_excess = excess;
        rep.witness_pair = static_cast<int>(i);
        rep.witness_theta = theta;
      }
    }
  }
  rep.pass = rep.max_excess <= tol;
  return rep;
}

GammaLimitReport monotone_gamma_limit(const Supremand& f, const GridDomain& dom,
                                      const std::vector<int>& ns,
                                      const std::vector<GridFunction>& fields,
                                      const std::vector<std::pair<GridFunction, GridFunction>>& pairs,
                                      const std::vector<double>& thetas, double bracket_lo,
                                      double bracket_hi, double tol, const RelaxOptions& opts) {
  if (ns.empty() || !std::is_sorted(ns.begin(), ns.end()))
    throw DomainError("monotone_gamma_limit needs an ascending n ladder");
  GammaLimitReport rep;
  BoundSupremand bf = BoundSupremand::bind(f, dom);
  std::vector<BoundSupremand> bounds;
  std::vector<Supremand> approxs;
  approxs.reserve(ns.size());
  for (int n : ns) approxs.push_back(coercive_approximation(f, n));
  for (const Supremand& fn : approxs) bounds.push_back(BoundSupremand::bind(fn, dom));

  for (const GridFunction& u : fields) {
    GammaLimitReport::Row row;
    for (const BoundSupremand& b : bounds) row.sup_values.push_back(supremal_value(b, u));
    for (size_t i = 0; i + 1 < row.sup_values.size(); ++i)
      row.monotone = row.monotone && row.sup_values[i + 1] <= row.sup_values[i] + 1e-12;
    if (!row.monotone) throw DomainError("coercive approximations are not decreasing on a sample");
    for (const BoundSupremand& b : bounds)
      row.relax_values.push_back(relax_value(b, u, bracket_lo, bracket_hi, opts).value);
    for (size_t i = 0; i + 1 < row.relax_values.size(); ++i)
      rep.monotone_pass =
          rep.monotone_pass && row.relax_values[i + 1] <= row.relax_values[i] + 2 * opts.tol;
    row.relax_f = relax_value(bf, u, bracket_lo, bracket_hi, opts).value;
    row.limit_matches = std::fabs(row.relax_values.back() - row.relax_f) <= tol;
    rep.limit_pass = rep.limit_pass && row.limit_matches;
    rep.rows.push_back(std::move(row));
  }

  if (!pairs.empty()) {
    const BoundSupremand& tail = bounds.back();
    Functional W = [&](const GridFunction& u) {
      return relax_value(tail, u, bracket_lo, bracket_hi, opts).value;
    };
    rep.limit_level_convexity = level_convexity_test(W, pairs, thetas, tol);
  }
  return rep;
}

}  // namespace supremal
