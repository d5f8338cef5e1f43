// SPDX-License-Identifier: Apache-2.0

#include "htopos/ltopology.hpp"

#include <algorithm>

#include "htopos/error.hpp"
#include "htopos/pieces.hpp"
#include "htopos/union_find.hpp"

namespace htopos {

PresheafMap LTTopology::as_map(const Topos& t) const {
  const Presheaf& om = t.omega().object();
  return PresheafMap(om, om, j);
}

std::vector<std::string> validate_topology(const Topos& t, const LTTopology& j) {
  const Omega& om = t.omega();
  const auto& cat = t.category();
  std::vector<std::string> out;
  if (j.j.size() != cat.object_count()) return {"stage count mismatch"};
  for (Index c = 0; c < cat.object_count(); ++c)
    if (j.j[c].size() != om.object().size(c)) return {"stage " + cat.object_name(c) + " has the wrong size"};
  for (const auto& v : j.as_map(t).validate()) out.push_back("naturality: " + v);
  for (Index c = 0; c < cat.object_count(); ++c) {
    const std::string& cn = cat.object_name(c);
    Elem n = static_cast<Elem>(om.object().size(c));
    if (j(c, om.top(c)) != om.top(c)) out.push_back("j(top) != top at " + cn);
    for (Elem s = 0; s < n; ++s) {
      if (j(c, j(c, s)) != j(c, s)) out.push_back("j not idempotent at " + cn + " sieve " + std::to_string(s));
      if (!om.leq(c, s, j(c, s))) out.push_back("S not below j(S) at " + cn + " sieve " + std::to_string(s));
      for (Elem u = 0; u < n; ++u)
        if (j(c, om.meet(c, s, u)) != om.meet(c, j(c, s), j(c, u)))
          out.push_back("j does not preserve the meet of sieves " + std::to_string(s) + ", " +
                        std::to_string(u) + " at " + cn);
    }
  }
  return out;
}

std::vector<LTTopology> enumerate_topologies(const Topos& t) {
  const Omega& om = t.omega();
  HomSearch s(om.object(), om.object(), t.config().budget, "topology enumeration");
  for (Index c = 0; c < t.category().object_count(); ++c) s.pin(c, om.top(c), om.top(c));
  std::vector<LTTopology> out;
  s.for_each([&](const std::vector<Elem>& flat) {
    LTTopology cand{"", s.to_map(flat).components()};
    if (validate_topology(t, cand).empty()) {
      cand.name = "j" + std::to_string(out.size());
      out.push_back(std::move(cand));
    }
    return true;
  });
  return out;
}

LTTopology identity_topology(const Topos& t) {
  LTTopology j{"identity", {}};
  for (Index c = 0; c < t.category().object_count(); ++c) {
    Function f(t.omega().object().size(c));
    for (Elem s = 0; s < f.size(); ++s) f[s] = s;
    j.j.push_back(std::move(f));
  }
  return j;
}

LTTopology double_negation(const Topos& t) {
  const Omega& om = t.omega();
  LTTopology j{"notnot", {}};
  for (Index c = 0; c < t.category().object_count(); ++c) {
    Function f;
    for (Elem s = 0; s < om.object().size(c); ++s) f.push_back(om.neg(c, om.neg(c, s)));
    j.j.push_back(std::move(f));
  }
  return j;
}

// --- closure --------------------------------------------------------------------

Subobject closure(const Topos& t, const LTTopology& j, const Subobject& s) {
  const Omega& om = t.omega();
  PresheafMap chi = om.characteristic(s);
  Subobject out = empty_subobject(s.of);
  for (Index c = 0; c < out.selected.size(); ++c)
    for (Elem e = 0; e < s.of.size(c); ++e) out.selected[c][e] = j(c, chi(c, e)) == om.top(c);
  return out;
}

bool is_dense(const Topos& t, const LTTopology& j, const Subobject& s) {
  return closure(t, j, s) == whole_subobject(s.of);
}

bool is_closed(const Topos& t, const LTTopology& j, const Subobject& s) {
  return closure(t, j, s) == s;
}

Subobject image_subobject(const PresheafMap& m) {
  Subobject s = empty_subobject(m.cod());
  for (Index c = 0; c < s.selected.size(); ++c)
    for (Elem v : m.component(c)) s.selected[c][v] = true;
  return s;
}

bool is_dense_mono(const Topos& t, const LTTopology& j, const PresheafMap& m) {
  return is_mono(m) && is_dense(t, j, image_subobject(m));
}

Subobject diagonal(const Presheaf& x) {
  Product xx = product(x, x);
  Subobject s = empty_subobject(xx.object);
  for (Index c = 0; c < s.selected.size(); ++c)
    for (Elem e = 0; e < x.size(c); ++e) s.selected[c][xx.pair(c, e, e)] = true;
  return s;
}

bool is_separated(const Topos& t, const LTTopology& j, const Presheaf& x) {
  return is_closed(t, j, diagonal(x));
}

Subobject mod_relation(const Topos& t, const LTTopology& j, const Presheaf& x) {
  return closure(t, j, diagonal(x));
}

// --- quotient -------------------------------------------------------------------

QuotientResult quotient(const Topos& t, const LTTopology& j, const Presheaf& x) {
  Subobject r = mod_relation(t, j, x);
  const auto& cat = t.category();
  std::vector<std::vector<std::size_t>> labels(cat.object_count());
  for (Index c = 0; c < cat.object_count(); ++c) {
    const std::size_t n = x.size(c);
    auto in = [&](Elem a, Elem b) { return r.selected[c][a * n + b]; };
    UnionFind uf(n);
    for (Elem a = 0; a < n; ++a) {
      if (!in(a, a)) throw InternalError("closed diagonal is not reflexive at " + cat.object_name(c));
      for (Elem b = 0; b < n; ++b) {
        if (!in(a, b)) continue;
        if (!in(b, a)) throw InternalError("closed diagonal is not symmetric at " + cat.object_name(c));
        uf.unite(a, b);
      }
    }
    for (Elem a = 0; a < n; ++a)
      for (Elem b = 0; b < n; ++b)
        if (uf.same(a, b) && !in(a, b))
          throw InternalError("closed diagonal is not transitive at " + cat.object_name(c));
    labels[c] = uf.labels();
  }
  auto v = r.validate();
  if (!v.empty()) throw InternalError("closed diagonal is not a subpresheaf: " + v.front());
  Quotient qt = quotient_by_labels(x, labels);
  return {r, qt.object, qt.q};
}

PresheafMap quotient_map(const QuotientResult& qx, const QuotientResult& qy, const PresheafMap& g) {
  const auto& cat = g.dom().base();
  std::vector<Function> comp(cat.object_count());
  for (Index c = 0; c < comp.size(); ++c) {
    comp[c].assign(qx.object.size(c), kNone);
    for (Elem e = 0; e < g.dom().size(c); ++e) {
      Elem k = qx.q(c, e), v = qy.q(c, g(c, e));
      if (comp[c][k] != kNone && comp[c][k] != v)
        throw SemanticError("arrow does not preserve the modal relation");
      comp[c][k] = v;
    }
  }
  return PresheafMap(qx.object, qy.object, std::move(comp));
}

MediatorResult quotient_universal(const Topos& t, const QuotientResult& qx, const PresheafMap& f) {
  MediatorResult out;
  const auto& cat = t.category();
  const Presheaf& x = qx.q.dom();
  if (!(f.dom() == x)) throw ShapeError("quotient_universal: map does not start at X");
  for (Index c = 0; c < cat.object_count() && out.respects; ++c) {
    const std::size_t n = x.size(c);
    for (Elem a = 0; a < n && out.respects; ++a)
      for (Elem b = 0; b < n; ++b)
        if (qx.relation.selected[c][a * n + b] && f(c, a) != f(c, b)) {
          out.respects = false;
          out.witness = "related " + std::to_string(a) + " ~ " + std::to_string(b) + " at " +
                        cat.object_name(c) + " are sent to " + std::to_string(f(c, a)) + " and " +
                        std::to_string(f(c, b));
          break;
        }
  }
  if (!out.respects) return out;
  std::vector<Function> comp(cat.object_count());
  for (Index c = 0; c < comp.size(); ++c) {
    comp[c].assign(qx.object.size(c), 0);
    for (Elem e = 0; e < x.size(c); ++e) comp[c][qx.q(c, e)] = f(c, e);
  }
  out.mediator = PresheafMap::checked(qx.object, f.cod(), std::move(comp));
  HomSearch s(qx.object, f.cod(), t.config().budget, "mediator search");
  for (Index c = 0; c < cat.object_count(); ++c)
    for (Elem e = 0; e < x.size(c); ++e) s.pin(c, qx.q(c, e), f(c, e));
  out.solutions = s.count();
  return out;
}

// --- coverage ---------------------------------------------------------------------

Coverage coverage(const Topos& t, const LTTopology& j) {
  const Omega& om = t.omega();
  Coverage cov;
  for (Index c = 0; c < t.category().object_count(); ++c) {
    cov.covers.emplace_back();
    for (Elem s = 0; s < om.object().size(c); ++s)
      if (j(c, s) == om.top(c)) cov.covers.back().push_back(s);
  }
  return cov;
}

LTTopology topology_from_coverage(const Topos& t, const Coverage& cov) {
  const Omega& om = t.omega();
  const auto& cat = t.category();
  LTTopology j{"from-coverage", {}};
  for (Index c = 0; c < cat.object_count(); ++c) {
    Function fn;
    for (Elem s = 0; s < om.object().size(c); ++s) {
      std::uint64_t m = 0;
      for (Index f : cat.into(c)) {
        Elem pulled = om.object().act(f, s);
        const auto& cd = cov.covers[cat.dom(f)];
        if (std::find(cd.begin(), cd.end(), pulled) != cd.end()) m |= std::uint64_t{1} << f;
      }
      fn.push_back(om.index_of(c, m));
    }
    j.j.push_back(std::move(fn));
  }
  return j;
}

// --- sheafification ---------------------------------------------------------------

namespace {

// A sieve on c as a subpresheaf of y(c), with positions of its members.
struct SievePresheaf {
  Presheaf object;
  std::vector<Elem> position;  // position[m] inside its stage, kNone if absent
};

SievePresheaf sieve_presheaf(const Topos& t, Index c, std::uint64_t mask) {
  Presheaf yc = t.yoneda(c);
  Subobject sub = empty_subobject(yc);
  const auto& cat = t.category();
  SievePresheaf out;
  out.position.assign(cat.morphism_count(), kNone);
  for (Index d = 0; d < cat.object_count(); ++d) {
    Elem next = 0;
    for (std::size_t gi = 0; gi < cat.hom(d, c).size(); ++gi) {
      Index g = cat.hom(d, c)[gi];
      if ((mask >> g) & 1U) {
        sub.selected[d][gi] = true;
        out.position[g] = next++;
      }
    }
  }
  out.object = subobject_presheaf(sub).object;
  return out;
}

struct MatchTable {
  SievePresheaf sieve;
  std::vector<std::vector<Elem>> families;  // sorted flat tables
};

MatchTable matching_families(const Topos& t, Index c, std::uint64_t mask, const Presheaf& x) {
  MatchTable mt{sieve_presheaf(t, c, mask), {}};
  HomSearch s(mt.sieve.object, x, t.config().budget,
              "matching families at " + t.category().object_name(c));
  s.for_each([&](const std::vector<Elem>& v) {
    mt.families.push_back(v);
    return true;
  });
  return mt;
}

// (X(m)x) for m in the sieve, as a flat table over the sieve presheaf.
std::vector<Elem> restrict_family(const Topos& t, const SievePresheaf& sp, const Presheaf& x, Index c,
                                  Elem e, std::uint64_t mask) {
  const auto& cat = t.category();
  std::vector<Elem> flat(sp.object.total_size());
  for (Index m : cat.into(c))
    if ((mask >> m) & 1U) flat[sp.object.offset(cat.dom(m)) + sp.position[m]] = x.act(m, e);
  return flat;
}

Elem find_family(const std::vector<std::vector<Elem>>& fams, const std::vector<Elem>& v) {
  auto it = std::lower_bound(fams.begin(), fams.end(), v);
  if (it == fams.end() || *it != v) throw InternalError("family is not matching");
  return static_cast<Elem>(it - fams.begin());
}

std::pair<Presheaf, PresheafMap> plus_construction(const Topos& t, const LTTopology& j,
                                                   const Presheaf& x) {
  const Omega& om = t.omega();
  const auto& cat = t.category();
  const std::size_t n = cat.object_count();
  std::vector<std::uint64_t> least(n);
  std::vector<MatchTable> tables;
  for (Index c = 0; c < n; ++c) {
    std::uint64_t m = om.mask(c, om.top(c));
    for (Elem s = 0; s < om.object().size(c); ++s)
      if (j(c, s) == om.top(c)) m &= om.mask(c, s);
    least[c] = m;
    tables.push_back(matching_families(t, c, m, x));
  }
  std::vector<std::size_t> sizes(n);
  for (Index c = 0; c < n; ++c) sizes[c] = tables[c].families.size();
  std::vector<Function> action(cat.morphism_count());
  for (Index h = 0; h < cat.morphism_count(); ++h) {
    Index c = cat.cod(h), d = cat.dom(h);
    const auto& src = tables[c];
    const auto& dst = tables[d];
    for (const auto& fam : src.families) {
      std::vector<Elem> out(dst.sieve.object.total_size());
      for (Index g : cat.into(d)) {
        if (!((least[d] >> g) & 1U)) continue;
        Index hg = cat.compose(h, g);
        if (!((least[c] >> hg) & 1U)) throw InternalError("least cover is not stable under pullback");
        out[dst.sieve.object.offset(cat.dom(g)) + dst.sieve.position[g]] =
            fam[src.sieve.object.offset(cat.dom(hg)) + src.sieve.position[hg]];
      }
      action[h].push_back(find_family(dst.families, out));
    }
  }
  Presheaf plus(t.site(), std::move(sizes), std::move(action));
  std::vector<Function> unit(n);
  for (Index c = 0; c < n; ++c)
    for (Elem e = 0; e < x.size(c); ++e)
      unit[c].push_back(find_family(tables[c].families, restrict_family(t, tables[c].sieve, x, c, e, least[c])));
  PresheafMap u(x, plus, std::move(unit));
  return {plus, u};
}

}  // namespace

Sheafification sheafify(const Topos& t, const LTTopology& j, const Presheaf& x) {
  auto [p1, u1] = plus_construction(t, j, x);
  auto [p2, u2] = plus_construction(t, j, p1);
  return {p1, u1, p2, compose(u2, u1)};
}

bool is_sheaf(const Topos& t, const LTTopology& j, const Presheaf& x, std::string* witness) {
  const Omega& om = t.omega();
  const auto& cat = t.category();
  for (Index c = 0; c < cat.object_count(); ++c) {
    for (Elem s = 0; s < om.object().size(c); ++s) {
      if (j(c, s) != om.top(c)) continue;
      std::uint64_t mask = om.mask(c, s);
      MatchTable mt = matching_families(t, c, mask, x);
      std::vector<bool> hit(mt.families.size(), false);
      bool ok = mt.families.size() == x.size(c);
      for (Elem e = 0; e < x.size(c) && ok; ++e) {
        Elem k = find_family(mt.families, restrict_family(t, mt.sieve, x, c, e, mask));
        if (hit[k]) ok = false;
        hit[k] = true;
      }
      if (!ok) {
        if (witness)
          *witness = "restriction to cover " + std::to_string(s) + " of " + cat.object_name(c) +
                     " is not bijective (" + std::to_string(x.size(c)) + " elements, " +
                     std::to_string(mt.families.size()) + " matching families)";
        return false;
      }
    }
  }
  return true;
}

// --- homotopy lifting ----------------------------------------------------------------

LiftResult homotopy_lift(const Topos& t, const LTTopology& j, const LiftInputs& in,
                         const Sheafification& lx, bool hypotheses_hold) {
  if (!hypotheses_hold) throw PreconditionError("homotopy_lift: NS and DSO certificates required");
  if (!(j == double_negation(t))) throw PreconditionError("homotopy_lift: topology must be double negation");
  const Presheaf& k = in.k;
  const Presheaf& x = in.x;
  Product kx = product(k, x);
  if (!(in.h.dom() == kx.object)) throw ShapeError("homotopy_lift: h must start at K×X");
  if (!(in.f.dom() == in.h.cod()) || !(in.f.cod() == lx.object))
    throw ShapeError("homotopy_lift: f must go from the codomain of h to LX");
  LiftResult r;
  auto gk = points(t, k);
  auto gx = points(t, x);
  Product gg = product(gk.gamma.dom(), gx.gamma.dom());
  Product klx = product(k, lx.object);
  PresheafMap one_l = product_maps(kx, klx, identity_map(k), lx.unit);
  PresheafMap m = compose(one_l, product_maps(gg, kx, gk.gamma, gx.gamma));
  r.dense_mono = is_dense_mono(t, j, m);
  PresheafMap fh = compose(in.f, in.h);
  PresheafMap v = compose(fh, product_maps(gg, kx, gk.gamma, gx.gamma));
  const std::size_t n = t.category().object_count();
  {
    HomSearch s(klx.object, lx.object, t.config().budget, "homotopy lift");
    for (Index c = 0; c < n; ++c)
      for (Elem e = 0; e < gg.object.size(c); ++e) s.pin(c, m(c, e), v(c, e));
    r.lift = s.first();
  }
  r.exists = r.lift.has_value();
  if (r.exists) {
    r.commutes = compose(*r.lift, one_l) == fh;
    if (!r.commutes) r.witness = "extension from the points does not make the square commute";
  } else {
    r.witness = "no extension along the dense mono";
  }
  HomSearch s(klx.object, lx.object, t.config().budget, "homotopy lift uniqueness");
  for (Index c = 0; c < n; ++c)
    for (Elem e = 0; e < kx.object.size(c); ++e) s.pin(c, one_l(c, e), fh(c, e));
  r.solutions = s.count();
  if (r.exists && r.commutes && r.solutions != 1)
    r.witness = std::to_string(r.solutions) + " arrows make the square commute";
  return r;
}

}  // namespace htopos
